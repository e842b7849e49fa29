//! The graphs `Γ₂` and `Γ_p`.
//!
//! `Γ_p` has vertex set `V_p = {2^i·p^j : i >= 0, j >= 1}` and joins `x, y`
//! whenever `A_{x,y} = {2, p}`. Its edges come in a handful of parametric
//! families that depend on whether `p` is a Fermat prime, a Mersenne prime,
//! both (only `p = 3`) or neither. This module builds the edge set twice,
//! once by testing every vertex pair and once from the families, so the two
//! can be compared.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::filters::pair_a;
use crate::numtheory::{self, PrimeKind, PrimeSet, PrimeType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GammaError {
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("{v} is not a vertex of Γ_{p}")]
    NotAVertex { p: u64, v: u64 },
}

/// Unordered edge, stored with the smaller endpoint first.
pub type Edge = (u64, u64);

fn edge(x: u64, y: u64) -> Edge {
    (x.min(y), x.max(y))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GammaGraph {
    /// 2 for `Γ₂`, otherwise the odd prime.
    pub p: u64,
    pub prime_type: Option<PrimeType>,
    pub vertices: BTreeSet<u64>,
    pub edges: BTreeSet<Edge>,
    pub bound: u64,
}

#[derive(Serialize, Deserialize)]
pub struct AdjacencyJson {
    pub p: u64,
    pub vertices: Vec<u64>,
    pub edges: Vec<[u64; 2]>,
}

impl GammaGraph {
    pub fn degree(&self, v: u64) -> usize {
        self.edges.iter().filter(|&&(x, y)| x == v || y == v).count()
    }

    pub fn to_json(&self) -> AdjacencyJson {
        AdjacencyJson {
            p: self.p,
            vertices: self.vertices.iter().copied().collect(),
            edges: self.edges.iter().map(|&(x, y)| [x, y]).collect(),
        }
    }

    /// `(i, j)` with `v = 2^i·p^j`.
    fn exponents(&self, v: u64) -> (u32, u32) {
        let i = v.trailing_zeros();
        let mut rest = v >> i;
        let mut j = 0;
        if self.p != 2 {
            while rest % self.p == 0 {
                rest /= self.p;
                j += 1;
            }
        }
        (i, j)
    }

    fn label(&self, v: u64) -> String {
        let (i, j) = self.exponents(v);
        if self.p == 2 {
            format!("2^{i}")
        } else {
            format!("2^{i}·{}^{j}", self.p)
        }
    }
}

/// The chain `1 - 2 - 4 - …` on powers of two up to `bound`.
pub fn gamma2(bound: u64) -> GammaGraph {
    let vertices: BTreeSet<u64> = (0..64)
        .map(|n| 1u64 << n)
        .take_while(|&v| v <= bound)
        .collect();
    let edges = vertices
        .iter()
        .filter(|&&v| v.checked_mul(2).is_some_and(|w| w <= bound))
        .map(|&v| (v, 2 * v))
        .collect();
    GammaGraph {
        p: 2,
        prime_type: None,
        vertices,
        edges,
        bound,
    }
}

fn odd_prime_type(p: u64) -> Result<PrimeType, GammaError> {
    if p == 2 {
        return Err(GammaError::NotOddPrime(p));
    }
    numtheory::classify_prime(p).map_err(|_| GammaError::NotOddPrime(p))
}

fn vertex(p: u64, i: u32, j: u32) -> Option<u64> {
    2u64.checked_pow(i)
        .and_then(|t| p.checked_pow(j).and_then(|pj| t.checked_mul(pj)))
}

/// `{2^i·p^j <= bound : i >= 0, j >= 1}`.
pub fn vertices(p: u64, bound: u64) -> Result<BTreeSet<u64>, GammaError> {
    odd_prime_type(p)?;
    let mut out = BTreeSet::new();
    for j in 1.. {
        match vertex(p, 0, j) {
            Some(v) if v <= bound => {}
            _ => break,
        }
        for i in 0.. {
            match vertex(p, i, j) {
                Some(v) if v <= bound => out.insert(v),
                _ => break,
            };
        }
    }
    Ok(out)
}

/// Every vertex pair whose doubleton signature is exactly `{2, p}`.
pub fn edges_by_definition(p: u64, bound: u64) -> Result<BTreeSet<Edge>, GammaError> {
    let vs: Vec<u64> = vertices(p, bound)?.into_iter().collect();
    let target = PrimeSet::from_primes([2, p]).expect("2 and p are prime");
    let mut out = BTreeSet::new();
    for (k, &x) in vs.iter().enumerate() {
        for &y in &vs[k + 1..] {
            if pair_a(x, y) == target {
                out.insert(edge(x, y));
            }
        }
    }
    Ok(out)
}

/// An edge family `{2^{a+dx}·p^{b+ex}, 2^{a+dy}·p^{b+ey}}` over `a, b >= 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Family {
    pub x: (i64, i64),
    pub y: (i64, i64),
}

const fn fam(x: (i64, i64), y: (i64, i64)) -> Family {
    Family { x, y }
}

/// The edge families of `Γ_p` for the given prime type.
///
/// The last two families for `p = 3` are written so that their smaller
/// 2-exponent can be 0, which picks up `{6, 9}` and `{24, 27}`.
pub fn families(t: &PrimeType) -> Vec<Family> {
    let m = t.witness_exponent.map(i64::from).unwrap_or(0);
    match t.tag {
        PrimeKind::Both => vec![
            fam((-1, 0), (-1, 1)),
            fam((-1, 0), (-1, 2)),
            fam((-1, 0), (0, 0)),
            fam((-1, 0), (1, 0)),
            fam((-1, 1), (1, 0)),
            fam((0, 0), (-1, 1)),
            fam((2, 0), (-1, 2)),
        ],
        PrimeKind::Fermat => vec![
            fam((-1, 0), (-1, 1)),
            fam((-1, 0), (0, 0)),
            fam((m - 1, 0), (-1, 1)),
        ],
        PrimeKind::Mersenne => vec![
            fam((-1, 0), (0, 0)),
            fam((-1, 0), (m - 1, 0)),
            fam((-1, 1), (m - 1, 0)),
        ],
        PrimeKind::Neither => vec![fam((0, 0), (-1, 0))],
    }
}

fn endpoint(p: u64, (d, e): (i64, i64), a: i64, b: i64) -> Option<u64> {
    let (i, j) = (a + d, b + e);
    if i < 0 || j < 1 || i > 63 || j > 63 {
        return None;
    }
    vertex(p, i as u32, j as u32)
}

/// Edges instantiated from [`families`] with both endpoints `<= bound`.
pub fn edges_closed_form(p: u64, bound: u64) -> Result<BTreeSet<Edge>, GammaError> {
    let t = odd_prime_type(p)?;
    let mut out = BTreeSet::new();
    for f in families(&t) {
        for b in 1..=63 {
            for a in 1..=64 {
                if let (Some(x), Some(y)) = (endpoint(p, f.x, a, b), endpoint(p, f.y, a, b)) {
                    if x <= bound && y <= bound {
                        out.insert(edge(x, y));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `Γ_p` restricted to vertices `<= bound`, edges tested pair by pair.
pub fn gamma_p(p: u64, bound: u64) -> Result<GammaGraph, GammaError> {
    let t = odd_prime_type(p)?;
    Ok(GammaGraph {
        p,
        prime_type: Some(t),
        vertices: vertices(p, bound)?,
        edges: edges_by_definition(p, bound)?,
        bound,
    })
}

/// Neighbours of `2^i·p^j` in the unbounded `Γ_p`, as exponent pairs.
pub fn neighbors_infinite(p: u64, i: u32, j: u32) -> Result<BTreeSet<(u32, u32)>, GammaError> {
    let t = odd_prime_type(p)?;
    if j == 0 {
        return Err(GammaError::NotAVertex {
            p,
            v: vertex(p, i, j).unwrap_or(0),
        });
    }
    let (i, j) = (i as i64, j as i64);
    let mut out = BTreeSet::new();
    for f in families(&t) {
        for (here, there) in [(f.x, f.y), (f.y, f.x)] {
            let (a, b) = (i - here.0, j - here.1);
            if a >= 1 && b >= 1 {
                out.insert(((a + there.0) as u32, (b + there.1) as u32));
            }
        }
    }
    Ok(out)
}

/// Degree of `v` in the unbounded `Γ_p`, counted from family memberships so
/// that no bound truncates it.
pub fn degree_infinite(p: u64, v: u64) -> Result<usize, GammaError> {
    odd_prime_type(p)?;
    let not_vertex = GammaError::NotAVertex { p, v };
    if v == 0 {
        return Err(not_vertex);
    }
    let i = v.trailing_zeros();
    let mut rest = v >> i;
    let mut j = 0;
    while rest % p == 0 {
        rest /= p;
        j += 1;
    }
    if rest != 1 || j == 0 {
        return Err(not_vertex);
    }
    Ok(neighbors_infinite(p, i, j)?.len())
}

/// Graphviz rendering; one node per line, vertices and edges ascending.
pub fn export_dot(g: &GammaGraph) -> String {
    let mut out = String::new();
    writeln!(out, "graph gamma_{} {{", g.p).unwrap();
    for &v in &g.vertices {
        writeln!(out, "  {v} [label=\"{}\"];", g.label(v)).unwrap();
    }
    for &(x, y) in &g.edges {
        writeln!(out, "  {x} -- {y};").unwrap();
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[u64]) -> BTreeSet<u64> {
        v.iter().copied().collect()
    }

    #[test]
    fn gamma2_examples() {
        let g = gamma2(8);
        assert_eq!(g.vertices, set(&[1, 2, 4, 8]));
        assert_eq!(g.edges, BTreeSet::from([(1, 2), (2, 4), (4, 8)]));
        let g = gamma2(1);
        assert_eq!((g.vertices.len(), g.edges.len()), (1, 0));
        let g = gamma2(100);
        assert_eq!((g.vertices.len(), g.edges.len()), (7, 6));
        assert_eq!(g.degree(1), 1);
        assert!((1..6).all(|n| g.degree(1 << n) == 2));
    }

    #[test]
    fn gamma2_edges_have_trivial_signature() {
        let two = PrimeSet::from_primes([2]).unwrap();
        for (x, y) in gamma2(1 << 40).edges {
            assert_eq!(pair_a(x, y), two);
        }
    }

    #[test]
    fn vertex_examples() {
        assert_eq!(vertices(3, 30).unwrap(), set(&[3, 6, 9, 12, 18, 24, 27]));
        assert_eq!(vertices(11, 12).unwrap(), set(&[11]));
        assert_eq!(vertices(5, 100).unwrap(), set(&[5, 10, 20, 25, 40, 50, 80, 100]));
        assert_eq!(vertices(9, 100), Err(GammaError::NotOddPrime(9)));
        assert_eq!(vertices(2, 100), Err(GammaError::NotOddPrime(2)));
    }

    #[test]
    fn definition_edge_examples() {
        assert_eq!(
            edges_by_definition(3, 12).unwrap(),
            BTreeSet::from([(3, 6), (3, 9), (3, 12), (6, 9), (6, 12), (9, 12)])
        );
        assert_eq!(edges_by_definition(11, 25).unwrap(), BTreeSet::from([(11, 22)]));
        assert_eq!(edges_by_definition(7, 14).unwrap(), BTreeSet::from([(7, 14)]));
    }

    #[test]
    fn closed_form_edge_examples() {
        let e3 = edges_closed_form(3, 54).unwrap();
        assert!(e3.contains(&(9, 12)));
        assert!(e3.contains(&(48, 54)));
        assert!(e3.contains(&(24, 27)));
        assert!(edges_closed_form(5, 25).unwrap().contains(&(20, 25)));
        assert!(edges_closed_form(7, 56).unwrap().contains(&(49, 56)));
    }

    #[test]
    fn closed_form_matches_definition_small() {
        for p in [3, 5, 7, 11, 13, 17, 19, 31, 37, 127, 257] {
            assert_eq!(
                edges_closed_form(p, 200_000).unwrap(),
                edges_by_definition(p, 200_000).unwrap(),
                "p = {p}"
            );
        }
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_infinite(3, 3), Ok(4));
        assert_eq!(degree_infinite(7, 7), Ok(2));
        for k in 1..=3 {
            assert_eq!(degree_infinite(11, 11u64.pow(k)), Ok(1));
        }
        assert_eq!(degree_infinite(11, 22), Ok(2));
        assert_eq!(degree_infinite(3, 10), Err(GammaError::NotAVertex { p: 3, v: 10 }));
        assert_eq!(degree_infinite(3, 4), Err(GammaError::NotAVertex { p: 3, v: 4 }));
    }

    #[test]
    fn infinite_degree_dominates_truncated_degree() {
        for p in [3, 5, 7, 11] {
            let g = gamma_p(p, 1 << 24).unwrap();
            for &v in g.vertices.iter().filter(|&&v| v < 1 << 18) {
                // far from the bound nothing is truncated
                assert_eq!(g.degree(v), degree_infinite(p, v).unwrap(), "p={p} v={v}");
            }
        }
    }

    #[test]
    fn dot_and_json_exports() {
        let g = gamma2(4);
        let dot = export_dot(&g);
        assert_eq!(dot.matches("[label=").count(), 3);
        assert_eq!(dot.matches(" -- ").count(), 2);

        let g = gamma_p(11, 25).unwrap();
        let dot = export_dot(&g);
        assert_eq!(
            dot,
            "graph gamma_11 {\n  11 [label=\"2^0·11^1\"];\n  22 [label=\"2^1·11^1\"];\n  11 -- 22;\n}\n"
        );

        let g = gamma_p(3, 12).unwrap();
        let dot = export_dot(&g);
        assert_eq!(dot.matches("[label=").count(), 4);
        assert_eq!(dot.matches(" -- ").count(), 6);
        let json = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(
            json,
            r#"{"p":3,"vertices":[3,6,9,12],"edges":[[3,6],[3,9],[3,12],[6,9],[6,12],[9,12]]}"#
        );
    }
}
