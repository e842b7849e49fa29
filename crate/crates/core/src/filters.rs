//! The superconnecting poset of the Kirch space.
//!
//! A finite set `E ⊂ ℕ` with at least two elements determines its filter
//! `𝔉_E` through three arithmetic invariants:
//!
//! * `A_E`, the primes `p` such that `E ⊂ {0, k} + pℤ` for some `k`;
//! * `Π_E`, the primes dividing every element of `E`;
//! * `α_E`, the residue map on `A_E` with `α(2) = 1`, `α(p) = 0` on
//!   `Π_E \ {2}` and otherwise the unique nonzero residue shared by `E`.
//!
//! Singletons are isolated in the order and carry the full prime set as
//! `A_E`. Everything in this module works on [`FilterDescriptor`]s, which
//! record exactly these invariants.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{self, crt_solve, Congruence, NumError, PrimeSet};
use crate::progressions::CongruenceSet;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FilterError {
    #[error("the set must be nonempty")]
    Empty,
    #[error("elements must be positive integers")]
    ZeroElement,
    #[error("operation needs at least two elements, got {0}")]
    TooSmall(usize),
    #[error("bad shape: {0}")]
    BadShape(String),
    #[error("prime {0} lies in both L and A_E")]
    Overlap(u64),
    #[error("expected an FDoublePrime filter, got {0}")]
    WrongClass(ClassLabel),
    #[error("{x}^{n} does not fit in 64 bits")]
    Overflow { x: u64, n: u32 },
    #[error("descriptor does not match its set: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Num(#[from] NumError),
}

/// `A_E`: either all primes (singletons) or a finite set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PrimeSignature {
    AllPrimes,
    Finite(PrimeSet),
}

impl PrimeSignature {
    pub fn finite(&self) -> Option<&PrimeSet> {
        match self {
            PrimeSignature::AllPrimes => None,
            PrimeSignature::Finite(a) => Some(a),
        }
    }

    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSignature::AllPrimes => numtheory::is_prime(p),
            PrimeSignature::Finite(a) => a.contains(p),
        }
    }
}

impl Serialize for PrimeSignature {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            PrimeSignature::AllPrimes => s.serialize_str("all"),
            PrimeSignature::Finite(a) => a.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for PrimeSignature {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Tag(String),
            Set(PrimeSet),
        }
        match Raw::deserialize(d)? {
            Raw::Tag(t) if t == "all" => Ok(PrimeSignature::AllPrimes),
            Raw::Tag(t) => Err(serde::de::Error::custom(format!("unknown prime signature {t:?}"))),
            Raw::Set(a) => Ok(PrimeSignature::Finite(a)),
        }
    }
}

/// Canonical record `(E, A_E, Π_E, α_E)` of the filter `𝔉_E`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawDescriptor")]
pub struct FilterDescriptor {
    #[serde(rename = "E")]
    elements: Vec<u64>,
    #[serde(rename = "A")]
    a: PrimeSignature,
    #[serde(rename = "Pi")]
    pi: PrimeSet,
    alpha: BTreeMap<u64, u64>,
}

#[derive(Deserialize)]
struct RawDescriptor {
    #[serde(rename = "E")]
    elements: Vec<u64>,
    #[serde(rename = "A")]
    a: PrimeSignature,
    #[serde(rename = "Pi")]
    pi: PrimeSet,
    alpha: BTreeMap<u64, u64>,
}

impl TryFrom<RawDescriptor> for FilterDescriptor {
    type Error = FilterError;

    fn try_from(raw: RawDescriptor) -> Result<Self, Self::Error> {
        let d = descriptor(&raw.elements)?;
        let claimed = FilterDescriptor {
            elements: d.elements.clone(),
            a: raw.a,
            pi: raw.pi,
            alpha: raw.alpha,
        };
        if claimed != d {
            return Err(FilterError::Inconsistent(format!("{:?}", raw.elements)));
        }
        Ok(d)
    }
}

impl FilterDescriptor {
    pub fn elements(&self) -> &[u64] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_singleton(&self) -> bool {
        self.elements.len() == 1
    }

    pub fn a(&self) -> &PrimeSignature {
        &self.a
    }

    /// `A_E` for sets with at least two elements.
    pub fn a_finite(&self) -> Option<&PrimeSet> {
        self.a.finite()
    }

    pub fn pi(&self) -> &PrimeSet {
        &self.pi
    }

    /// `α_E`; empty for singletons.
    pub fn alpha(&self) -> &BTreeMap<u64, u64> {
        &self.alpha
    }

    pub fn alpha_at(&self, p: u64) -> Option<u64> {
        self.alpha.get(&p).copied()
    }

    pub fn le(&self, other: &FilterDescriptor) -> bool {
        filter_le(self, other)
    }
}

impl fmt::Display for FilterDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<String> = self.elements.iter().map(u64::to_string).collect();
        write!(f, "𝔉{{{}}}", e.join(","))
    }
}

/// Sorts and deduplicates `set`, rejecting empty input and zero.
pub fn normalize_set(set: &[u64]) -> Result<Vec<u64>, FilterError> {
    if set.is_empty() {
        return Err(FilterError::Empty);
    }
    if set.contains(&0) {
        return Err(FilterError::ZeroElement);
    }
    let s: BTreeSet<u64> = set.iter().copied().collect();
    Ok(s.into_iter().collect())
}

/// Distinct nonzero residues of `set` modulo `p`, stopping at two.
fn nonzero_residues(set: &[u64], p: u64) -> (Option<u64>, bool) {
    let mut seen = None;
    for &e in set {
        let r = e % p;
        if r == 0 {
            continue;
        }
        match seen {
            None => seen = Some(r),
            Some(s) if s != r => return (seen, true),
            _ => {}
        }
    }
    (seen, false)
}

/// `A_E` for `|E| >= 2`.
///
/// A prime `p` belongs to `A_E` iff the nonzero residues of `E` mod `p`
/// take at most one value. Such a `p` must divide one of the two smallest
/// elements or their difference, so only those primes (and 2) are tested.
pub fn compute_a(set: &[u64]) -> Result<PrimeSet, FilterError> {
    let e = normalize_set(set)?;
    if e.len() < 2 {
        return Err(FilterError::TooSmall(e.len()));
    }
    let candidates = numtheory::prime_factors(e[0])
        .union(&numtheory::prime_factors(e[1]))
        .union(&numtheory::prime_factors(e[1] - e[0]));
    let mut out: Vec<u64> = candidates
        .iter()
        .filter(|&p| !nonzero_residues(&e, p).1)
        .collect();
    if !out.contains(&2) {
        out.insert(0, 2);
    }
    Ok(PrimeSet::from_sorted_unchecked(out))
}

/// `{2} ∪ Π_x ∪ Π_y ∪ Π_|x−y|`, the prime signature of a doubleton.
pub fn pair_a(x: u64, y: u64) -> PrimeSet {
    assert!(x != y && x >= 1 && y >= 1, "pair_a expects two distinct positive integers");
    let mut s = numtheory::prime_factors(x)
        .union(&numtheory::prime_factors(y))
        .union(&numtheory::prime_factors(x.abs_diff(y)));
    s.insert(2).expect("2 is prime");
    s
}

pub fn descriptor(set: &[u64]) -> Result<FilterDescriptor, FilterError> {
    let elements = normalize_set(set)?;
    let pi = elements
        .iter()
        .map(|&x| numtheory::prime_factors(x))
        .reduce(|acc, p| acc.intersection(&p))
        .expect("nonempty");
    if elements.len() == 1 {
        return Ok(FilterDescriptor {
            elements,
            a: PrimeSignature::AllPrimes,
            pi,
            alpha: BTreeMap::new(),
        });
    }
    let a = compute_a(&elements)?;
    let alpha = a
        .iter()
        .map(|p| {
            let value = if p == 2 {
                1
            } else if pi.contains(p) {
                0
            } else {
                nonzero_residues(&elements, p).0.expect("p ∉ Π_E leaves a nonzero residue")
            };
            (p, value)
        })
        .collect();
    Ok(FilterDescriptor {
        elements,
        a: PrimeSignature::Finite(a),
        pi,
        alpha,
    })
}

/// Builds a set `E = {y, x, 2x}` whose descriptor has the prescribed `A` and
/// `α`: `x` is the product of the odd primes of `A` and `y` the least
/// positive solution of `y ≡ α(p) (mod p)` over `p ∈ A`.
///
/// When `α` vanishes on every odd prime, `y = x` and the set collapses to
/// `{x, 2x}`.
pub fn realize(a: &PrimeSet, alpha: &BTreeMap<u64, u64>) -> Result<Vec<u64>, FilterError> {
    let bad = |msg: String| Err(FilterError::BadShape(msg));
    if !a.contains(2) {
        return bad("2 must belong to A".into());
    }
    if a.len() == 1 {
        return bad("A must contain an odd prime".into());
    }
    if alpha.get(&2) != Some(&1) {
        return bad("alpha(2) must be 1".into());
    }
    if !alpha.keys().copied().eq(a.iter()) {
        return bad("alpha must be defined exactly on A".into());
    }
    if let Some((p, k)) = alpha.iter().find(|(&p, &k)| k >= p) {
        return bad(format!("alpha({p}) = {k} is not a residue mod {p}"));
    }
    let x = a
        .iter()
        .filter(|&p| p != 2)
        .try_fold(1u64, |acc, p| acc.checked_mul(p))
        .and_then(|x| x.checked_mul(2).map(|_| x))
        .ok_or_else(|| FilterError::BadShape("product of A overflows".into()))?;
    let classes: Vec<Congruence> = alpha
        .iter()
        .map(|(&p, &k)| Congruence::new(k, p))
        .collect::<Result<_, _>>()?;
    let y = crt_solve(&classes)?.least_positive();
    normalize_set(&[y, x, 2 * x])
}

/// The base set of `𝔉_E` indexed by a finite set of primes `L` disjoint from
/// `A_E`: `⋂_{p∈L} pℕ ∩ ⋂_{p∈A_E∖Π_E} ({0, α_E(p)} + pℤ)`.
pub fn generator(d: &FilterDescriptor, l: &PrimeSet) -> Result<CongruenceSet, FilterError> {
    let a = d.a_finite().ok_or(FilterError::TooSmall(d.len()))?;
    if let Some(p) = l.iter().find(|&p| a.contains(p)) {
        return Err(FilterError::Overlap(p));
    }
    let two_class = a
        .iter()
        .filter(|&p| !d.pi.contains(p))
        .map(|p| (p, d.alpha[&p]))
        .filter(|&(_, k)| k != 0)
        .collect();
    CongruenceSet::new(l.iter(), two_class)
        .map_err(|e| FilterError::BadShape(e.to_string()))
}

/// `𝔉_E ⊆ 𝔉_F`.
///
/// With a singleton on either side this holds iff `E` is a singleton
/// contained in `F`. Otherwise it holds iff `A_F ⊆ A_E`, `Π_F ∖ {2} ⊆ Π_E`
/// and `α_E`, `α_F` agree on `A_F ∖ Π_E`.
pub fn filter_le(e: &FilterDescriptor, f: &FilterDescriptor) -> bool {
    if e.is_singleton() || f.is_singleton() {
        return e.is_singleton() && f.elements.binary_search(&e.elements[0]).is_ok();
    }
    let (ae, af) = (e.a_finite().expect("finite"), f.a_finite().expect("finite"));
    af.is_subset(ae)
        && f.pi.iter().filter(|&p| p != 2).all(|p| e.pi.contains(p))
        && af
            .iter()
            .filter(|&p| !e.pi.contains(p))
            .all(|p| e.alpha.get(&p) == f.alpha.get(&p))
}

pub fn filter_eq(e: &FilterDescriptor, f: &FilterDescriptor) -> bool {
    filter_le(e, f) && filter_le(f, e)
}

/// Position of a filter in the top layers of the poset.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "tag")]
pub enum ClassLabel {
    /// `𝔉_E = 𝔉_∞`, i.e. `A_E = {2}`.
    FInfinity,
    /// Maximal below `𝔉_∞`: `A_E = {2, p}` with `p ∉ Π_E`.
    FPrime { p: u64, alpha: u64 },
    /// Second layer. Case 1: `A_E = {2, p}`, `p ∈ Π_E`. Case 2:
    /// `A_E = {2, p, q}` with `Π_E ⊆ {2}`.
    FDoublePrime { case: u8, primes: Vec<u64> },
    Other,
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ClassLabel::FInfinity => write!(f, "FInfinity"),
            ClassLabel::FPrime { p, alpha } => write!(f, "FPrime(p={p}, alpha={alpha})"),
            ClassLabel::FDoublePrime { case, primes } => {
                write!(f, "FDoublePrime(case {case}, primes {primes:?})")
            }
            ClassLabel::Other => write!(f, "Other"),
        }
    }
}

pub fn classify(d: &FilterDescriptor) -> Result<ClassLabel, FilterError> {
    let a = d.a_finite().ok_or(FilterError::TooSmall(d.len()))?;
    let odd: Vec<u64> = a.iter().filter(|&p| p != 2).collect();
    let pi_within_two = d.pi.iter().all(|p| p == 2);
    Ok(match odd[..] {
        [] => ClassLabel::FInfinity,
        [p] if !d.pi.contains(p) => ClassLabel::FPrime {
            p,
            alpha: d.alpha[&p],
        },
        [p] => ClassLabel::FDoublePrime {
            case: 1,
            primes: vec![p],
        },
        [p, q] if pi_within_two => ClassLabel::FDoublePrime {
            case: 2,
            primes: vec![p, q],
        },
        _ => ClassLabel::Other,
    })
}

/// The members of `𝔉′` lying above an `FDoublePrime` filter.
///
/// Every `𝔉′` filter is `𝔉_{a,q,2q}` for an odd prime `q` and
/// `1 <= a < q`; it can only lie above `𝔉_E` when `q ∈ A_E`, so those are
/// the candidates searched. Returned descriptors use these canonical
/// representatives.
pub fn upset_in_fprime(d: &FilterDescriptor) -> Result<Vec<FilterDescriptor>, FilterError> {
    let label = classify(d)?;
    if !matches!(label, ClassLabel::FDoublePrime { .. }) {
        return Err(FilterError::WrongClass(label));
    }
    let a = d.a_finite().expect("classified sets are finite");
    let mut out = Vec::new();
    for q in a.iter().filter(|&q| q != 2) {
        for r in 1..q {
            let candidate = descriptor(&[r, q, 2 * q])?;
            if filter_le(d, &candidate) {
                out.push(candidate);
            }
        }
    }
    Ok(out)
}

/// Odd primes `p <= p_bound` with `𝔉_{1,x} ⊆ 𝔉_{1,p,2p}` and
/// `𝔉_{2,x} ⊆ 𝔉_{2,p,2p}`. For `p_bound >= x` this is `Π_x ∖ {2}`.
pub fn primes_from_order(x: u64, p_bound: u64) -> Result<PrimeSet, FilterError> {
    if x < 3 {
        return Err(FilterError::BadShape(format!("x = {x} must be at least 3")));
    }
    let one_x = descriptor(&[1, x])?;
    let two_x = descriptor(&[2, x])?;
    let mut out = Vec::new();
    for p in numtheory::primes_up_to(p_bound).into_iter().skip(1) {
        if filter_le(&one_x, &descriptor(&[1, p, 2 * p])?)
            && filter_le(&two_x, &descriptor(&[2, p, 2 * p])?)
        {
            out.push(p);
        }
    }
    Ok(PrimeSet::from_sorted_unchecked(out))
}

/// `{n <= n_max : 𝔉_{1,x^n} = 𝔉_{1,x}}`. Requires `x^n_max < 2^64`.
pub fn power_chain_equal_set(x: u64, n_max: u32) -> Result<BTreeSet<u32>, FilterError> {
    if x < 2 {
        return Err(FilterError::BadShape(format!("x = {x} must be at least 2")));
    }
    x.checked_pow(n_max).ok_or(FilterError::Overflow { x, n: n_max })?;
    let base = descriptor(&[1, x])?;
    let mut out = BTreeSet::new();
    for n in 1..=n_max {
        let d = descriptor(&[1, x.pow(n)])?;
        if filter_eq(&d, &base) {
            out.insert(n);
        }
    }
    Ok(out)
}
