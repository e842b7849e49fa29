//! Arithmetic progressions `a + bℕ₀`, their closures in the Kirch topology
//! and the periodic sets ([`CongruenceSet`]) those closures live in.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numtheory::{self, gcd, is_prime, PrimeSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CongruenceSetError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("residue {k} is not in 1..{p}")]
    BadResidue { p: u64, k: u64 },
    #[error("prime {0} is both forced and two-class constrained")]
    Overlap(u64),
}

/// The progression `offset + step·ℕ₀`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Progression {
    pub offset: u64,
    pub step: u64,
    /// `gcd(offset, step) = 1` and `step` square-free: a basic open set.
    pub kirch_basic: bool,
}

impl Progression {
    pub fn new(offset: u64, step: u64) -> Self {
        assert!(offset >= 1 && step >= 1, "progressions need positive offset and step");
        Self {
            offset,
            step,
            kirch_basic: gcd(offset, step) == 1 && numtheory::is_square_free(step),
        }
    }

    pub fn contains(&self, z: u64) -> bool {
        z >= self.offset && (z - self.offset) % self.step == 0
    }

    pub fn closure(&self) -> CongruenceSet {
        closure(self.offset, self.step)
    }
}

impl fmt::Display for Progression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}+{}ℕ₀", self.offset, self.step)
    }
}

pub fn kirch_basic_open(a: u64, b: u64) -> Progression {
    Progression::new(a, b)
}

/// Residues allowed by a [`CongruenceSet`] at a single prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Allowed {
    All,
    Zero,
    ZeroOr(u64),
}

impl Allowed {
    pub fn admits(self, r: u64) -> bool {
        match self {
            Allowed::All => true,
            Allowed::Zero => r == 0,
            Allowed::ZeroOr(k) => r == 0 || r == k,
        }
    }

    fn meet(self, other: Allowed) -> Allowed {
        match (self, other) {
            (Allowed::All, x) | (x, Allowed::All) => x,
            (Allowed::ZeroOr(k), Allowed::ZeroOr(l)) if k == l => Allowed::ZeroOr(k),
            _ => Allowed::Zero,
        }
    }
}

/// `{z ∈ ℕ : p | z for p in forced, z mod p ∈ {0, k} for (p ↦ k) in two_class}`.
///
/// The constraint `2 ↦ 1` admits every residue and is dropped on
/// construction, so equal sets have equal representations.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCongruenceSet")]
pub struct CongruenceSet {
    forced: PrimeSet,
    two_class: BTreeMap<u64, u64>,
}

#[derive(Deserialize)]
struct RawCongruenceSet {
    forced: Vec<u64>,
    two_class: BTreeMap<u64, u64>,
}

impl TryFrom<RawCongruenceSet> for CongruenceSet {
    type Error = CongruenceSetError;

    fn try_from(raw: RawCongruenceSet) -> Result<Self, Self::Error> {
        CongruenceSet::new(raw.forced, raw.two_class)
    }
}

impl CongruenceSet {
    /// The whole of ℕ.
    pub fn all() -> Self {
        Self::default()
    }

    pub fn new<I>(forced: I, two_class: BTreeMap<u64, u64>) -> Result<Self, CongruenceSetError>
    where
        I: IntoIterator<Item = u64>,
    {
        let forced: BTreeSet<u64> = forced.into_iter().collect();
        for &p in forced.iter().chain(two_class.keys()) {
            if !is_prime(p) {
                return Err(CongruenceSetError::NotPrime(p));
            }
        }
        for (&p, &k) in &two_class {
            if k == 0 || k >= p {
                return Err(CongruenceSetError::BadResidue { p, k });
            }
            if forced.contains(&p) {
                return Err(CongruenceSetError::Overlap(p));
            }
        }
        let mut two_class = two_class;
        two_class.remove(&2);
        Ok(Self {
            forced: PrimeSet::from_sorted_unchecked(forced.into_iter().collect()),
            two_class,
        })
    }

    /// `qℕ` for a square-free `q`.
    pub fn multiples_of(primes: &PrimeSet) -> Self {
        Self {
            forced: primes.clone(),
            two_class: BTreeMap::new(),
        }
    }

    pub fn forced(&self) -> &PrimeSet {
        &self.forced
    }

    pub fn two_class(&self) -> &BTreeMap<u64, u64> {
        &self.two_class
    }

    pub fn allowed(&self, p: u64) -> Allowed {
        if self.forced.contains(p) {
            Allowed::Zero
        } else if let Some(&k) = self.two_class.get(&p) {
            Allowed::ZeroOr(k)
        } else {
            Allowed::All
        }
    }

    /// Every prime carrying a constraint, ascending.
    pub fn primes(&self) -> PrimeSet {
        let set: BTreeSet<u64> = self.forced.iter().chain(self.two_class.keys().copied()).collect();
        PrimeSet::from_sorted_unchecked(set.into_iter().collect())
    }

    /// Product of the constrained primes; the set is periodic with this
    /// period and always contains it. `None` on overflow.
    pub fn period(&self) -> Option<u64> {
        self.primes().product()
    }

    pub fn is_all(&self) -> bool {
        self.forced.is_empty() && self.two_class.is_empty()
    }

    pub fn contains(&self, z: u64) -> bool {
        z >= 1
            && self.forced.iter().all(|p| z % p == 0)
            && self.two_class.iter().all(|(&p, &k)| {
                let r = z % p;
                r == 0 || r == k
            })
    }

    pub fn members(&self, lo: u64, hi: u64) -> Vec<u64> {
        (lo.max(1)..=hi).filter(|&z| self.contains(z)).collect()
    }

    /// Exact intersection. Every per-prime constraint admits residue 0, so
    /// the result always contains the product of all mentioned primes and is
    /// never empty.
    pub fn intersect(&self, other: &CongruenceSet) -> CongruenceSet {
        let mut forced = Vec::new();
        let mut two_class = BTreeMap::new();
        for p in self.primes().union(&other.primes()).iter() {
            match self.allowed(p).meet(other.allowed(p)) {
                Allowed::Zero => forced.push(p),
                Allowed::ZeroOr(k) => {
                    two_class.insert(p, k);
                }
                Allowed::All => {}
            }
        }
        Self {
            forced: PrimeSet::from_sorted_unchecked(forced),
            two_class,
        }
    }
}

impl fmt::Display for CongruenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.forced.iter().map(|p| format!("{p}ℤ")).collect();
        parts.extend(self.two_class.iter().map(|(p, k)| format!("({{0,{k}}}+{p}ℤ)")));
        if parts.is_empty() {
            write!(f, "ℕ")
        } else {
            write!(f, "ℕ∩{}", parts.join("∩"))
        }
    }
}

/// Closure of `a + bℕ₀` in the Kirch topology: for each prime `p | b`,
/// `p` is forced when it divides `a`, otherwise `z ≡ 0` or `z ≡ a (mod p)`.
pub fn closure(a: u64, b: u64) -> CongruenceSet {
    assert!(a >= 1 && b >= 1, "closure expects positive a and b");
    let mut forced = Vec::new();
    let mut two_class = BTreeMap::new();
    for p in numtheory::prime_factors(b).iter() {
        if a % p == 0 {
            forced.push(p);
        } else if p != 2 {
            two_class.insert(p, a % p);
        }
    }
    CongruenceSet {
        forced: PrimeSet::from_sorted_unchecked(forced),
        two_class,
    }
}

/// Whether the two progressions share a term (then they share infinitely
/// many): `a₁ ≡ a₂ (mod gcd(b₁, b₂))`.
pub fn progressions_intersect(p1: &Progression, p2: &Progression) -> bool {
    let g = gcd(p1.step, p2.step);
    p1.offset % g == p2.offset % g
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn cs(forced: &[u64], two: &[(u64, u64)]) -> CongruenceSet {
        CongruenceSet::new(forced.iter().copied(), two.iter().copied().collect()).unwrap()
    }

    #[test]
    fn basic_open_flags() {
        assert!(kirch_basic_open(1, 2).kirch_basic);
        assert!(!kirch_basic_open(3, 6).kirch_basic);
        assert!(!kirch_basic_open(5, 12).kirch_basic);
        assert!(kirch_basic_open(7, 30).kirch_basic);
    }

    #[test]
    fn closure_examples() {
        assert!(closure(1, 2).is_all());
        assert_eq!(closure(5, 6), cs(&[], &[(3, 2)]));
        assert_eq!(closure(10, 5), cs(&[5], &[]));
        assert_eq!(closure(4, 6), cs(&[2], &[(3, 1)]));
    }

    #[test]
    fn members_examples() {
        assert_eq!(closure(5, 6).members(1, 12), vec![2, 3, 5, 6, 8, 9, 11, 12]);
        assert_eq!(cs(&[3, 5], &[]).members(1, 20), vec![15]);
        assert_eq!(CongruenceSet::all().members(1, 3), vec![1, 2, 3]);
    }

    #[test]
    fn intersect_examples() {
        assert_eq!(closure(1, 15).intersect(&closure(2, 15)), cs(&[3, 5], &[]));
        let s = closure(7, 30);
        assert_eq!(s.intersect(&s), s);
        assert_eq!(cs(&[], &[(3, 1)]).intersect(&cs(&[], &[(3, 2)])), cs(&[3], &[]));
    }

    #[test]
    fn constructor_validates() {
        assert_eq!(
            CongruenceSet::new([4], BTreeMap::new()),
            Err(CongruenceSetError::NotPrime(4))
        );
        assert_eq!(
            CongruenceSet::new([], [(5, 5)].into_iter().collect()),
            Err(CongruenceSetError::BadResidue { p: 5, k: 5 })
        );
        assert_eq!(
            CongruenceSet::new([3], [(3, 1)].into_iter().collect()),
            Err(CongruenceSetError::Overlap(3))
        );
        assert!(cs(&[], &[(2, 1)]).is_all());
    }

    #[test]
    fn progression_intersections() {
        let p = Progression::new;
        assert!(progressions_intersect(&p(1, 2), &p(2, 3)));
        assert!(!progressions_intersect(&p(1, 6), &p(2, 4)));
        assert!(progressions_intersect(&p(3, 6), &p(9, 12)));
    }

    #[test]
    fn json_shape() {
        let s = cs(&[5], &[(3, 2), (7, 4)]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, r#"{"forced":[5],"two_class":{"3":2,"7":4}}"#);
        let back: CongruenceSet = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<CongruenceSet>(r#"{"forced":[3],"two_class":{"3":1}}"#).is_err());
    }

    #[test]
    fn intersection_matches_pointwise_membership() {
        let sets = [
            closure(5, 6),
            closure(7, 30),
            closure(2, 15),
            closure(14, 21),
            cs(&[11], &[(3, 1)]),
        ];
        for s in &sets {
            for t in &sets {
                let both = s.intersect(t);
                for z in 1..=2 * 3 * 5 * 7 * 11 {
                    assert_eq!(both.contains(z), s.contains(z) && t.contains(z), "{s} ∩ {t} at {z}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn closure_contains_offset_and_is_periodic(a in 1u64..500, b in 1u64..500, z in 1u64..2000) {
            let c = closure(a, b);
            prop_assert!(c.contains(a));
            let period = c.period().unwrap();
            let rad = numtheory::radical(b);
            // an odd offset leaves no constraint at 2
            let expected = if a % 2 == 1 && b % 2 == 0 { rad / 2 } else { rad };
            prop_assert_eq!(period, expected);
            prop_assert_eq!(c.contains(z), c.contains(z + rad));
            prop_assert!(c.contains(period));
        }

        #[test]
        fn closures_of_basic_opens_always_meet(
            family in proptest::collection::vec((1u64..200, 1u64..200), 1..6)
        ) {
            let mut acc = CongruenceSet::all();
            for (a, b) in family {
                let pr = Progression::new(a, b);
                if pr.kirch_basic {
                    acc = acc.intersect(&pr.closure());
                }
            }
            // the product of many primes below 200 can leave u64
            if let Some(period) = acc.period() {
                prop_assert!(acc.contains(period));
            }
            prop_assert!(acc.forced().iter().chain(acc.two_class().keys().copied()).all(is_prime));
        }
    }
}
