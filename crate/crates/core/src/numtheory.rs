//! Elementary number theory: factorization, coprimality, the Chinese
//! remainder theorem, Fermat/Mersenne classification and scans for the
//! classical theorems about primes in progressions, consecutive perfect
//! powers and primitive prime divisors.
//!
//! Primality is decided by trial division. Inputs are expected to stay
//! below `10^9` for factorization-heavy routines; everything is exact.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumError {
    #[error("moduli {0} and {1} are not coprime")]
    NonCoprimeModuli(u64, u64),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} and {1} are not coprime")]
    NotCoprime(u64, u64),
    #[error("no prime among the first {terms} terms of {offset} + {step}n")]
    SearchBoundExceeded { offset: u64, step: u64, terms: u64 },
    #[error("modulus must be positive")]
    ZeroModulus,
}

/// Maximum number of terms scanned by [`first_prime_in_progression`].
pub const PROGRESSION_SCAN_TERMS: u64 = 1_000_000;

pub fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Prime factorization by trial division, as `(prime, exponent)` pairs in
/// ascending order. `factorize(1)` is empty.
pub fn factorize(mut x: u64) -> Vec<(u64, u32)> {
    assert!(x >= 1, "factorize expects a positive integer");
    let mut out = Vec::new();
    let mut push = |x: &mut u64, p: u64| {
        let mut e = 0;
        while *x % p == 0 {
            *x /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(&mut x, 2);
    push(&mut x, 3);
    let mut d = 5u64;
    while d.saturating_mul(d) <= x {
        push(&mut x, d);
        push(&mut x, d + 2);
        d += 6;
    }
    if x > 1 {
        out.push((x, 1));
    }
    out
}

/// A finite, strictly increasing set of primes.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct PrimeSet(Vec<u64>);

impl PrimeSet {
    pub fn new() -> Self {
        Self(Vec::new())
    }

    /// Builds a set from arbitrary primes (order and duplicates don't matter).
    pub fn from_primes<I: IntoIterator<Item = u64>>(primes: I) -> Result<Self, NumError> {
        let set: BTreeSet<u64> = primes.into_iter().collect();
        if let Some(&bad) = set.iter().find(|&&p| !is_prime(p)) {
            return Err(NumError::NotPrime(bad));
        }
        Ok(Self(set.into_iter().collect()))
    }

    /// Caller guarantees every element is prime.
    pub(crate) fn from_sorted_unchecked(primes: Vec<u64>) -> Self {
        debug_assert!(primes.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(primes.iter().all(|&p| is_prime(p)));
        Self(primes)
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        self.0.binary_search(&p).is_ok()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn insert(&mut self, p: u64) -> Result<(), NumError> {
        if !is_prime(p) {
            return Err(NumError::NotPrime(p));
        }
        if let Err(pos) = self.0.binary_search(&p) {
            self.0.insert(pos, p);
        }
        Ok(())
    }

    pub fn union(&self, other: &PrimeSet) -> PrimeSet {
        let set: BTreeSet<u64> = self.iter().chain(other.iter()).collect();
        PrimeSet(set.into_iter().collect())
    }

    pub fn intersection(&self, other: &PrimeSet) -> PrimeSet {
        PrimeSet(self.iter().filter(|&p| other.contains(p)).collect())
    }

    pub fn difference(&self, other: &PrimeSet) -> PrimeSet {
        PrimeSet(self.iter().filter(|&p| !other.contains(p)).collect())
    }

    pub fn is_subset(&self, other: &PrimeSet) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    pub fn is_disjoint(&self, other: &PrimeSet) -> bool {
        self.iter().all(|p| !other.contains(p))
    }

    /// Product of the elements, `None` on `u64` overflow.
    pub fn product(&self) -> Option<u64> {
        self.iter().try_fold(1u64, |acc, p| acc.checked_mul(p))
    }
}

impl<'de> Deserialize<'de> for PrimeSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = Vec::<u64>::deserialize(d)?;
        PrimeSet::from_primes(raw).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

/// The set of prime divisors of `x`; empty for `x = 1`.
pub fn prime_factors(x: u64) -> PrimeSet {
    PrimeSet(factorize(x).into_iter().map(|(p, _)| p).collect())
}

/// Product of the distinct prime divisors of `x`.
pub fn radical(x: u64) -> u64 {
    factorize(x).into_iter().map(|(p, _)| p).product()
}

pub fn is_square_free(b: u64) -> bool {
    factorize(b).iter().all(|&(_, e)| e == 1)
}

pub fn are_coprime(x: u64, y: u64) -> bool {
    gcd(x, y) == 1
}

/// A residue class `residue mod modulus` with `0 <= residue < modulus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Congruence {
    residue: u64,
    modulus: u64,
}

impl Congruence {
    /// Reduces `residue` modulo `modulus`.
    pub fn new(residue: u64, modulus: u64) -> Result<Self, NumError> {
        if modulus == 0 {
            return Err(NumError::ZeroModulus);
        }
        Ok(Self {
            residue: residue % modulus,
            modulus,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, z: u64) -> bool {
        z % self.modulus == self.residue
    }

    /// Least positive member of the class.
    pub fn least_positive(&self) -> u64 {
        if self.residue == 0 {
            self.modulus
        } else {
            self.residue
        }
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Combines congruences with pairwise coprime moduli into the unique class
/// modulo the product. An empty list yields `0 mod 1`.
pub fn crt_solve(congruences: &[Congruence]) -> Result<Congruence, NumError> {
    for (i, c) in congruences.iter().enumerate() {
        for d in &congruences[i + 1..] {
            if !are_coprime(c.modulus, d.modulus) {
                return Err(NumError::NonCoprimeModuli(c.modulus, d.modulus));
            }
        }
    }
    let mut acc_res: u128 = 0;
    let mut acc_mod: u128 = 1;
    for c in congruences {
        let m = c.modulus as u128;
        // acc_res + acc_mod * t ≡ c.residue (mod m)
        let inv = mod_inverse((acc_mod % m) as u64, c.modulus)
            .expect("coprime moduli have an inverse");
        let diff = (c.residue as u128 + m - acc_res % m) % m;
        let t = diff * inv as u128 % m;
        acc_res += acc_mod * t;
        acc_mod *= m;
        assert!(acc_mod <= u64::MAX as u128, "product of moduli overflows u64");
    }
    Congruence::new(acc_res as u64, acc_mod as u64)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let ext = (a as i128).extended_gcd(&(m as i128));
    if ext.gcd != 1 {
        return None;
    }
    Some(ext.x.rem_euclid(m as i128) as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PrimeKind {
    Fermat,
    Mersenne,
    Both,
    Neither,
}

/// Fermat/Mersenne type of a prime. `witness_exponent` is the `m` with
/// `p = 2^m + 1` (Fermat) or `p = 2^m - 1` (Mersenne, and for `Both`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PrimeType {
    pub p: u64,
    pub tag: PrimeKind,
    pub witness_exponent: Option<u32>,
}

impl PrimeType {
    pub fn is_fermat_mersenne(&self) -> bool {
        self.tag != PrimeKind::Neither
    }
}

fn exact_log2(n: u64) -> Option<u32> {
    (n.is_power_of_two()).then(|| n.trailing_zeros())
}

pub fn classify_prime(p: u64) -> Result<PrimeType, NumError> {
    if !is_prime(p) {
        return Err(NumError::NotPrime(p));
    }
    // exponents must be positive, so 2 = 2^0 + 1 does not count
    let fermat = exact_log2(p - 1).filter(|&m| m >= 1);
    let mersenne = exact_log2(p + 1).filter(|&m| m >= 1);
    let (tag, witness_exponent) = match (fermat, mersenne) {
        (Some(_), Some(m)) => (PrimeKind::Both, Some(m)),
        (Some(m), None) => (PrimeKind::Fermat, Some(m)),
        (None, Some(m)) => (PrimeKind::Mersenne, Some(m)),
        (None, None) => (PrimeKind::Neither, None),
    };
    Ok(PrimeType {
        p,
        tag,
        witness_exponent,
    })
}

/// True iff `a^n - 1` has no primitive prime divisor, i.e. every prime
/// dividing `a^n - 1` already divides some `a^k - 1` with `0 < k < n`.
///
/// Works on exact big integers: all primes shared with the earlier
/// `a^k - 1` are stripped off by repeated gcds, leaving `1` exactly when
/// the inclusion holds.
pub fn zsigmondy_inclusion(a: u64, n: u32) -> bool {
    assert!(a >= 2 && n >= 2, "zsigmondy_inclusion expects a, n >= 2");
    let base = BigUint::from(a);
    let one = BigUint::one();
    let mut rest = base.pow(n) - &one;
    for k in 1..n {
        let earlier = base.pow(k) - &one;
        let mut g = rest.gcd(&earlier);
        while g > one {
            rest /= &g;
            g = rest.gcd(&g);
        }
        if rest == one {
            return true;
        }
    }
    rest == one
}

/// All pairs `(u, u + 1)` with `u + 1 <= limit` where both members are
/// perfect powers `m^n` with `m, n >= 2`.
pub fn consecutive_perfect_powers(limit: u64) -> Vec<(u64, u64)> {
    let powers = perfect_powers(limit);
    powers
        .iter()
        .filter(|&&u| powers.contains(&(u + 1)))
        .map(|&u| (u, u + 1))
        .collect()
}

/// Every `m^n <= limit` with `m, n >= 2`.
pub fn perfect_powers(limit: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut m = 2u64;
    while m.saturating_mul(m) <= limit {
        let mut v = m * m;
        loop {
            out.insert(v);
            match v.checked_mul(m) {
                Some(next) if next <= limit => v = next,
                _ => break,
            }
        }
        m += 1;
    }
    out
}

/// Smallest prime in `a + b·n`, `n >= 1`, scanning at most
/// [`PROGRESSION_SCAN_TERMS`] terms.
pub fn first_prime_in_progression(a: u64, b: u64) -> Result<u64, NumError> {
    if !are_coprime(a, b) {
        return Err(NumError::NotCoprime(a, b));
    }
    (1..=PROGRESSION_SCAN_TERMS)
        .filter_map(|n| b.checked_mul(n).and_then(|bn| bn.checked_add(a)))
        .find(|&t| is_prime(t))
        .ok_or(NumError::SearchBoundExceeded {
            offset: a,
            step: b,
            terms: PROGRESSION_SCAN_TERMS,
        })
}

/// Primes up to `limit` (inclusive) by the sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(v: &[u64]) -> PrimeSet {
        PrimeSet::from_primes(v.iter().copied()).unwrap()
    }

    #[test]
    fn prime_factor_examples() {
        assert!(prime_factors(1).is_empty());
        assert_eq!(prime_factors(63), ps(&[3, 7]));
        assert_eq!(prime_factors(12), ps(&[2, 3]));
    }

    #[test]
    fn square_free_and_coprime() {
        assert!(is_square_free(15));
        assert!(!is_square_free(12));
        assert!(is_square_free(1));
        assert!(are_coprime(9, 10));
        assert!(!are_coprime(6, 15));
        assert!(are_coprime(1, 77));
    }

    #[test]
    fn factorization_recovers_every_integer() {
        for x in 1..=100_000u64 {
            let f = factorize(x);
            assert!(f.iter().all(|&(p, _)| is_prime(p)));
            let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
            assert_eq!(prod, x);
        }
    }

    #[test]
    fn prime_set_rejects_composites() {
        assert_eq!(PrimeSet::from_primes([2, 9]), Err(NumError::NotPrime(9)));
        assert_eq!(ps(&[5, 2, 5, 3]).as_slice(), &[2, 3, 5]);
    }

    fn c(r: u64, m: u64) -> Congruence {
        Congruence::new(r, m).unwrap()
    }

    #[test]
    fn crt_examples() {
        assert_eq!(crt_solve(&[c(1, 2), c(2, 3)]).unwrap(), c(5, 6));
        assert_eq!(crt_solve(&[c(0, 5)]).unwrap(), c(0, 5));
        assert_eq!(crt_solve(&[c(1, 2), c(2, 3), c(4, 5)]).unwrap(), c(29, 30));
        assert_eq!(crt_solve(&[]).unwrap(), c(0, 1));
        assert_eq!(
            crt_solve(&[c(1, 6), c(1, 15)]),
            Err(NumError::NonCoprimeModuli(6, 15))
        );
    }

    #[test]
    fn crt_agrees_with_residue_scan() {
        // exhaustive over residues for small products, one class per pair above
        for m1 in 1..=100u64 {
            for m2 in m1 + 1..=(10_000 / m1) {
                if !are_coprime(m1, m2) {
                    continue;
                }
                let p = m1 * m2;
                let zs: Vec<u64> = if p <= 2_000 { (0..p).collect() } else { vec![p / 3 + 1] };
                for z in zs {
                    let got = crt_solve(&[c(z % m1, m1), c(z % m2, m2)]).unwrap();
                    let scan = (0..p).find(|w| w % m1 == z % m1 && w % m2 == z % m2).unwrap();
                    assert_eq!(got, c(scan, p));
                }
            }
        }
    }

    #[test]
    fn prime_classification() {
        let three = classify_prime(3).unwrap();
        assert_eq!((three.tag, three.witness_exponent), (PrimeKind::Both, Some(2)));
        let five = classify_prime(5).unwrap();
        assert_eq!((five.tag, five.witness_exponent), (PrimeKind::Fermat, Some(2)));
        assert_eq!(classify_prime(11).unwrap().tag, PrimeKind::Neither);
        assert_eq!(classify_prime(7).unwrap().witness_exponent, Some(3));
        assert_eq!(classify_prime(2).unwrap().tag, PrimeKind::Neither);
        assert_eq!(classify_prime(9), Err(NumError::NotPrime(9)));
    }

    #[test]
    fn witness_exponents_have_the_known_shape() {
        for p in primes_up_to(1 << 20) {
            let t = classify_prime(p).unwrap();
            match t.tag {
                PrimeKind::Mersenne | PrimeKind::Both => {
                    assert!(is_prime(t.witness_exponent.unwrap() as u64))
                }
                PrimeKind::Fermat => assert!(t.witness_exponent.unwrap().is_power_of_two()),
                PrimeKind::Neither => assert!(t.witness_exponent.is_none()),
            }
        }
    }

    #[test]
    fn zsigmondy_examples() {
        assert!(zsigmondy_inclusion(2, 6));
        assert!(zsigmondy_inclusion(3, 2));
        assert!(!zsigmondy_inclusion(2, 5));
        assert!(!zsigmondy_inclusion(10, 3));
    }

    #[test]
    fn perfect_power_pairs() {
        assert_eq!(consecutive_perfect_powers(100), vec![(8, 9)]);
        assert!(consecutive_perfect_powers(8).is_empty());
        assert_eq!(consecutive_perfect_powers(9), vec![(8, 9)]);
    }

    #[test]
    fn primes_in_progressions() {
        assert_eq!(first_prime_in_progression(1, 2), Ok(3));
        assert_eq!(first_prime_in_progression(4, 15), Ok(19));
        assert_eq!(first_prime_in_progression(3, 4), Ok(7));
        assert_eq!(first_prime_in_progression(6, 9), Err(NumError::NotCoprime(6, 9)));
    }

    #[test]
    fn sieve_matches_trial_division() {
        let sieve = primes_up_to(5000);
        let trial: Vec<u64> = (0..=5000).filter(|&n| is_prime(n)).collect();
        assert_eq!(sieve, trial);
    }

    proptest! {
        #[test]
        fn crt_result_lies_in_every_class(r1 in 0u64..1000, r2 in 0u64..1000, r3 in 0u64..1000) {
            let mods = [7u64, 8, 45];
            let cs: Vec<_> = [r1, r2, r3].iter().zip(mods).map(|(&r, m)| c(r, m)).collect();
            let sol = crt_solve(&cs).unwrap();
            prop_assert_eq!(sol.modulus(), 7 * 8 * 45);
            for k in &cs {
                prop_assert!(k.contains(sol.residue()));
                prop_assert!(k.contains(sol.residue() + 5 * sol.modulus()));
            }
        }

        #[test]
        fn mod_inverse_inverts(a in 1u64..10_000, m in 2u64..10_000) {
            match mod_inverse(a, m) {
                Some(inv) => prop_assert_eq!(a as u128 * inv as u128 % m as u128, 1),
                None => prop_assert!(gcd(a, m) > 1),
            }
        }
    }
}
