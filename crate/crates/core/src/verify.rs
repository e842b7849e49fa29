//! Independent oracles and the verification batteries built on them.
//!
//! The oracles here never call the closed formulas they check:
//!
//! * [`closure_oracle`] decides closure membership from single-prime
//!   neighbourhoods `z + pℕ₀` and progression intersection;
//! * [`a_by_definition`] scans every prime up to `max E`;
//! * [`filter_le_oracle`] decides `𝔉_E ⊆ 𝔉_F` from the generator sets of
//!   both filters and exact inclusion of periodic sets.
//!
//! [`run_suite`] runs one named battery and returns a [`SuiteReport`].
//! Instances are checked in parallel (capped by `KIRCHLAB_THREADS`) and
//! failures are reported in instance order, so a report depends only on
//! the suite name and its parameters.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::filters::{
    classify, compute_a, descriptor, filter_eq, filter_le, generator, pair_a,
    power_chain_equal_set, primes_from_order, realize, upset_in_fprime, ClassLabel,
    FilterDescriptor, FilterError,
};
use crate::gamma::{degree_infinite, edges_by_definition, edges_closed_form, neighbors_infinite};
use crate::numtheory::{self, PrimeKind, PrimeSet};
use crate::progressions::{closure, progressions_intersect, Allowed, CongruenceSet, Progression};

/// Environment variable capping the worker threads used by suites.
pub const THREADS_ENV: &str = "KIRCHLAB_THREADS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown suite {0:?}; expected one of {list}", list = Suite::NAMES.join(", "))]
    UnknownSuite(String),
    #[error("the order oracle needs sets with at least two elements")]
    TooSmall,
    #[error(transparent)]
    Filter(#[from] FilterError),
}

/// Membership of `z` in the closure of `a + bℕ₀`, decided by neighbourhoods:
/// for every prime `p | b` not dividing `z`, the neighbourhood `z + pℕ₀`
/// has to meet `a + bℕ₀`.
pub fn closure_oracle(a: u64, b: u64, z: u64) -> bool {
    closure_oracle_with(a, b, &numtheory::prime_factors(b), z)
}

fn closure_oracle_with(a: u64, b: u64, primes_of_b: &PrimeSet, z: u64) -> bool {
    let target = Progression::new(a, b);
    primes_of_b
        .iter()
        .filter(|&p| z % p != 0)
        .all(|p| progressions_intersect(&Progression::new(z, p), &target))
}

fn allowed_subset(inner: Allowed, outer: Allowed) -> bool {
    match (inner, outer) {
        (_, Allowed::All) => true,
        (Allowed::Zero, _) => true,
        (Allowed::ZeroOr(k), Allowed::ZeroOr(l)) => k == l,
        _ => false,
    }
}

/// Exact inclusion `s1 ⊆ s2`.
///
/// Both sets are unions of residue classes modulo the product `P` of their
/// primes, and by CRT such a set is the product of its per-prime residue
/// sets. A nonempty product is contained in another exactly when every
/// factor is, so the classes mod `P` never need to be listed.
pub fn congruence_set_subset(s1: &CongruenceSet, s2: &CongruenceSet) -> bool {
    s2.primes().iter().all(|p| allowed_subset(s1.allowed(p), s2.allowed(p)))
}

/// `A_E` from the definition: every prime `p <= max E` for which the
/// nonzero residues of `E` take at most one value.
pub fn a_by_definition(set: &[u64]) -> PrimeSet {
    let max = set.iter().copied().max().unwrap_or(1);
    let primes = numtheory::primes_up_to(max.max(2));
    a_by_definition_in(set, &primes)
}

fn a_by_definition_in(set: &[u64], primes: &[u64]) -> PrimeSet {
    let max = set.iter().copied().max().unwrap_or(1).max(2);
    PrimeSet::from_primes(primes.iter().copied().take_while(|&p| p <= max).filter(|&p| {
        let mut nonzero = set.iter().map(|&e| e % p).filter(|&r| r != 0);
        match nonzero.next() {
            None => true,
            Some(r) => nonzero.all(|s| s == r),
        }
    }))
    .expect("sieve output is prime")
}

/// Decides `𝔉_E ⊆ 𝔉_F` from generator sets.
///
/// `𝔉_E` has base sets `G_E(L)` for finite `L` outside `A_E`, and
/// `B ∈ 𝔉_F` iff some `G_F(L')` lies inside `B`. Primes of `L` outside
/// `A_F` can be copied into `L'`, so only `L₀ = L ∩ A_F ⊆ A_F ∖ A_E`
/// matters, and every such `L₀` is tried. For a fixed `B`, `G_F(L')`
/// shrinks as `L'` grows and primes not mentioned by `B` cannot help, so
/// the search over `L'` stops at the largest candidate `primes(B) ∖ A_F`.
pub fn filter_le_oracle(e: &FilterDescriptor, f: &FilterDescriptor) -> Result<bool, VerifyError> {
    filter_le_oracle_widened(e, f, &PrimeSet::new())
}

/// [`filter_le_oracle`] with `extra` primes added to every `L'` pool.
pub fn filter_le_oracle_widened(
    e: &FilterDescriptor,
    f: &FilterDescriptor,
    extra: &PrimeSet,
) -> Result<bool, VerifyError> {
    let (ae, af) = match (e.a_finite(), f.a_finite()) {
        (Some(ae), Some(af)) => (ae, af),
        _ => return Err(VerifyError::TooSmall),
    };
    let pool: Vec<u64> = af.difference(ae).iter().collect();
    for mask in 0u64..(1 << pool.len()) {
        let l0 = PrimeSet::from_primes(
            pool.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p),
        )
        .expect("subset of primes");
        let base = generator(e, &l0)?;
        if !in_filter(f, &base, extra)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn in_filter(f: &FilterDescriptor, set: &CongruenceSet, extra: &PrimeSet) -> Result<bool, VerifyError> {
    let af = f.a_finite().ok_or(VerifyError::TooSmall)?;
    let l = set.primes().union(extra).difference(af);
    Ok(congruence_set_subset(&generator(f, &l)?, set))
}

/// One failed instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Failure {
    pub index: u64,
    pub input: String,
    pub expected: String,
    pub got: String,
}

/// Bounds and seed for a suite; `None` selects the suite's default.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteParams {
    pub bound: Option<u64>,
    pub seed: u64,
    pub prime: Option<u64>,
    pub samples: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub params: SuiteParams,
    pub instances_checked: u64,
    pub failures: Vec<Failure>,
    /// Suite-specific results, e.g. the perfect-power pairs found.
    pub findings: serde_json::Value,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Canonical JSON of everything except timing.
    pub fn body(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Closure,
    PairA,
    Realize,
    Order,
    Classify,
    Upsets,
    Gamma,
    Zsigmondy,
    Powers,
    Chains,
    Recovery,
}

impl Suite {
    pub const NAMES: [&'static str; 11] = [
        "closure", "pairA", "realize", "order", "classify", "upsets", "gamma", "zsigmondy",
        "powers", "chains", "recovery",
    ];

    pub const ALL: [Suite; 11] = [
        Suite::Closure,
        Suite::PairA,
        Suite::Realize,
        Suite::Order,
        Suite::Classify,
        Suite::Upsets,
        Suite::Gamma,
        Suite::Zsigmondy,
        Suite::Powers,
        Suite::Chains,
        Suite::Recovery,
    ];

    pub fn name(self) -> &'static str {
        Self::NAMES[Self::ALL.iter().position(|&s| s == self).expect("listed")]
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = VerifyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Self::ALL[i])
            .ok_or_else(|| VerifyError::UnknownSuite(s.to_string()))
    }
}

pub fn run_suite(name: &str, params: &SuiteParams) -> Result<SuiteReport, VerifyError> {
    let suite: Suite = name.parse()?;
    let start = Instant::now();
    let outcome = with_pool(|| match suite {
        Suite::Closure => closure_suite(params),
        Suite::PairA => pair_a_suite(params),
        Suite::Realize => realize_suite(params),
        Suite::Order => order_suite(params),
        Suite::Classify => classify_suite(params),
        Suite::Upsets => upsets_suite(params),
        Suite::Gamma => gamma_suite(params),
        Suite::Zsigmondy => zsigmondy_suite(params),
        Suite::Powers => powers_suite(params),
        Suite::Chains => chains_suite(params),
        Suite::Recovery => recovery_suite(params),
    })?;
    Ok(SuiteReport {
        suite: suite.name().to_string(),
        params: params.clone(),
        instances_checked: outcome.checked,
        failures: outcome.failures,
        findings: outcome.findings,
        elapsed: start.elapsed(),
    })
}

/// Thread cap from [`THREADS_ENV`], if set to a positive integer.
pub fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn with_pool<T: Send>(job: impl FnOnce() -> T + Send) -> T {
    match thread_cap().and_then(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build().ok()) {
        Some(pool) => pool.install(job),
        None => job(),
    }
}

#[derive(Default)]
struct Outcome {
    checked: u64,
    failures: Vec<Failure>,
    findings: serde_json::Value,
}

/// Per-instance results in instance order.
#[derive(Default)]
struct Tally {
    checked: u64,
    failures: Vec<Failure>,
}

impl Tally {
    fn check(&mut self, ok: bool, input: impl FnOnce() -> String, expected: impl fmt::Display, got: impl fmt::Display) {
        if !ok {
            self.failures.push(Failure {
                index: self.checked,
                input: input(),
                expected: expected.to_string(),
                got: got.to_string(),
            });
        }
        self.checked += 1;
    }

    fn absorb(&mut self, other: Tally) {
        let offset = self.checked;
        self.failures.extend(other.failures.into_iter().map(|mut f| {
            f.index += offset;
            f
        }));
        self.checked += other.checked;
    }

    fn into_outcome(self, findings: serde_json::Value) -> Outcome {
        Outcome {
            checked: self.checked,
            failures: self.failures,
            findings,
        }
    }
}

/// Runs `job` on every item in parallel and merges the tallies in order.
fn par_tally<T: Sync>(items: &[T], job: impl Fn(&T, &mut Tally) + Sync) -> Tally {
    let parts: Vec<Tally> = items
        .par_iter()
        .map(|item| {
            let mut t = Tally::default();
            job(item, &mut t);
            t
        })
        .collect();
    let mut total = Tally::default();
    for part in parts {
        total.absorb(part);
    }
    total
}

fn show_set(s: &[u64]) -> String {
    format!("{s:?}")
}

fn closure_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(200);
    let steps: Vec<u64> = (1..=bound).collect();
    let tally = par_tally(&steps, |&b, t| {
        let primes = numtheory::prime_factors(b);
        let window = 4 * primes.product().expect("radical of a u64 fits");
        for a in 1..=bound {
            let formula = closure(a, b);
            for z in 1..=window {
                let expected = closure_oracle_with(a, b, &primes, z);
                let got = formula.contains(z);
                t.check(expected == got, || format!("a={a} b={b} z={z}"), expected, got);
            }
        }
    });
    Ok(tally.into_outcome(json!({ "max_a": bound, "max_b": bound })))
}

fn pair_a_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(500);
    let primes = numtheory::primes_up_to(bound.max(2));
    let xs: Vec<u64> = (1..bound).collect();
    let tally = par_tally(&xs, |&x, t| {
        for y in x + 1..=bound {
            let shortcut = pair_a(x, y);
            let general = compute_a(&[x, y]).expect("two elements");
            let scan = a_by_definition_in(&[x, y], &primes);
            let ok = shortcut == general && general == scan;
            t.check(ok, || format!("{{{x},{y}}}"), &scan, format!("pair {shortcut}, general {general}"));
        }
    });
    Ok(tally.into_outcome(json!({ "max_y": bound })))
}

/// Every `(A, α)` with `A ⊆ pool`, `2 ∈ A ≠ {2}`, `α(2) = 1`.
fn admissible_signatures(pool: &[u64]) -> Vec<(PrimeSet, BTreeMap<u64, u64>)> {
    let odd: Vec<u64> = pool.iter().copied().filter(|&p| p != 2).collect();
    let mut out = Vec::new();
    for mask in 1u32..(1 << odd.len()) {
        let chosen: Vec<u64> = odd.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p).collect();
        let a = PrimeSet::from_primes(chosen.iter().copied().chain([2])).expect("primes");
        let mut alphas = vec![BTreeMap::from([(2u64, 1u64)])];
        for &p in &chosen {
            alphas = alphas
                .into_iter()
                .flat_map(|m| {
                    (0..p).map(move |k| {
                        let mut m = m.clone();
                        m.insert(p, k);
                        m
                    })
                })
                .collect();
        }
        out.extend(alphas.into_iter().map(|alpha| (a.clone(), alpha)));
    }
    out
}

fn realize_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let max_prime = params.bound.unwrap_or(13);
    let pool = numtheory::primes_up_to(max_prime);
    let cases = admissible_signatures(&pool);
    let tally = par_tally(&cases, |(a, alpha), t| {
        let input = || format!("A={a} alpha={alpha:?}");
        let e = match realize(a, alpha) {
            Ok(e) => e,
            Err(err) => return t.check(false, input, "a realizing set", err),
        };
        let d = descriptor(&e).expect("realized sets are valid");
        let pi_expected =
            PrimeSet::from_primes(alpha.iter().filter(|(&p, &k)| p != 2 && k == 0).map(|(&p, _)| p)).expect("primes");
        let ok = d.a_finite() == Some(a) && d.alpha() == alpha && d.pi() == &pi_expected && (2..=3).contains(&e.len());
        t.check(ok, input, format!("A={a} alpha={alpha:?} Pi={pi_expected}"), format!("E={e:?} {}", json!(d)));
    });
    Ok(tally.into_outcome(json!({ "prime_pool": pool, "signatures": cases.len() })))
}

/// All subsets of `[1, bound]` with 2 or 3 elements.
pub fn small_sets(bound: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();
    for x in 1..=bound {
        for y in x + 1..=bound {
            out.push(vec![x, y]);
            for z in y + 1..=bound {
                out.push(vec![x, y, z]);
            }
        }
    }
    out
}

fn random_set(rng: &mut ChaCha8Rng, max: u64) -> Vec<u64> {
    let len = rng.gen_range(2..=3);
    let mut s = BTreeSet::new();
    while s.len() < len {
        s.insert(rng.gen_range(1..=max));
    }
    s.into_iter().collect()
}

/// Smallest `count` primes outside `avoid`.
fn fresh_primes(avoid: &PrimeSet, count: usize) -> PrimeSet {
    PrimeSet::from_primes((3u64..).filter(|&p| numtheory::is_prime(p) && !avoid.contains(p)).take(count))
        .expect("primes")
}

fn order_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(30);
    let samples = params.samples.unwrap_or(500);
    let descs: Vec<FilterDescriptor> = small_sets(bound).iter().map(|e| descriptor(e)).collect::<Result<_, _>>()?;
    let indices: Vec<usize> = (0..descs.len()).collect();
    let mut tally = par_tally(&indices, |&i, t| {
        let e = &descs[i];
        for f in &descs {
            let criterion = filter_le(e, f);
            let oracle = filter_le_oracle(e, f).expect("sets have two or more elements");
            t.check(criterion == oracle, || format!("E={:?} F={:?}", e.elements(), f.elements()), oracle, criterion);
        }
    });
    let exhaustive_pairs = tally.checked;

    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let random: Vec<(FilterDescriptor, FilterDescriptor)> = (0..samples)
        .map(|_| Ok((descriptor(&random_set(&mut rng, 100))?, descriptor(&random_set(&mut rng, 100))?)))
        .collect::<Result<_, FilterError>>()?;
    tally.absorb(par_tally(&random, |(e, f), t| {
        let criterion = filter_le(e, f);
        let oracle = filter_le_oracle(e, f).expect("sets have two or more elements");
        t.check(criterion == oracle, || format!("E={:?} F={:?}", e.elements(), f.elements()), oracle, criterion);
    }));

    // widening the prime pool must not change any answer
    let widened: Vec<&(FilterDescriptor, FilterDescriptor)> = random.iter().take(100).collect();
    tally.absorb(par_tally(&widened, |(e, f), t| {
        let mentioned = e.a_finite().unwrap().union(f.a_finite().unwrap());
        let extra = fresh_primes(&mentioned, 3);
        let plain = filter_le_oracle(e, f).expect("two or more elements");
        let wide = filter_le_oracle_widened(e, f, &extra).expect("two or more elements");
        t.check(plain == wide, || format!("E={:?} F={:?} extra={extra}", e.elements(), f.elements()), plain, wide);
    }));
    Ok(tally.into_outcome(json!({
        "exhaustive_sets": descs.len(),
        "exhaustive_pairs": exhaustive_pairs,
        "random_pairs": samples,
        "widened_checks": widened.len(),
    })))
}

fn is_power_of_two_doubleton(x: u64, y: u64) -> bool {
    x.is_power_of_two() && y == 2 * x
}

fn classify_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(4096);
    let xs: Vec<u64> = (1..bound).collect();
    let mut tally = par_tally(&xs, |&x, t| {
        for y in x + 1..=bound {
            let label = classify(&descriptor(&[x, y]).expect("valid")).expect("two elements");
            let got = label == ClassLabel::FInfinity;
            let expected = is_power_of_two_doubleton(x, y);
            t.check(got == expected, || format!("{{{x},{y}}}"), expected, label);
        }
    });
    let infinity_pairs: Vec<[u64; 2]> = (0..64)
        .map(|n| 1u64 << n)
        .take_while(|&x| x.checked_mul(2).is_some_and(|y| y <= bound))
        .map(|x| [x, 2 * x])
        .collect();

    // 𝔉_∞ ⇔ equal to 𝔉_{1,2} by the oracle, and then every generator is qℕ
    let top = descriptor(&[1, 2])?;
    let sets = small_sets(30);
    tally.absorb(par_tally(&sets, |e, t| {
        let d = descriptor(e).expect("valid");
        let infinite = classify(&d).expect("two elements") == ClassLabel::FInfinity;
        let equal = filter_le_oracle(&d, &top).expect("two elements") && filter_le_oracle(&top, &d).expect("two elements");
        t.check(equal == infinite, || format!("E={e:?}"), equal, infinite);
        if infinite {
            let l = fresh_primes(&PrimeSet::new(), 3);
            let g = generator(&d, &l).expect("A_E = {2}");
            t.check(g.two_class().is_empty() && g.forced() == &l, || format!("E={e:?} L={l}"), "qℕ", &g);
        }
    }));
    Ok(tally.into_outcome(json!({ "finfinity_doubletons": infinity_pairs })))
}

fn coprime_residues(m: u64) -> Vec<u64> {
    (1..m).filter(|&x| numtheory::are_coprime(x, m)).collect()
}

fn same_filters(got: &[FilterDescriptor], expected: &[FilterDescriptor]) -> bool {
    got.len() == expected.len()
        && expected.iter().all(|x| got.iter().any(|g| filter_eq(g, x)))
        && got.iter().all(|g| expected.iter().any(|x| filter_eq(g, x)))
}

fn upsets_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let max_prime = params.bound.unwrap_or(13);
    let samples = params.samples.unwrap_or(20);
    let odd: Vec<u64> = numtheory::primes_up_to(max_prime).into_iter().skip(1).collect();
    let mut tally = Tally::default();
    let mut sizes = BTreeMap::new();

    // {p, 2p}: p − 1 filters above
    for &p in &odd {
        let d = descriptor(&[p, 2 * p])?;
        let up = upset_in_fprime(&d)?;
        sizes.insert(p.to_string(), up.len());
        let expected: Vec<FilterDescriptor> = (1..p).map(|a| descriptor(&[a, p, 2 * p])).collect::<Result<_, _>>()?;
        let sound = up.iter().all(|u| filter_le(&d, u) && matches!(classify(u), Ok(ClassLabel::FPrime { .. })));
        tally.check(up.len() as u64 == p - 1, || format!("|up {{{p},{}}}|", 2 * p), p - 1, up.len());
        tally.check(sound && same_filters(&up, &expected), || format!("up {{{p},{}}}", 2 * p), "the filters {a,p,2p}", json!(up));
    }

    // {x, pq, 2pq}: exactly {x,p,2p} and {x,q,2q}
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut drawn = Vec::new();
    for _ in 0..samples {
        let pick: Vec<u64> = odd.choose_multiple(&mut rng, 2).copied().collect();
        let (p, q) = (pick[0].min(pick[1]), pick[0].max(pick[1]));
        let x = *coprime_residues(p * q).choose(&mut rng).expect("pq > 1");
        drawn.push([x, p * q, 2 * p * q]);
        let d = descriptor(&[x, p * q, 2 * p * q])?;
        let label = classify(&d)?;
        let want = ClassLabel::FDoublePrime { case: 2, primes: vec![p, q] };
        tally.check(label == want, || format!("classify {{{x},{},{}}}", p * q, 2 * p * q), &want, &label);
        let up = upset_in_fprime(&d)?;
        let expected = vec![descriptor(&[x, p, 2 * p])?, descriptor(&[x, q, 2 * q])?];
        tally.check(up.len() == 2, || format!("|up {{{x},{},{}}}|", p * q, 2 * p * q), 2, up.len());
        tally.check(same_filters(&up, &expected), || format!("up {{{x},{},{}}}", p * q, 2 * p * q), json!(expected), json!(up));
    }

    // 𝔉_{3,6} is the only second-layer filter whose up-set avoids the
    // up-sets of every {p,2p} with p ≠ 3
    let mut second_layer = Vec::new();
    for &p in &odd {
        second_layer.push(descriptor(&[p, 2 * p])?);
    }
    for (i, &p) in odd.iter().enumerate() {
        for &q in &odd[i + 1..] {
            for x in coprime_residues(p * q) {
                second_layer.push(descriptor(&[x, p * q, 2 * p * q])?);
            }
        }
    }
    let mut others_up = Vec::new();
    for &p in odd.iter().filter(|&&p| p != 3) {
        others_up.extend(upset_in_fprime(&descriptor(&[p, 2 * p])?)?);
    }
    let mut isolated = Vec::new();
    for d in &second_layer {
        let label = classify(d)?;
        let is_second = matches!(label, ClassLabel::FDoublePrime { .. });
        tally.check(is_second, || format!("classify {:?}", d.elements()), "FDoublePrime", &label);
        let up = upset_in_fprime(d)?;
        let expected_len = match &label {
            ClassLabel::FDoublePrime { case: 1, primes } => primes[0] as usize - 1,
            _ => 2,
        };
        tally.check(up.len() == expected_len, || format!("|up {:?}|", d.elements()), expected_len, up.len());
        if up.iter().all(|u| others_up.iter().all(|o| !filter_eq(u, o))) {
            isolated.push(d.elements().to_vec());
        }
    }
    let three_six = odd.contains(&3).then(|| vec![vec![3u64, 6]]).unwrap_or_default();
    tally.check(isolated == three_six, || "isolated second-layer filters".into(), show_set(&[3, 6]), format!("{isolated:?}"));

    Ok(tally.into_outcome(json!({
        "p_minus_one_sizes": sizes,
        "sampled_sets": drawn,
        "second_layer_filters": second_layer.len(),
        "isolated": isolated,
    })))
}

/// Odd primes checked by the gamma suite when none is given.
pub const GAMMA_PRIMES: [u64; 7] = [3, 5, 7, 11, 13, 17, 31];

fn gamma_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(1_000_000);
    let primes: Vec<u64> = params.prime.map(|p| vec![p]).unwrap_or_else(|| GAMMA_PRIMES.to_vec());
    let mut tally = Tally::default();
    let mut counts = BTreeMap::new();
    for &p in &primes {
        let (closed, defined) = match (edges_closed_form(p, bound), edges_by_definition(p, bound)) {
            (Ok(c), Ok(d)) => (c, d),
            (Err(e), _) | (_, Err(e)) => {
                tally.check(false, || format!("p={p}"), "an odd prime", e);
                continue;
            }
        };
        counts.insert(p.to_string(), json!({ "edges": defined.len() }));
        for e in closed.symmetric_difference(&defined) {
            let in_closed = closed.contains(e);
            tally.check(false, || format!("p={p} edge {e:?}"), !in_closed, in_closed);
        }
        tally.checked += defined.len().max(closed.len()) as u64;
        let allowed = PrimeSet::from_primes([2, p]).expect("primes");
        for &(x, y) in &closed {
            let diff = numtheory::prime_factors(y - x);
            tally.check(diff.is_subset(&allowed), || format!("p={p} edge ({x},{y})"), &allowed, &diff);
        }
        check_fingerprint(p, &mut tally);
    }
    Ok(tally.into_outcome(json!({ "bound": bound, "primes": counts })))
}

/// Degree profile of `Γ_p` over the vertices `2^i·p^j`, `i < 20`, `1 <= j <= 20`.
fn check_fingerprint(p: u64, tally: &mut Tally) {
    let kind = numtheory::classify_prime(p).expect("prime").tag;
    for i in 0..20u32 {
        for j in 1..=20u32 {
            let deg = neighbors_infinite(p, i, j).expect("vertex").len();
            let is_p = i == 0 && j == 1;
            let (ok, expected) = match kind {
                PrimeKind::Both if is_p => (deg == 4, "degree 4"),
                PrimeKind::Both => (deg >= 5, "degree >= 5"),
                PrimeKind::Fermat | PrimeKind::Mersenne if is_p => (deg == 2, "degree 2"),
                PrimeKind::Fermat | PrimeKind::Mersenne => (deg >= 3, "degree >= 3"),
                PrimeKind::Neither => ((deg == 1) == (i == 0), if i == 0 { "degree 1" } else { "degree != 1" }),
            };
            tally.check(ok, || format!("p={p} vertex 2^{i}·{p}^{j}"), expected, deg);
        }
    }
    if let Ok(d) = degree_infinite(p, p) {
        let ok = match kind {
            PrimeKind::Both => d == 4,
            PrimeKind::Fermat | PrimeKind::Mersenne => d == 2,
            PrimeKind::Neither => d == 1,
        };
        tally.check(ok, || format!("degree of {p} in Γ_{p}"), kind_degree(kind), d);
    }
}

fn kind_degree(kind: PrimeKind) -> usize {
    match kind {
        PrimeKind::Both => 4,
        PrimeKind::Fermat | PrimeKind::Mersenne => 2,
        PrimeKind::Neither => 1,
    }
}

/// The pairs `(a, n)` without a primitive prime divisor.
pub fn zsigmondy_exception(a: u64, n: u32) -> bool {
    (n == 2 && (a + 1).is_power_of_two()) || (a == 2 && n == 6)
}

fn zsigmondy_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(30);
    let cases: Vec<(u64, u32)> = (2..=bound).flat_map(|a| (2..=bound as u32).map(move |n| (a, n))).collect();
    let tally = par_tally(&cases, |&(a, n), t| {
        let got = numtheory::zsigmondy_inclusion(a, n);
        let expected = zsigmondy_exception(a, n);
        t.check(got == expected, || format!("a={a} n={n}"), expected, got);
    });
    let hits: Vec<(u64, u32)> = cases.iter().copied().filter(|&(a, n)| zsigmondy_exception(a, n)).collect();
    Ok(tally.into_outcome(json!({ "inclusions": hits })))
}

fn powers_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let limit = params.bound.unwrap_or(1_000_000);
    let pairs = numtheory::consecutive_perfect_powers(limit);
    let expected: Vec<(u64, u64)> = if limit >= 9 { vec![(8, 9)] } else { vec![] };
    let mut tally = Tally::default();
    tally.check(pairs == expected, || format!("limit={limit}"), format!("{expected:?}"), format!("{pairs:?}"));
    Ok(tally.into_outcome(json!({ "pairs": pairs })))
}

fn chains_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(50);
    let n_max = params.samples.map(|n| n as u32).unwrap_or(5);
    let mut tally = Tally::default();
    let mut singletons = Vec::new();
    for x in 2..=bound {
        let equal = power_chain_equal_set(x, n_max)?;
        tally.check(equal.contains(&1), || format!("x={x}"), "contains 1", format!("{equal:?}"));
        let top = descriptor(&[1, x])?;
        for n in 1..=n_max {
            let below = filter_le(&descriptor(&[1, x.pow(n)])?, &top);
            tally.check(below, || format!("𝔉{{1,{x}^{n}}} ⊆ 𝔉{{1,{x}}}"), true, below);
        }
        if x % 2 == 1 && !(x + 1).is_power_of_two() {
            let only_one = equal == BTreeSet::from([1]);
            tally.check(only_one, || format!("x={x}"), "{1}", format!("{equal:?}"));
            singletons.push(x);
        }
    }
    Ok(tally.into_outcome(json!({ "n_max": n_max, "checked_singleton_chains": singletons })))
}

fn recovery_suite(params: &SuiteParams) -> Result<Outcome, VerifyError> {
    let bound = params.bound.unwrap_or(200);
    let xs: Vec<u64> = (3..=bound).collect();
    let results: Vec<Result<Tally, FilterError>> = xs
        .par_iter()
        .map(|&x| {
            let mut t = Tally::default();
            let mut got = primes_from_order(x, x)?;
            got.insert(2).expect("prime");
            let mut want = numtheory::prime_factors(x);
            want.insert(2).expect("prime");
            t.check(got == want, || format!("x={x}"), &want, &got);
            Ok(t)
        })
        .collect();
    let mut tally = Tally::default();
    for r in results {
        tally.absorb(r?);
    }
    Ok(tally.into_outcome(json!({ "max_x": bound })))
}

/// Used by examples and the CLI to list suites.
pub fn suite_names() -> &'static [&'static str] {
    &Suite::NAMES
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cs(forced: &[u64], two: &[(u64, u64)]) -> CongruenceSet {
        CongruenceSet::new(forced.iter().copied(), two.iter().copied().collect()).unwrap()
    }

    fn d(v: &[u64]) -> FilterDescriptor {
        descriptor(v).unwrap()
    }

    #[test]
    fn closure_oracle_examples() {
        assert!(closure_oracle(5, 6, 8));
        assert!(!closure_oracle(5, 6, 7));
        assert!((1..50).all(|z| closure_oracle(17, 1, z)));
    }

    #[test]
    fn subset_examples() {
        assert!(congruence_set_subset(&cs(&[3, 5], &[]), &cs(&[3], &[])));
        assert!(!congruence_set_subset(&cs(&[3], &[]), &cs(&[3, 5], &[])));
        let s = closure(7, 30);
        assert!(congruence_set_subset(&s, &s));
        assert!(!congruence_set_subset(&cs(&[], &[(3, 1)]), &cs(&[], &[(3, 2)])));
        assert!(congruence_set_subset(&cs(&[3], &[]), &cs(&[], &[(3, 2)])));
    }

    #[test]
    fn subset_agrees_with_window_enumeration() {
        let primes = [2u64, 3, 5, 7, 11];
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let random_set = |rng: &mut ChaCha8Rng| {
            let mut forced = Vec::new();
            let mut two = BTreeMap::new();
            for &p in &primes {
                match rng.gen_range(0..3) {
                    0 => forced.push(p),
                    1 => {
                        two.insert(p, rng.gen_range(1..p));
                    }
                    _ => {}
                }
            }
            CongruenceSet::new(forced, two).unwrap()
        };
        for _ in 0..200 {
            let (s1, s2) = (random_set(&mut rng), random_set(&mut rng));
            let period = s1.primes().union(&s2.primes()).product().unwrap();
            let window = (1..=period).all(|z| !s1.contains(z) || s2.contains(z));
            assert_eq!(congruence_set_subset(&s1, &s2), window, "{s1} ⊆ {s2}");
        }
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(filter_le_oracle(&d(&[1, 121]), &d(&[1, 11])), Ok(true));
        assert_eq!(filter_le_oracle(&d(&[1, 11]), &d(&[1, 121])), Ok(false));
        assert_eq!(filter_le_oracle(&d(&[3, 6]), &d(&[5, 10])), Ok(false));
        assert_eq!(filter_le_oracle(&d(&[1, 3]), &d(&[1, 9])), Ok(true));
        assert_eq!(filter_le_oracle(&d(&[1, 9]), &d(&[1, 3])), Ok(true));
        assert_eq!(filter_le_oracle(&d(&[7]), &d(&[7, 10])), Err(VerifyError::TooSmall));
    }

    fn subsets(primes: &PrimeSet) -> Vec<PrimeSet> {
        let v: Vec<u64> = primes.iter().collect();
        (0u32..1 << v.len())
            .map(|m| PrimeSet::from_primes(v.iter().enumerate().filter(|(i, _)| m >> i & 1 == 1).map(|(_, &p)| p)).unwrap())
            .collect()
    }

    // membership searched over every L' ⊆ primes(B) ∖ A_F, every L₀ tried
    fn le_by_full_search(e: &FilterDescriptor, f: &FilterDescriptor) -> bool {
        let (ae, af) = (e.a_finite().unwrap(), f.a_finite().unwrap());
        subsets(&af.difference(ae)).iter().all(|l0| {
            let b = generator(e, l0).unwrap();
            subsets(&b.primes().difference(af))
                .iter()
                .any(|l| congruence_set_subset(&generator(f, l).unwrap(), &b))
        })
    }

    #[test]
    fn largest_witness_matches_full_search() {
        let descs: Vec<FilterDescriptor> = small_sets(14).iter().map(|e| d(e)).collect();
        for e in &descs {
            for f in &descs {
                assert_eq!(filter_le_oracle(e, f).unwrap(), le_by_full_search(e, f), "{:?} {:?}", e.elements(), f.elements());
            }
        }
    }

    #[test]
    fn a_by_definition_examples() {
        assert_eq!(a_by_definition(&[1, 3, 6]), PrimeSet::from_primes([2, 3]).unwrap());
        assert_eq!(a_by_definition(&[4, 8]), PrimeSet::from_primes([2]).unwrap());
    }

    #[test]
    fn unknown_suite() {
        assert_eq!(
            run_suite("nope", &SuiteParams::default()).unwrap_err(),
            VerifyError::UnknownSuite("nope".into())
        );
        for name in Suite::NAMES {
            assert_eq!(name.parse::<Suite>().unwrap().name(), name);
        }
    }

    #[test]
    fn small_suites_pass() {
        let params = |bound| SuiteParams { bound: Some(bound), ..Default::default() };
        for (name, bound) in [
            ("closure", 30),
            ("pairA", 60),
            ("realize", 7),
            ("order", 10),
            ("classify", 64),
            ("upsets", 7),
            ("gamma", 10_000),
            ("zsigmondy", 12),
            ("powers", 1000),
            ("chains", 20),
            ("recovery", 40),
        ] {
            let report = run_suite(name, &params(bound)).unwrap();
            assert!(report.passed(), "{name}: {:?}", report.failures);
            assert!(report.instances_checked > 0, "{name}");
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let params = SuiteParams { bound: Some(12), seed: 42, samples: Some(40), ..Default::default() };
        let a = run_suite("order", &params).unwrap();
        let b = run_suite("order", &params).unwrap();
        assert_eq!(a.body(), b.body());
        let up = SuiteParams { seed: 9, ..Default::default() };
        assert_eq!(run_suite("upsets", &up).unwrap().body(), run_suite("upsets", &up).unwrap().body());
    }

    #[test]
    fn failures_are_indexed_in_instance_order() {
        let items: Vec<u64> = (0..10).collect();
        let tally = par_tally(&items, |&i, t| {
            t.check(true, String::new, "", "");
            t.check(i % 3 != 0, || i.to_string(), "not a multiple of 3", i);
        });
        assert_eq!(tally.checked, 20);
        let idx: Vec<u64> = tally.failures.iter().map(|f| f.index).collect();
        assert_eq!(idx, vec![1, 7, 13, 19]);
    }
}
