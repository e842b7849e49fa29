//! Computational companion to the arithmetic of the Kirch space: the
//! topology on ℕ generated by progressions `a + bℕ₀` with `b` square-free
//! and coprime to `a`.
//!
//! * [`numtheory`]: primes, factorization, CRT, Fermat/Mersenne types,
//!   Zsigmondy and Catalan scans.
//! * [`progressions`]: Kirch-closures of progressions as periodic
//!   [`CongruenceSet`](progressions::CongruenceSet)s.
//! * [`filters`]: descriptors `(A_E, Π_E, α_E)` of the superconnecting
//!   filters `𝔉_E`, their order, and the top layers of the poset.
//! * [`gamma`]: the graphs `Γ_p` on `{2^i·p^j}` with both definition-level
//!   and closed-form edge sets.
//! * [`verify`]: independent oracles and named verification suites.
//! * [`cli`]: the `kirchlab` command line.

pub mod cli;
pub mod filters;
pub mod gamma;
pub mod numtheory;
pub mod progressions;
pub mod verify;

pub use filters::{classify, descriptor, filter_le, ClassLabel, FilterDescriptor};
pub use numtheory::PrimeSet;
pub use progressions::{closure, CongruenceSet};
