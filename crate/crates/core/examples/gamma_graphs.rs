//! The graphs Γ_p: edges from the definition and from closed-form families.

use kirchlab::gamma::{degree_infinite, edges_by_definition, edges_closed_form, export_dot, gamma_p};
use kirchlab::numtheory::classify_prime;

fn main() {
    for p in [3u64, 5, 7, 11] {
        let t = classify_prime(p).unwrap();
        let defined = edges_by_definition(p, 100_000).unwrap();
        assert_eq!(defined, edges_closed_form(p, 100_000).unwrap());
        println!(
            "Γ_{p} ({:?}): {} edges below 10^5, degree of {p} is {}",
            t.tag,
            defined.len(),
            degree_infinite(p, p).unwrap()
        );
    }
    print!("{}", export_dot(&gamma_p(11, 100).unwrap()));
}
