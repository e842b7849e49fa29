//! Finite scans of the classical results the graph structure rests on.

use kirchlab::numtheory::{
    consecutive_perfect_powers, crt_solve, first_prime_in_progression, zsigmondy_inclusion, Congruence,
};

fn main() {
    let exceptions: Vec<(u64, u32)> = (2..=20u64)
        .flat_map(|a| (2..=20u32).map(move |n| (a, n)))
        .filter(|&(a, n)| zsigmondy_inclusion(a, n))
        .collect();
    println!("a^n − 1 without a primitive prime divisor: {exceptions:?}");
    println!("consecutive perfect powers below 10^6: {:?}", consecutive_perfect_powers(1_000_000));

    let x = crt_solve(&[Congruence::new(2, 3).unwrap(), Congruence::new(3, 5).unwrap(), Congruence::new(2, 7).unwrap()])
        .unwrap();
    println!("x ≡ 2 (3), 3 (5), 2 (7): x ≡ {} mod {}", x.residue(), x.modulus());
    println!("first prime in 4 + 15n, n ≥ 1: {}", first_prime_in_progression(4, 15).unwrap());
}
