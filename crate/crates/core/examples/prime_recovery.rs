//! Reading prime divisors and power chains off the filter order alone.

use kirchlab::filters::{power_chain_equal_set, primes_from_order};

fn main() {
    for x in [12u64, 45, 97, 210] {
        println!("odd primes of {x} seen by the order: {}", primes_from_order(x, x).unwrap());
    }
    for x in [3u64, 5, 7, 9] {
        println!("n <= 5 with F{{1,{x}^n}} = F{{1,{x}}}: {:?}", power_chain_equal_set(x, 5).unwrap());
    }
}
