//! Kirch-closure of an arithmetic progression and the two ways to test it.

use kirchlab::progressions::{closure, Progression};
use kirchlab::verify::closure_oracle;

fn main() {
    let (a, b) = (5, 6);
    let c = closure(a, b);
    println!("closure of {} is {c}", Progression::new(a, b));
    println!("members in [1, 30]: {:?}", c.members(1, 30));
    println!("period {}", c.period().unwrap());

    for z in 1..=12 {
        assert_eq!(c.contains(z), closure_oracle(a, b, z));
    }

    // closures of basic open sets always meet
    let d = closure(7, 10);
    let both = c.intersect(&d);
    println!("{c} ∩ {d} = {both}, first members {:?}", both.members(1, 100));
    println!("{}", serde_json::to_string(&both).unwrap());
}
