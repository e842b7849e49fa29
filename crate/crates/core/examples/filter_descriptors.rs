//! The invariants (A_E, Π_E, α_E) of a few finite sets.

use kirchlab::filters::{descriptor, pair_a};
use kirchlab::verify::a_by_definition;

fn main() {
    for set in [&[1u64, 2][..], &[3, 6], &[1, 121], &[4, 9, 19], &[7]] {
        let d = descriptor(set).unwrap();
        println!("{d}");
        println!("  {}", serde_json::to_string(&d).unwrap());
        if set.len() >= 2 {
            assert_eq!(d.a_finite(), Some(&a_by_definition(set)));
        }
    }

    // doubletons: A = {2} ∪ Π_x ∪ Π_y ∪ Π_|x−y|
    println!("A of {{12, 45}} = {}", pair_a(12, 45));
}
