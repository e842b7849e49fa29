//! The top layers of the filter poset and the up-sets of second-layer filters.

use kirchlab::filters::{classify, descriptor, upset_in_fprime};

fn main() {
    for set in [&[1u64, 2][..], &[1, 3, 6], &[3, 6], &[5, 10], &[1, 15, 30], &[1, 3, 5]] {
        let d = descriptor(set).unwrap();
        let label = classify(&d).unwrap();
        println!("{set:?}: {label}");
        if let Ok(up) = upset_in_fprime(&d) {
            let reps: Vec<_> = up.iter().map(|u| u.elements().to_vec()).collect();
            println!("  {} filters above: {reps:?}", up.len());
        }
    }
}
