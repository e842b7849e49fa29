//! Building a set with prescribed A_E and α_E.

use std::collections::BTreeMap;

use kirchlab::filters::{descriptor, realize};
use kirchlab::numtheory::PrimeSet;

fn main() {
    let a = PrimeSet::from_primes([2, 3, 5, 7]).unwrap();
    let alpha = BTreeMap::from([(2, 1), (3, 2), (5, 0), (7, 4)]);
    let e = realize(&a, &alpha).unwrap();
    let d = descriptor(&e).unwrap();
    println!("E = {e:?}");
    println!("{}", serde_json::to_string(&d).unwrap());
    assert_eq!(d.a_finite(), Some(&a));
    assert_eq!(d.alpha(), &alpha);
}
