//! Comparing filters by the arithmetic criterion and by generator sets.

use kirchlab::filters::{descriptor, filter_eq, filter_le, generator};
use kirchlab::numtheory::PrimeSet;
use kirchlab::verify::filter_le_oracle;

fn main() {
    let pairs: [(&[u64], &[u64]); 5] = [
        (&[1, 121], &[1, 11]),
        (&[1, 11], &[1, 121]),
        (&[1, 3], &[1, 9]),
        (&[3, 6], &[5, 10]),
        (&[2, 3, 8], &[1, 2]),
    ];
    for (e, f) in pairs {
        let (de, df) = (descriptor(e).unwrap(), descriptor(f).unwrap());
        let le = filter_le(&de, &df);
        assert_eq!(le, filter_le_oracle(&de, &df).unwrap());
        println!("F{e:?} ⊆ F{f:?}: {le}   equal: {}", filter_eq(&de, &df));
    }

    let d = descriptor(&[1, 121]).unwrap();
    let l = PrimeSet::from_primes([7, 13]).unwrap();
    println!("a base set of F{{1,121}}: {}", generator(&d, &l).unwrap());
}
