//! Running named verification suites. Set KIRCHLAB_THREADS to cap workers.

use kirchlab::verify::{run_suite, suite_names, SuiteParams};

fn main() {
    let small = |bound| SuiteParams { bound: Some(bound), ..Default::default() };
    for (name, params) in [
        ("closure", small(60)),
        ("order", SuiteParams { bound: Some(12), samples: Some(100), seed: 7, prime: None }),
        ("upsets", SuiteParams::default()),
        ("gamma", small(100_000)),
        ("powers", small(1_000_000)),
    ] {
        let r = run_suite(name, &params).unwrap();
        println!("{name:>8}: {} checks, {} failures, {:.2?}", r.instances_checked, r.failures.len(), r.elapsed);
    }
    println!("available: {}", suite_names().join(", "));
}
