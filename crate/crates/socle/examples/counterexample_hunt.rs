//! Refuting maps that are not invertibility preservers. The lemma
//! battery pinpoints the cheapest broken necessary condition; the
//! pencil check hunts for an explicit (x, y, lambda) counterexample.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::checks::{builtin_map, builtin_pair, lemma_battery, pencil_condition_check, BUILTIN_FAMILIES};

fn main() {
    let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
    let tol = Tolerances::default();
    let seed = 17;

    println!("available families: {}", BUILTIN_FAMILIES.join(", "));
    println!();

    for family in ["identity", "random_form", "shift", "quadratic", "rank_collapse"] {
        let map = builtin_map(family, &alg, seed, &tol).unwrap();
        let checks = lemma_battery(&map, &tol, 60, seed).unwrap();
        let verdict = if checks.iter().all(|c| c.passed) {
            "consistent with a preserver".to_string()
        } else {
            let first = checks.iter().find(|c| !c.passed).unwrap();
            format!("refuted by '{}' (residual {:.2e})", first.name, first.worst_residual)
        };
        println!("{family:<20} {verdict}");
    }
    println!();

    // The pencil condition tests pairs: lambda phi(x) + psi(y) must be
    // invertible exactly when lambda x + y is. A transpose on one side
    // only is caught by the deterministic probes before any sampling.
    let (phi, psi) = builtin_pair("transpose_mismatch", &alg, seed, &tol).unwrap();
    let report = pencil_condition_check(&phi, &psi, &tol, 5000, seed).unwrap();
    let ce = report.counterexample.expect("mismatch must be caught");
    println!("transpose_mismatch: counterexample from {} (random trials used: {})", ce.probe, report.random_trials);
    println!(
        "  lambda = {:+.3}{:+.3}i, source {}, image {}",
        ce.lambda.re, ce.lambda.im, ce.source_verdict, ce.image_verdict
    );

    // A matching pair sails through the same gauntlet.
    let (phi, psi) = builtin_pair("random_form", &alg, seed, &tol).unwrap();
    let report = pencil_condition_check(&phi, &psi, &tol, 400, seed).unwrap();
    println!(
        "random_form pair:   no counterexample in {} deterministic + {} random probes ({} ambiguous skipped)",
        report.deterministic_probes, report.random_trials, report.ambiguous_skipped
    );
    assert!(report.passed());
}
