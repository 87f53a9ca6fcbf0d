//! Rank through the spectral transform t -> det-roots of y + t a,
//! checked against plain Gaussian elimination, plus the rank-one trace law.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::random;
use socle::rank::{classical_rank_oracle, spectral_rank, trace, trace_annihilation_test, TraceAnnihilation};

fn main() {
    let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
    let tol = Tolerances::default();
    let mut rng = random::rng_from_seed(42);

    println!("rank agreement on random elements of fixed rank:");
    for r in 0..=4 {
        let x = if r == 0 {
            alg.zero()
        } else {
            random::random_of_rank_rng(&alg, r, &mut rng, &tol).unwrap()
        };
        let report = spectral_rank(&x, &tol, 8, 7 + r as u64).unwrap();
        let oracle = classical_rank_oracle(&x, &tol);
        println!(
            "  built rank {r}: transform {} | elimination {} | per-trial {:?}",
            report.rank, oracle, report.per_trial
        );
        assert_eq!(report.rank, oracle);
    }

    // Rank-one elements u v^T have trace v^T u; the trace of the square
    // is the square of the trace. A nilpotent rank-one (v^T u = 0) is
    // trace-free and squares to zero.
    println!("rank-one trace law tr(x)^2 = tr(x^2):");
    for k in 0..3 {
        let x = random::random_rank_one_rng(&alg, &mut rng);
        let t1 = trace(&x, &tol).unwrap();
        let t2 = trace(&x.mul(&x), &tol).unwrap();
        println!("  sample {k}: tr^2 = {:+.6}{:+.6}i, tr(x^2) = {:+.6}{:+.6}i", (t1 * t1).re, (t1 * t1).im, t2.re, t2.im);
        assert!((t1 * t1 - t2).norm() <= 1e-8 * (1.0 + t2.norm()));
    }

    let n = random::random_rank_one_nilpotent_rng(&alg, &mut rng).unwrap();
    let tn = trace(&n, &tol).unwrap();
    println!("nilpotent rank-one: trace {:+.3e}{:+.3e}i, square norm {:.3e}", tn.re, tn.im, n.mul(&n).norm());

    // Trace annihilation: a nonzero x always has a rank-one partner a
    // with tr(x a) decisively nonzero; zero has none.
    match trace_annihilation_test(&alg.zero(), &tol, 5, 3).unwrap() {
        TraceAnnihilation::ZeroConfirmed => {
            println!("zero element: trace-annihilated by every rank-one partner")
        }
        TraceAnnihilation::Witness { .. } => unreachable!("zero cannot have a witness"),
    }
    let x = random::random_element_rng(&alg, &mut rng);
    match trace_annihilation_test(&x, &tol, 5, 3).unwrap() {
        TraceAnnihilation::Witness { value, via_sweep, .. } => println!(
            "random element: witnessed nonzero, tr(x a) = {:+.4}{:+.4}i (sweep used: {via_sweep})",
            value.re, value.im
        ),
        TraceAnnihilation::ZeroConfirmed => unreachable!("nonzero element"),
    }
}
