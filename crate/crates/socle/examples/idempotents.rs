//! Decomposing a maximal finite-rank element into rank-one idempotent
//! directions: x = sum of lambda_i e_i with e_i^2 = e_i, e_i e_j = 0.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::random;
use socle::rank::{classical_rank_oracle, idempotent_decomposition, is_maximal_finite_rank};

fn main() {
    let alg = BlockAlgebra::new(vec![3, 2]).unwrap();
    let tol = Tolerances::default();
    let mut rng = random::rng_from_seed(12);

    // A sum of three random rank-ones is almost surely rank 3 with
    // distinct nonzero eigenvalues, hence maximal among rank-3 elements.
    let x = random::random_of_rank_rng(&alg, 3, &mut rng, &tol).unwrap();
    println!("rank(x) = {}", classical_rank_oracle(&x, &tol));
    println!("maximal finite rank: {}", is_maximal_finite_rank(&x, &tol, 8, 99).unwrap());

    let d = idempotent_decomposition(&x, &tol, 8, 99).unwrap();
    println!("recovered {} rank-one idempotent directions:", d.terms.len());
    for (i, (lambda, e)) in d.terms.iter().enumerate() {
        println!(
            "  lambda_{i} = {:+.4}{:+.4}i   ||e^2 - e|| = {:.2e}   rank(e) = {}",
            lambda.re,
            lambda.im,
            e.mul(e).distance(e),
            classical_rank_oracle(e, &tol)
        );
    }
    println!("reconstruction residual ||x - sum lambda_i e_i|| = {:.2e}", d.reconstruction_residual);
    println!("worst residual overall: {:.2e}", d.max_residual());

    // Orthogonality: products of distinct idempotents vanish.
    let mut worst = 0.0f64;
    for (i, (_, e)) in d.terms.iter().enumerate() {
        for (j, (_, f)) in d.terms.iter().enumerate() {
            if i != j {
                worst = worst.max(e.mul(f).norm());
            }
        }
    }
    println!("worst off-diagonal product norm: {worst:.2e}");

    // An element with a repeated nonzero eigenvalue is not maximal for
    // its rank, and the decomposition refuses it.
    let e = alg.matrix_unit(0, 0, 0);
    let f = alg.matrix_unit(0, 1, 1);
    let repeated = e.add(&f); // eigenvalue 1 twice
    println!(
        "repeated-eigenvalue example: maximal = {}, decomposition err = {}",
        is_maximal_finite_rank(&repeated, &tol, 8, 5).unwrap(),
        idempotent_decomposition(&repeated, &tol, 8, 5).unwrap_err()
    );
}
