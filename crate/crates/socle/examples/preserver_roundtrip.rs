//! Synthesize a structured map, hide it behind a black box, and recover
//! its canonical form: unit factor, block permutation, per-block
//! identity/transpose flags, and similarities up to scalar gauge.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::json::form_to_string;
use socle::preserver::{random_form, reconstruct, scalar_aligned_distance, BlackBoxMap};
use socle::random;

fn main() {
    // Two dimension-2 blocks make the permutation nontrivial to find.
    let alg = BlockAlgebra::new(vec![2, 2, 3]).unwrap();
    let tol = Tolerances::default();

    let secret = random_form(&alg, 2718, &tol).unwrap();
    println!("secret form: perm {:?}, flags {:?}", secret.block_perm(), secret.flags());

    // The box only evaluates; nothing of the structure is visible.
    let map = BlackBoxMap::from_form(&secret);

    let recovered = reconstruct(&map, &tol, 7).unwrap();
    println!("recovered:   perm {:?}, flags {:?}", recovered.block_perm(), recovered.flags());

    assert_eq!(recovered.block_perm(), secret.block_perm());
    assert_eq!(recovered.flags(), secret.flags());
    println!(
        "unit factor distance: {:.3e}",
        recovered.unit().distance(secret.unit()) / (1.0 + secret.unit().norm())
    );
    for (i, (p, q)) in recovered.similarities().iter().zip(secret.similarities()).enumerate() {
        println!("similarity {i}: scalar-gauge distance {:.3e}", scalar_aligned_distance(p, q));
    }

    // The recovered form reproduces the box on fresh inputs.
    let mut rng = random::rng_from_seed(555);
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let x = random::random_element_rng(&alg, &mut rng);
        let d = recovered.apply(&x).distance(&map.apply(&x)) / (1.0 + x.norm());
        worst = worst.max(d);
    }
    println!("worst evaluation mismatch over 50 probes: {worst:.3e}");
    assert!(worst <= 1e-8);

    println!("canonical JSON:\n{}", form_to_string(&recovered));
}
