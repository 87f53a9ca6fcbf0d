//! The map lambda -> spectral_radius(lambda c + q) obeys the circle
//! mean inequality: its value at a circle's center never exceeds the
//! mean over the circle. With c = 0 the map is constant.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::mat::C64;
use socle::random;
use socle::separation::subharmonic_scan;

fn main() {
    let alg = BlockAlgebra::new(vec![3]).unwrap();
    let tol = Tolerances::default();
    let mut rng = random::rng_from_seed(31);

    let c = random::random_element_rng(&alg, &mut rng);
    let q = random::random_element_rng(&alg, &mut rng);

    println!("center        radius   g(center)   circle mean   margin");
    for k in 0..6 {
        let center = C64::new(0.4 * k as f64 - 1.0, 0.3 * (k % 3) as f64);
        let radius = 0.3 + 0.2 * (k % 2) as f64;
        let rep = subharmonic_scan(&c, &q, center, radius, 64, &tol).unwrap();
        println!(
            "{:+.2}{:+.2}i   {:.2}     {:<10.6}  {:<12.6}  {:+.3e}{}",
            center.re,
            center.im,
            radius,
            rep.center_value,
            rep.circle_mean,
            rep.margin,
            if rep.violated { "  VIOLATION" } else { "" }
        );
        assert!(!rep.violated);
    }

    // c = 0 makes the scanned value identical at every sample, so the
    // spread is exactly zero, not merely small.
    let rep = subharmonic_scan(&alg.zero(), &q, C64::new(0.7, -0.2), 1.0, 64, &tol).unwrap();
    println!("constant case (c = 0): spread = {:?} (exact zero)", rep.spread);
    assert_eq!(rep.spread, 0.0);
}
