//! Where is the pencil lambda x + y singular? For invertible x the
//! answer is a finite root set; a shared kernel makes it singular
//! identically.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::mat::C64;
use socle::pencil::pencil_roots;
use socle::random;
use socle::spectrum::spectrum;

fn main() {
    let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
    let tol = Tolerances::default();
    let mut rng = random::rng_from_seed(8);

    // With x = 1 and y = -a the singular set is exactly the spectrum.
    let a = random::random_element_rng(&alg, &mut rng);
    let r = pencil_roots(&alg.identity(), &a.scale(C64::new(-1.0, 0.0)), &tol).unwrap();
    let s = spectrum(&a, &tol).unwrap();
    println!("pencil roots of lambda 1 - a   vs   spectrum of a:");
    for (&(root, rm), &(ev, em)) in r.roots.entries().iter().zip(s.entries()) {
        println!(
            "  {:+.6}{:+.6}i x{rm}   |   {:+.6}{:+.6}i x{em}",
            root.re, root.im, ev.re, ev.im
        );
    }
    assert!(r.roots.matches(&s, 1e-6));

    // General invertible x: still a degree-(total dim) root set.
    let x = random::random_invertible_rng(&alg, &mut rng, &tol).unwrap();
    let y = random::random_element_rng(&alg, &mut rng);
    let r = pencil_roots(&x, &y, &tol).unwrap();
    println!("random invertible x: degree {} with {} distinct roots", r.degree, r.roots.distinct_count());
    for &(root, m) in r.roots.entries() {
        let z = x.scale(root).add(&y);
        println!(
            "  root {:+.4}{:+.4}i x{m}: verdict at root = {}",
            root.re,
            root.im,
            z.is_invertible(&tol)
        );
    }

    // x = E11, y = E12 in one block share the kernel direction e2 in
    // every combination: det(lambda x + y) vanishes identically there.
    let x = alg.matrix_unit(0, 0, 0);
    let y = alg.matrix_unit(0, 0, 1);
    let r = pencil_roots(&x, &y, &tol).unwrap();
    println!("matrix-unit pencil: identically singular = {}", r.identically_singular);
}
