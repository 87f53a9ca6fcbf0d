//! Spectrum, trace, and invertibility verdicts on a two-block element.

use socle::algebra::{BlockAlgebra, Tolerances};
use socle::mat::{C64, Mat};
use socle::rank::trace;

fn main() {
    let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
    let tol = Tolerances::default();

    // diag(1, 1) in the first block, a Jordan-like upper triangle in the second.
    let mut x = alg.identity();
    let b1 = x.block_mut(1);
    *b1 = Mat::from_fn(3, |r, c| {
        if r == c {
            C64::new(2.0, 0.0)
        } else if c == r + 1 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    });

    println!("algebra: M_2 + M_3 (block dims {:?})", alg.block_dims());
    let s = x.spectrum(&tol).unwrap();
    println!("spectrum (value, multiplicity):");
    for &(z, m) in s.entries() {
        println!("  {:+.4}{:+.4}i  x{m}", z.re, z.im);
    }
    println!("distinct points: {}", s.distinct_count());
    println!("multiset size:   {} (equals total dimension)", s.multiset_size());
    println!("spectral radius: {:.4}", s.spectral_radius());

    let tr = trace(&x, &tol).unwrap();
    println!("trace via spectrum:  {:+.6}{:+.6}i", tr.re, tr.im);
    let d = x.diagonal_sum();
    println!("trace via diagonal:  {:+.6}{:+.6}i", d.re, d.im);

    println!("verdict: {}", x.is_invertible(&tol));

    // Kill one diagonal entry: the element becomes singular, and the
    // spectrum picks up the zero.
    x.block_mut(1)[(2, 2)] = C64::new(0.0, 0.0);
    println!("after zeroing one eigenvalue: {}", x.is_invertible(&tol));
    println!("min |lambda| now: {:.3e}", x.spectrum(&tol).unwrap().min_modulus());
}
