//! Singular points of the linear pencil lambda x + y.
//!
//! Per block, det(lambda x_b + y_b) is a polynomial of degree at most
//! the block dimension; its roots are the lambdas where that block (and
//! so the whole element) drops rank. The pencil is identically singular
//! when some block's determinant vanishes for every lambda, e.g. a
//! common kernel vector of x_b and y_b.

use crate::algebra::{AlgebraElement, Tolerances};
use crate::error::Result;
use crate::mat::C64;
use crate::poly::{chebyshev_coefficients, chebyshev_nodes, chebyshev_roots, truncate_trailing};
use crate::spectrum::Spectrum;

#[derive(Clone, Debug)]
pub struct PencilRoots {
    /// Clustered finite roots with multiplicity, sorted by (re, im).
    /// Empty when the pencil is identically singular.
    pub roots: Spectrum,
    pub identically_singular: bool,
    /// Sum of the per-block polynomial degrees after truncation.
    pub degree: usize,
}

/// Determinant values below this floor across all nodes mean the block
/// polynomial is identically zero, not merely small: matches the
/// degenerate-trial floor of the rank transform.
const VANISHING_FLOOR: f64 = 1e-250;

pub fn pencil_roots(x: &AlgebraElement, y: &AlgebraElement, tol: &Tolerances) -> Result<PencilRoots> {
    assert!(
        x.algebra().block_dims() == y.algebra().block_dims(),
        "pencil endpoints live in different algebras"
    );
    x.check_finite()?;
    y.check_finite()?;
    let mut all_roots: Vec<C64> = Vec::new();
    let mut degree = 0usize;
    // A root of multiplicity m is resolved to about eps^(1/m) by any
    // interpolation method; merging at eps^0.4 times the node radius
    // reunites split double roots without inventing precision.
    let mut merge = tol.cluster_tol;
    for (xb, yb) in x.blocks().iter().zip(y.blocks()) {
        let n = xb.dim();
        // Node disk sized to where this block's roots live: |lambda| is
        // at most |y| / sigma_min(x) for invertible x, and the low
        // degree keeps far roots well-conditioned anyway.
        let radius = ((1.0 + yb.frobenius_norm()) / (1.0 + xb.frobenius_norm())).max(1.0);
        merge = merge.max(f64::EPSILON.powf(0.4) * radius);
        let nodes = chebyshev_nodes(n + 1, radius);
        let values: Vec<C64> = nodes
            .iter()
            .map(|&lam| xb.scale(C64::new(lam, 0.0)).add(yb).lu().det())
            .collect();
        if values.iter().all(|v| v.norm() <= VANISHING_FLOOR) {
            return Ok(PencilRoots {
                roots: Spectrum::from_raw(Vec::new(), tol.cluster_tol),
                identically_singular: true,
                degree: 0,
            });
        }
        let mut coeffs = chebyshev_coefficients(&values);
        truncate_trailing(&mut coeffs, 1e-10);
        if coeffs.len() <= 1 {
            continue;
        }
        degree += coeffs.len() - 1;
        for tau in chebyshev_roots(&coeffs) {
            all_roots.push(tau * radius);
        }
    }
    Ok(PencilRoots {
        roots: Spectrum::from_raw(all_roots, merge),
        identically_singular: false,
        degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BlockAlgebra;
    use crate::random;
    use crate::spectrum::spectrum;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_minus_element_pencil_recovers_the_spectrum() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        for seed in 0..10u64 {
            let a = random::random_element(&alg, seed);
            let x = alg.identity();
            let y = a.scale(C64::new(-1.0, 0.0));
            let roots = pencil_roots(&x, &y, &tol()).unwrap();
            assert!(!roots.identically_singular);
            let sigma = spectrum(&a, &tol()).unwrap();
            assert!(
                roots.roots.matches(&sigma, 1e-6),
                "seed {seed}: pencil roots {:?} vs spectrum {:?}",
                roots.roots.entries(),
                sigma.entries()
            );
        }
    }

    #[test]
    fn common_kernel_is_identically_singular() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        // Both endpoints kill e_1: every lambda x + y does too.
        let mut x = alg.zero();
        x.block_mut(0)[(0, 0)] = C64::new(1.0, 0.0);
        let mut y = alg.zero();
        y.block_mut(0)[(0, 0)] = C64::new(3.0, -1.0);
        let roots = pencil_roots(&x, &y, &tol()).unwrap();
        assert!(roots.identically_singular);
        assert_eq!(roots.roots.multiset_size(), 0);
    }

    #[test]
    fn singular_x_still_yields_the_finite_roots() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        // x = E_00, y = identity: det(lambda x + y) = lambda + 1.
        let mut x = alg.zero();
        x.block_mut(0)[(0, 0)] = C64::new(1.0, 0.0);
        let y = alg.identity();
        let roots = pencil_roots(&x, &y, &tol()).unwrap();
        assert!(!roots.identically_singular);
        assert_eq!(roots.degree, 1);
        let entries = roots.roots.entries();
        assert_eq!(entries.len(), 1);
        assert!((entries[0].0 - C64::new(-1.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn multiple_roots_cluster_with_multiplicity() {
        let alg = BlockAlgebra::new(vec![3]).unwrap();
        // x = 1, y = -diag(2, 2, 5): double root at 2.
        let x = alg.identity();
        let mut y = alg.zero();
        y.block_mut(0)[(0, 0)] = C64::new(-2.0, 0.0);
        y.block_mut(0)[(1, 1)] = C64::new(-2.0, 0.0);
        y.block_mut(0)[(2, 2)] = C64::new(-5.0, 0.0);
        let roots = pencil_roots(&x, &y, &tol()).unwrap();
        let entries = roots.roots.entries();
        assert_eq!(entries.len(), 2);
        assert_eq!(entries[0].1, 2);
        assert!((entries[0].0 - C64::new(2.0, 0.0)).norm() < 1e-7);
        assert_eq!(entries[1].1, 1);
    }
}
