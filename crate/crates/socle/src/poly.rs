//! Polynomial recovery from point values in the Chebyshev basis, and root
//! extraction through the colleague matrix.
//!
//! Degrees here are bounded by the total algebra dimension, and sampling
//! at first-kind Chebyshev nodes keeps the recovery well conditioned over
//! that whole range.

use crate::mat::{C64, Mat};

/// First-kind Chebyshev nodes scaled to [-radius, radius], m of them.
pub fn chebyshev_nodes(m: usize, radius: f64) -> Vec<f64> {
    (0..m)
        .map(|j| radius * (std::f64::consts::PI * (2 * j + 1) as f64 / (2 * m) as f64).cos())
        .collect()
}

/// Chebyshev coefficients c_0..c_{m-1} of the degree < m polynomial taking
/// the given values at the m unscaled first-kind nodes. The discrete
/// cosine sum is exact for polynomials in that range.
pub fn chebyshev_coefficients(values: &[C64]) -> Vec<C64> {
    let m = values.len();
    let mut coeffs = Vec::with_capacity(m);
    for k in 0..m {
        let mut acc = C64::new(0.0, 0.0);
        for (j, &v) in values.iter().enumerate() {
            let theta = std::f64::consts::PI * (2 * j + 1) as f64 / (2 * m) as f64;
            acc += v * (k as f64 * theta).cos();
        }
        let w = if k == 0 { 1.0 / m as f64 } else { 2.0 / m as f64 };
        coeffs.push(acc * w);
    }
    coeffs
}

/// Drop trailing coefficients below `rel` times the largest modulus.
/// Returns the largest modulus. An all-tiny vector truncates to empty.
pub fn truncate_trailing(coeffs: &mut Vec<C64>, rel: f64) -> f64 {
    let cmax = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let cut = rel * cmax;
    while let Some(last) = coeffs.last() {
        if last.norm() <= cut {
            coeffs.pop();
        } else {
            break;
        }
    }
    cmax
}

/// Evaluate a Chebyshev series at a real point by Clenshaw recurrence.
pub fn chebyshev_eval(coeffs: &[C64], x: f64) -> C64 {
    let mut b1 = C64::new(0.0, 0.0);
    let mut b2 = C64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        let b0 = c + b1 * (2.0 * x) - b2;
        b2 = b1;
        b1 = b0;
    }
    b1 - b2 * x
}

/// Roots of a Chebyshev series with nonzero leading coefficient, as the
/// eigenvalues of its colleague matrix. Input length d+1 means degree d;
/// callers truncate first. Degree 0 has no roots.
pub fn chebyshev_roots(coeffs: &[C64]) -> Vec<C64> {
    let d = coeffs.len().saturating_sub(1);
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        // c0 + c1 T_1(x) = 0.
        return vec![-coeffs[0] / coeffs[1]];
    }
    let half = C64::new(0.5, 0.0);
    let lead = coeffs[d];
    let mut a = Mat::zeros(d);
    a[(1, 0)] = C64::new(1.0, 0.0);
    for j in 1..d - 1 {
        a[(j - 1, j)] = half;
        a[(j + 1, j)] = half;
    }
    a[(d - 2, d - 1)] = half;
    for k in 0..d {
        a[(k, d - 1)] -= coeffs[k] / (lead * 2.0);
    }
    a.eigenvalues().unwrap_or_default()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn eval_monomial_product(roots: &[C64], x: f64) -> C64 {
        roots
            .iter()
            .fold(C64::new(1.0, 0.0), |acc, &r| acc * (C64::new(x, 0.0) - r))
    }

    #[test]
    fn nodes_are_distinct_and_inside_radius() {
        let nodes = chebyshev_nodes(9, 0.25);
        for w in nodes.windows(2) {
            assert!((w[0] - w[1]).abs() > 1e-3);
        }
        assert!(nodes.iter().all(|t| t.abs() <= 0.25));
    }

    #[test]
    fn interpolation_recovers_known_roots() {
        let roots = [c(0.3, 0.1), c(-0.7, 0.0), c(0.05, -0.4), c(2.5, 0.0)];
        let m = roots.len() + 1;
        let nodes = chebyshev_nodes(m, 1.0);
        let values: Vec<C64> = nodes.iter().map(|&x| eval_monomial_product(&roots, x)).collect();
        let mut coeffs = chebyshev_coefficients(&values);
        truncate_trailing(&mut coeffs, 1e-10);
        assert_eq!(coeffs.len(), m, "full degree expected");
        let mut got = chebyshev_roots(&coeffs);
        let mut want = roots.to_vec();
        got.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        want.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).norm() < 1e-8, "{g} vs {w}");
        }
    }

    #[test]
    fn low_degree_padded_with_extra_nodes_truncates_cleanly() {
        // Degree 1 polynomial sampled at 6 nodes: trailing coefficients
        // vanish and a single root survives.
        let nodes = chebyshev_nodes(6, 1.0);
        let values: Vec<C64> = nodes
            .iter()
            .map(|&x| c(2.0, 0.0) * c(x, 0.0) + c(0.5, -1.0))
            .collect();
        let mut coeffs = chebyshev_coefficients(&values);
        truncate_trailing(&mut coeffs, 1e-10);
        assert_eq!(coeffs.len(), 2);
        let roots = chebyshev_roots(&coeffs);
        assert_eq!(roots.len(), 1);
        assert!((roots[0] - c(-0.25, 0.5)).norm() < 1e-12);
    }

    #[test]
    fn constant_polynomial_has_no_roots() {
        let nodes = chebyshev_nodes(4, 1.0);
        let values: Vec<C64> = nodes.iter().map(|_| c(3.0, 1.0)).collect();
        let mut coeffs = chebyshev_coefficients(&values);
        truncate_trailing(&mut coeffs, 1e-10);
        assert_eq!(coeffs.len(), 1);
        assert!(chebyshev_roots(&coeffs).is_empty());
    }

    #[test]
    fn clenshaw_matches_direct_evaluation() {
        let coeffs = [c(1.0, 0.0), c(-2.0, 0.5), c(0.0, 0.0), c(0.25, -0.25)];
        // T_0=1, T_1=x, T_2=2x^2-1, T_3=4x^3-3x.
        for &x in &[-0.9, -0.3, 0.0, 0.4, 1.0] {
            let direct = coeffs[0]
                + coeffs[1] * x
                + coeffs[2] * (2.0 * x * x - 1.0)
                + coeffs[3] * (4.0 * x * x * x - 3.0 * x);
            let got = chebyshev_eval(&coeffs, x);
            assert!((got - direct).norm() < 1e-13);
        }
    }

    #[test]
    fn degree_sixty_four_recovery_stays_accurate() {
        // Top of the supported range with balanced coefficients: a shifted
        // degree-64 Chebyshev polynomial, whose 64 roots are all real and
        // spread over the sampling interval.
        let n = 64usize;
        let mut true_coeffs = vec![c(0.0, 0.0); n + 1];
        true_coeffs[n] = c(1.0, 0.0);
        true_coeffs[3] = c(0.25, 0.125);
        true_coeffs[0] = c(0.1, -0.05);
        let nodes = chebyshev_nodes(n + 1, 1.0);
        let values: Vec<C64> = nodes.iter().map(|&x| chebyshev_eval(&true_coeffs, x)).collect();
        let mut coeffs = chebyshev_coefficients(&values);
        truncate_trailing(&mut coeffs, 1e-10);
        assert_eq!(coeffs.len(), n + 1);
        for (got, want) in coeffs.iter().zip(&true_coeffs) {
            assert!((got - want).norm() < 1e-10, "{got} vs {want}");
        }
        let got = chebyshev_roots(&coeffs);
        assert_eq!(got.len(), n);
        for r in &got {
            let v = {
                // Clenshaw on complex points for the residual check.
                let mut b1 = c(0.0, 0.0);
                let mut b2 = c(0.0, 0.0);
                for &ck in true_coeffs.iter().rev() {
                    let b0 = ck + b1 * (r * 2.0) - b2;
                    b2 = b1;
                    b1 = b0;
                }
                b1 - b2 * r
            };
            assert!(v.norm() < 1e-7, "root {r} has residual {:.2e}", v.norm());
        }
    }
}
