//! Rank and trace through the spectrum.
//!
//! The rank of an element is recovered from how many points can be knocked
//! out of the invertible group along a pencil: for invertible y the map
//! t -> det(y + t a) is a polynomial whose distinct roots count the
//! distinct nonzero eigenvalues of y^-1 a, and the supremum of that count
//! over y is the rank. The classical singular-value rank is computed by a
//! fully independent route and serves as the oracle in every test.


use crate::algebra::{AlgebraElement, Tolerances};
use crate::error::{Error, Result};
use crate::mat::{C64, Mat};
use crate::poly;
use crate::random;
use crate::spectrum::{spectrum, Spectrum};

pub const DEFAULT_RANK_TRIALS: usize = 8;

/// Sum over blocks of the singular-value rank: values above
/// `singular_tol` times the block scale count.
pub fn classical_rank_oracle(a: &AlgebraElement, tol: &Tolerances) -> usize {
    a.blocks()
        .iter()
        .map(|b| {
            let sv = b.singular_values();
            let scale = sv[0];
            if scale == 0.0 {
                return 0;
            }
            sv.iter().filter(|&&s| s > tol.singular_tol * scale).count()
        })
        .sum()
}

/// Outcome of the pencil-root rank computation.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rank: usize,
    /// Distinct root count of each trial; the rank is their maximum.
    pub per_trial: Vec<usize>,
    /// Degenerate probes that had to be redrawn.
    pub resamples: usize,
}

/// Rank via determinant pencils: max over `trials` random invertible y of
/// the number of distinct roots of t -> det(y + t a).
///
/// Nodes are scaled by the operator norm of a, which puts the roots
/// -1/eigenvalue near the sampling interval. Very close to the total
/// dimension cap the leading Chebyshev coefficients of a full-degree
/// pencil can fall under the truncation threshold and undercount; the
/// singular-value oracle stays exact over the whole range.
pub fn spectral_rank(
    a: &AlgebraElement,
    tol: &Tolerances,
    trials: usize,
    seed: u64,
) -> Result<RankReport> {
    let scale = a.operator_norm();
    if scale == 0.0 {
        return Ok(RankReport { rank: 0, per_trial: vec![], resamples: 0 });
    }
    let mut rng = random::rng_from_seed(seed);
    let mut per_trial = Vec::with_capacity(trials);
    let mut resamples = 0usize;
    for _ in 0..trials.max(1) {
        const RETRIES: usize = 8;
        let mut count = None;
        for _ in 0..RETRIES {
            let y = random::random_invertible_rng(a.algebra(), &mut rng, tol)?;
            match rank_trial(a, &y, scale, tol) {
                Some(c) => {
                    count = Some(c);
                    break;
                }
                None => resamples += 1,
            }
        }
        match count {
            Some(c) => per_trial.push(c),
            None => return Err(Error::DegenerateTrial { attempts: RETRIES }),
        }
    }
    let rank = per_trial.iter().copied().max().unwrap_or(0);
    Ok(RankReport { rank, per_trial, resamples })
}

/// One probe: interpolate det(y + t a) at Chebyshev nodes on
/// [-1/scale, 1/scale] and count distinct roots. Works in the normalized
/// variable tau = t * scale, so root clustering is scale free.
fn rank_trial(a: &AlgebraElement, y: &AlgebraElement, scale: f64, tol: &Tolerances) -> Option<usize> {
    let n_total = a.algebra().total_dim();
    let m = n_total + 1;
    let taus = poly::chebyshev_nodes(m, 1.0);
    let values: Vec<C64> = taus
        .iter()
        .map(|&tau| {
            let t = C64::new(tau / scale, 0.0);
            a.blocks()
                .iter()
                .zip(y.blocks())
                .map(|(ab, yb)| yb.add(&ab.scale(t)).det())
                .product()
        })
        .collect();
    if values.iter().map(|v| v.norm()).fold(0.0, f64::max) <= 1e-250 {
        return None;
    }
    let mut coeffs = poly::chebyshev_coefficients(&values);
    poly::truncate_trailing(&mut coeffs, 1e-10);
    if coeffs.len() <= 1 {
        return Some(0);
    }
    let roots = poly::chebyshev_roots(&coeffs);
    Some(Spectrum::from_raw(roots, tol.cluster_tol).distinct_count())
}

/// Membership in the dense set where x exposes the full rank of a:
/// the count of distinct nonzero eigenvalues of x a equals rank(a).
pub fn e_set_member(
    x: &AlgebraElement,
    a: &AlgebraElement,
    tol: &Tolerances,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let r = spectral_rank(a, tol, trials, seed)?;
    let s = spectrum(&x.mul(a), tol)?;
    Ok(s.nonzero_count() == r.rank)
}

/// True when the distinct nonzero eigenvalues of a exhaust its rank; such
/// an element splits into rank-one spectral idempotents.
pub fn is_maximal_finite_rank(
    a: &AlgebraElement,
    tol: &Tolerances,
    trials: usize,
    seed: u64,
) -> Result<bool> {
    let r = spectral_rank(a, tol, trials, seed)?;
    let s = spectrum(a, tol)?;
    Ok(s.nonzero_count() == r.rank)
}

/// Spectral splitting a = sum lambda_i p_i with rank-one mutually
/// orthogonal idempotents, one per distinct nonzero eigenvalue.
#[derive(Clone, Debug)]
pub struct Decomposition {
    /// (eigenvalue, spectral idempotent), sorted by eigenvalue (re, im).
    pub terms: Vec<(C64, AlgebraElement)>,
    pub idempotency_residual: f64,
    pub orthogonality_residual: f64,
    pub reconstruction_residual: f64,
}

impl Decomposition {
    pub fn max_residual(&self) -> f64 {
        self.idempotency_residual
            .max(self.orthogonality_residual)
            .max(self.reconstruction_residual)
    }
}

const EIGENVECTOR_COND_CAP: f64 = 1e8;

/// Decompose a maximal finite-rank element into rank-one spectral
/// idempotents via blockwise eigendecomposition.
pub fn idempotent_decomposition(
    a: &AlgebraElement,
    tol: &Tolerances,
    trials: usize,
    seed: u64,
) -> Result<Decomposition> {
    let r = spectral_rank(a, tol, trials, seed)?;
    let s = spectrum(a, tol)?;
    let nz = s.nonzero_entries();
    if nz.len() != r.rank {
        return Err(Error::NotMaximalFiniteRank { rank: r.rank, distinct: nz.len() });
    }

    struct BlockEigen {
        vals: Vec<C64>,
        v: Mat,
        vinv: Mat,
    }
    let mut eig: Vec<BlockEigen> = Vec::with_capacity(a.blocks().len());
    for (bi, b) in a.blocks().iter().enumerate() {
        let (vals, v) = b
            .eigen_full()
            .map_err(|_| Error::ConvergenceFailure { block: bi })?;
        let cond = v.condition_number();
        if !cond.is_finite() || cond > EIGENVECTOR_COND_CAP {
            return Err(Error::IllConditioned { block: bi, cond });
        }
        let vinv = v.inverse();
        eig.push(BlockEigen { vals, v, vinv });
    }

    let mut terms = Vec::with_capacity(nz.len());
    for &(lambda, _) in &nz {
        // Maximality makes each nonzero cluster a single simple eigenvalue
        // in a single block; locate it.
        let mut best: Option<(usize, usize, f64)> = None;
        for (bi, be) in eig.iter().enumerate() {
            for (k, &v) in be.vals.iter().enumerate() {
                let d = (v - lambda).norm();
                if best.map_or(true, |(_, _, bd)| d < bd) {
                    best = Some((bi, k, d));
                }
            }
        }
        let (bi, k, d) = best.expect("nonzero spectrum implies at least one eigenvalue");
        if d > tol.cluster_tol {
            return Err(Error::NotMaximalFiniteRank { rank: r.rank, distinct: nz.len() });
        }
        let be = &eig[bi];
        let dim = be.v.dim();
        let p = Mat::from_fn(dim, |row, col| be.v[(row, k)] * be.vinv[(k, col)]);
        terms.push((lambda, a.algebra().embed(bi, p)));
    }

    let mut idem = 0.0f64;
    let mut orth = 0.0f64;
    for (i, (_, p)) in terms.iter().enumerate() {
        idem = idem.max(p.mul(p).distance(p));
        for (j, (_, q)) in terms.iter().enumerate() {
            if i != j {
                orth = orth.max(p.mul(q).norm());
            }
        }
    }
    let mut recon = a.algebra().zero();
    for (lambda, p) in &terms {
        recon = recon.add(&p.scale(*lambda));
    }
    let reco = recon.distance(a);

    Ok(Decomposition {
        terms,
        idempotency_residual: idem,
        orthogonality_residual: orth,
        reconstruction_residual: reco,
    })
}

/// Trace as the multiplicity-weighted sum over the spectrum. Coincides
/// with the diagonal sum, but is computed spectrally.
pub fn trace(a: &AlgebraElement, tol: &Tolerances) -> Result<C64> {
    Ok(spectrum(a, tol)?.weighted_sum())
}

/// Result of hunting for a rank-one element whose product with x has
/// nonzero trace.
#[derive(Clone, Debug)]
pub enum TraceAnnihilation {
    /// |x| is already negligible; every trace vanishes trivially.
    ZeroConfirmed,
    Witness {
        witness: AlgebraElement,
        value: C64,
        /// Whether the random phase failed and the deterministic
        /// matrix-unit sweep produced the witness.
        via_sweep: bool,
    },
}

/// Look for rank-one a with tr(x a) decisively nonzero. Random rank-one
/// probes first; if none clears the threshold, sweep matrix units, where
/// tr(x E_ij) reads the (j, i) entry of x and the largest entry is a
/// guaranteed witness for any x of non-negligible norm.
pub fn trace_annihilation_test(
    x: &AlgebraElement,
    tol: &Tolerances,
    samples: usize,
    seed: u64,
) -> Result<TraceAnnihilation> {
    let xnorm = x.norm();
    if xnorm <= 1e-10 {
        return Ok(TraceAnnihilation::ZeroConfirmed);
    }
    let threshold = 1e-6 * xnorm;
    let mut rng = random::rng_from_seed(seed);
    for _ in 0..samples {
        let a = random::random_rank_one_rng(x.algebra(), &mut rng);
        let a = a.scale(C64::new(1.0 / a.norm().max(1e-300), 0.0));
        let t = trace(&x.mul(&a), tol)?;
        if t.norm() > threshold {
            return Ok(TraceAnnihilation::Witness { witness: a, value: t, via_sweep: false });
        }
    }
    // Deterministic sweep: the matrix unit aligned with the largest entry.
    let mut best: Option<(usize, usize, usize, f64)> = None;
    for (bi, b) in x.blocks().iter().enumerate() {
        for i in 0..b.dim() {
            for j in 0..b.dim() {
                let v = b[(i, j)].norm();
                if best.map_or(true, |(_, _, _, bv)| v > bv) {
                    best = Some((bi, i, j, v));
                }
            }
        }
    }
    let (bi, i, j, _) = best.expect("element has at least one block");
    // tr(x E_ji) = x_ij, so the witness for entry (i, j) is E_ji.
    let a = x.algebra().matrix_unit(bi, j, i);
    let t = trace(&x.mul(&a), tol)?;
    if t.norm() > threshold {
        return Ok(TraceAnnihilation::Witness { witness: a, value: t, via_sweep: true });
    }
    Err(Error::WitnessNotFound { mode: "trace-annihilation".into(), attempts: samples + 1 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BlockAlgebra;
    use crate::random::{
        random_element_rng, random_of_rank_rng, random_rank_one_rng, rng_from_seed,
    };

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag_element(dims: &[usize], entries: &[f64]) -> AlgebraElement {
        let alg = BlockAlgebra::new(dims.to_vec()).unwrap();
        let mut e = alg.zero();
        let mut k = 0;
        for (bi, &d) in dims.iter().enumerate() {
            for i in 0..d {
                e.block_mut(bi)[(i, i)] = c(entries[k], 0.0);
                k += 1;
            }
        }
        e
    }

    #[test]
    fn oracle_counts_singular_value_rank() {
        let alg = BlockAlgebra::new(vec![3]).unwrap();
        assert_eq!(classical_rank_oracle(&alg.matrix_unit(0, 0, 0), &tol()), 1);
        assert_eq!(classical_rank_oracle(&alg.zero(), &tol()), 0);
        assert_eq!(classical_rank_oracle(&alg.identity(), &tol()), 3);
        let two = diag_element(&[3], &[1.0, 2.0, 0.0]);
        assert_eq!(classical_rank_oracle(&two, &tol()), 2);
        let mixed = BlockAlgebra::new(vec![2, 3]).unwrap().identity();
        assert_eq!(classical_rank_oracle(&mixed, &tol()), 5);
    }

    #[test]
    fn spectral_rank_on_fixed_elements() {
        let alg = BlockAlgebra::new(vec![3]).unwrap();
        let r = spectral_rank(&alg.matrix_unit(0, 0, 0), &tol(), 8, 1).unwrap();
        assert_eq!(r.rank, 1);

        let alg23 = BlockAlgebra::new(vec![2, 3]).unwrap();
        let r = spectral_rank(&alg23.identity(), &tol(), 8, 2).unwrap();
        assert_eq!(r.rank, 5);

        let r = spectral_rank(&alg.zero(), &tol(), 8, 3).unwrap();
        assert_eq!(r.rank, 0);

        // Nilpotent matrix unit: rank one even though the spectrum is {0}.
        let r = spectral_rank(&alg.matrix_unit(0, 0, 1), &tol(), 8, 4).unwrap();
        assert_eq!(r.rank, 1);
    }

    #[test]
    fn spectral_rank_matches_oracle_on_random_and_stratified_elements() {
        let algebras = [vec![2, 2], vec![3], vec![2, 3]];
        let mut rng = rng_from_seed(99);
        for dims in &algebras {
            let alg = BlockAlgebra::new(dims.clone()).unwrap();
            for k in 0..60u64 {
                let x = random_element_rng(&alg, &mut rng);
                let want = classical_rank_oracle(&x, &tol());
                let got = spectral_rank(&x, &tol(), 8, k).unwrap().rank;
                assert_eq!(got, want, "dims {dims:?} draw {k}");
            }
            for r in 0..=alg.total_dim() {
                let x = random_of_rank_rng(&alg, r, &mut rng, &tol()).unwrap();
                let got = spectral_rank(&x, &tol(), 8, r as u64).unwrap().rank;
                assert_eq!(got, r, "stratified rank {r} in {dims:?}");
            }
        }
    }

    #[test]
    fn rank_is_invariant_under_invertible_multiplication() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mut rng = rng_from_seed(5);
        for k in 0..20u64 {
            let a = random_of_rank_rng(&alg, 2, &mut rng, &tol()).unwrap();
            let u = crate::random::random_invertible_rng(&alg, &mut rng, &tol()).unwrap();
            let ua = u.mul(&a);
            assert_eq!(spectral_rank(&ua, &tol(), 8, k).unwrap().rank, 2);
            assert_eq!(classical_rank_oracle(&ua, &tol()), 2);
        }
    }

    #[test]
    fn e_set_membership_examples() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let a = alg.matrix_unit(0, 0, 0);
        let one = alg.identity();
        assert!(e_set_member(&one, &a, &tol(), 8, 1).unwrap());
        // x a nilpotent: zero nonzero spectrum, so x falls outside E(a).
        let x = alg.matrix_unit(0, 1, 0);
        assert!(!e_set_member(&x, &a, &tol(), 8, 2).unwrap());
    }

    #[test]
    fn maximal_finite_rank_examples() {
        let yes = diag_element(&[3], &[1.0, 2.0, 0.0]);
        assert!(is_maximal_finite_rank(&yes, &tol(), 8, 1).unwrap());
        // Repeated eigenvalue: rank 2 but only one distinct nonzero value.
        let no = diag_element(&[3], &[1.0, 1.0, 0.0]);
        assert!(!is_maximal_finite_rank(&no, &tol(), 8, 2).unwrap());
        // Same repetition across different blocks.
        let cross = diag_element(&[2, 2], &[1.0, 0.0, 1.0, 0.0]);
        assert!(!is_maximal_finite_rank(&cross, &tol(), 8, 3).unwrap());
    }

    #[test]
    fn decomposition_recovers_diagonal_case() {
        let a = diag_element(&[3], &[5.0, -2.0, 0.0]);
        let d = idempotent_decomposition(&a, &tol(), 8, 7).unwrap();
        assert_eq!(d.terms.len(), 2);
        assert!(d.max_residual() < 1e-12, "residual {}", d.max_residual());
        let lambdas: Vec<f64> = d.terms.iter().map(|(l, _)| l.re).collect();
        assert_eq!(lambdas, vec![-2.0, 5.0]);
        for (_, p) in &d.terms {
            assert_eq!(classical_rank_oracle(p, &tol()), 1);
        }
    }

    #[test]
    fn decomposition_rejects_non_maximal_input() {
        let a = diag_element(&[3], &[1.0, 1.0, 0.0]);
        match idempotent_decomposition(&a, &tol(), 8, 7) {
            Err(Error::NotMaximalFiniteRank { rank: 2, distinct: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn decomposition_handles_conjugated_elements_across_blocks() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        let mut rng = rng_from_seed(31);
        // Distinct nonzero eigenvalues spread over both blocks, then hidden
        // behind a similarity.
        let lambdas = [c(2.0, 1.0), c(-1.0, 0.5), c(0.5, -3.0)];
        let mut a = alg.zero();
        a.block_mut(0)[(0, 0)] = lambdas[0];
        a.block_mut(1)[(0, 0)] = lambdas[1];
        a.block_mut(1)[(1, 1)] = lambdas[2];
        let s = crate::random::random_well_conditioned_rng(&alg, &mut rng, &tol(), 1e4).unwrap();
        let a = s.mul(&a).mul(&s.inverse(&tol()).unwrap());
        let d = idempotent_decomposition(&a, &tol(), 8, 13).unwrap();
        assert_eq!(d.terms.len(), 3);
        assert!(d.max_residual() < 1e-8, "residual {}", d.max_residual());
    }

    #[test]
    fn trace_matches_diagonal_sum() {
        let mut rng = rng_from_seed(3);
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        for _ in 0..40 {
            let x = random_element_rng(&alg, &mut rng);
            let t = trace(&x, &tol()).unwrap();
            let d = x.diagonal_sum();
            assert!((t - d).norm() <= 1e-8 * (1.0 + x.norm()), "{t} vs {d}");
        }
    }

    #[test]
    fn trace_of_fixed_diagonal() {
        let a = diag_element(&[3], &[2.0, 3.0, 0.0]);
        let t = trace(&a, &tol()).unwrap();
        assert!((t - c(5.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn rank_one_trace_reads_the_eigenvalue() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        let mut rng = rng_from_seed(8);
        for _ in 0..40 {
            let a = random_rank_one_rng(&alg, &mut rng);
            let t = trace(&a, &tol()).unwrap();
            let d = a.diagonal_sum();
            assert!((t - d).norm() <= 1e-8 * (1.0 + a.norm()));
        }
    }

    #[test]
    fn trace_annihilation_finds_witnesses() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mut rng = rng_from_seed(14);
        for k in 0..20u64 {
            let x = random_element_rng(&alg, &mut rng);
            match trace_annihilation_test(&x, &tol(), 16, k).unwrap() {
                TraceAnnihilation::Witness { value, .. } => {
                    assert!(value.norm() > 1e-6 * x.norm());
                }
                TraceAnnihilation::ZeroConfirmed => panic!("x is not tiny"),
            }
        }
    }

    #[test]
    fn trace_annihilation_sweep_path_and_zero_path() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let zero = alg.zero();
        assert!(matches!(
            trace_annihilation_test(&zero, &tol(), 4, 1).unwrap(),
            TraceAnnihilation::ZeroConfirmed
        ));
        // Off-diagonal unit: the sweep witness must read entry (1, 0).
        let x = alg.matrix_unit(0, 1, 0);
        match trace_annihilation_test(&x, &tol(), 0, 2).unwrap() {
            TraceAnnihilation::Witness { witness, value, via_sweep } => {
                assert!(via_sweep);
                assert_eq!(witness, alg.matrix_unit(0, 0, 1));
                assert!((value - c(1.0, 0.0)).norm() < 1e-10);
            }
            other => panic!("unexpected: {other:?}"),
        }
    }
}
