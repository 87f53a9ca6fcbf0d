//! Seeded random generators for algebra elements.
//!
//! Every public entry point takes either an explicit `u64` seed or a caller
//! owned ChaCha stream, never ambient randomness: identical seeds must give
//! identical elements across runs and platforms.

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{AlgebraElement, BlockAlgebra, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::mat::{C64, Mat};

pub type Rng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform in [0, 1) from the top 53 bits of one draw.
pub fn uniform(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn uniform_range(rng: &mut impl RngCore, lo: f64, hi: f64) -> f64 {
    lo + (hi - lo) * uniform(rng)
}

pub fn below(rng: &mut impl RngCore, n: usize) -> usize {
    assert!(n > 0);
    (uniform(rng) * n as f64) as usize % n
}

/// Standard real Gaussian via Box-Muller.
pub fn gaussian(rng: &mut impl RngCore) -> f64 {
    let mut u1 = uniform(rng);
    if u1 <= 0.0 {
        u1 = f64::MIN_POSITIVE;
    }
    let u2 = uniform(rng);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

/// Standard complex Gaussian: independent N(0, 1/2) real and imaginary
/// parts, so E|z|^2 = 1.
pub fn complex_gaussian(rng: &mut impl RngCore) -> C64 {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    C64::new(gaussian(rng) * s, gaussian(rng) * s)
}

pub fn gaussian_vector(rng: &mut impl RngCore, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

pub fn gaussian_matrix(rng: &mut impl RngCore, n: usize) -> Mat {
    Mat::from_fn(n, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary: modified Gram-Schmidt on a Gaussian matrix
/// with a re-orthogonalization pass and phase-fixed diagonal.
pub fn haar_unitary(rng: &mut impl RngCore, n: usize) -> Mat {
    loop {
        let g = gaussian_matrix(rng, n);
        if let Some(q) = orthonormalize(&g) {
            return q;
        }
    }
}

fn orthonormalize(g: &Mat) -> Option<Mat> {
    let n = g.dim();
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| g.column(j)).collect();
    for j in 0..n {
        for _pass in 0..2 {
            for k in 0..j {
                let proj: C64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let s = proj * cols[k][i];
                    cols[j][i] -= s;
                }
            }
        }
        let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if nrm < 1e-8 {
            return None;
        }
        // Phase convention: make the leading entry's row real positive.
        let lead = cols[j][j];
        let phase = if lead.norm() > 0.0 { lead / lead.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            cols[j][i] = cols[j][i] / nrm * phase.conj();
        }
    }
    Some(Mat::from_fn(n, |i, j| cols[j][i]))
}

/// Dense element with i.i.d. complex Gaussian entries in every block.
pub fn random_element(alg: &BlockAlgebra, seed: u64) -> AlgebraElement {
    random_element_rng(alg, &mut rng_from_seed(seed))
}

pub fn random_element_rng(alg: &BlockAlgebra, rng: &mut impl RngCore) -> AlgebraElement {
    let blocks = alg.block_dims().iter().map(|&d| gaussian_matrix(rng, d)).collect();
    alg.from_blocks(blocks).expect("generated blocks match the algebra")
}

const GEN_ATTEMPTS: usize = 64;

/// Dense Gaussian element resampled until the invertibility verdict is
/// decisively invertible.
pub fn random_invertible(alg: &BlockAlgebra, seed: u64, tol: &Tolerances) -> Result<AlgebraElement> {
    random_invertible_rng(alg, &mut rng_from_seed(seed), tol)
}

pub fn random_invertible_rng(
    alg: &BlockAlgebra,
    rng: &mut impl RngCore,
    tol: &Tolerances,
) -> Result<AlgebraElement> {
    for _ in 0..GEN_ATTEMPTS {
        let x = random_element_rng(alg, rng);
        if x.is_invertible(tol) == Verdict::Invertible {
            return Ok(x);
        }
    }
    Err(Error::GenerationFailure { what: "invertible element".into(), attempts: GEN_ATTEMPTS })
}

/// Like `random_invertible`, with the condition number of every block
/// capped. Used where inverse residuals must stay provably small.
pub fn random_well_conditioned_rng(
    alg: &BlockAlgebra,
    rng: &mut impl RngCore,
    tol: &Tolerances,
    max_cond: f64,
) -> Result<AlgebraElement> {
    for _ in 0..GEN_ATTEMPTS {
        let x = random_element_rng(alg, rng);
        if x.is_invertible(tol) != Verdict::Invertible {
            continue;
        }
        if x.blocks().iter().all(|b| b.condition_number() <= max_cond) {
            return Ok(x);
        }
    }
    Err(Error::GenerationFailure {
        what: format!("element with condition below {max_cond:.1e}"),
        attempts: GEN_ATTEMPTS,
    })
}

/// Rank-one element: a Gaussian outer product e f^T placed in one random
/// block, all other blocks zero.
pub fn random_rank_one(alg: &BlockAlgebra, seed: u64) -> AlgebraElement {
    random_rank_one_rng(alg, &mut rng_from_seed(seed))
}

pub fn random_rank_one_rng(alg: &BlockAlgebra, rng: &mut impl RngCore) -> AlgebraElement {
    loop {
        let block = below(rng, alg.block_count());
        let d = alg.block_dims()[block];
        let e = gaussian_vector(rng, d);
        let f = gaussian_vector(rng, d);
        let m = Mat::outer(&e, &f);
        if m.max_abs_entry() > 1e-12 {
            return alg.embed(block, m);
        }
    }
}

/// Rank-one element whose single potentially nonzero eigenvalue is zero:
/// e f^T with sum_i e_i f_i = 0, so the block square vanishes.
/// Needs some block of dimension at least 2.
pub fn random_rank_one_nilpotent_rng(
    alg: &BlockAlgebra,
    rng: &mut impl RngCore,
) -> Result<AlgebraElement> {
    let candidates: Vec<usize> = (0..alg.block_count())
        .filter(|&i| alg.block_dims()[i] >= 2)
        .collect();
    if candidates.is_empty() {
        return Err(Error::GenerationFailure {
            what: "nilpotent rank-one element (needs a block of dim >= 2)".into(),
            attempts: 0,
        });
    }
    for _ in 0..GEN_ATTEMPTS {
        let block = candidates[below(rng, candidates.len())];
        let d = alg.block_dims()[block];
        let e = gaussian_vector(rng, d);
        let mut f = gaussian_vector(rng, d);
        // Remove the component of f along conj(e) so that f . e = 0.
        let ee: C64 = e.iter().map(|z| z * z).sum();
        let fe: C64 = f.iter().zip(&e).map(|(a, b)| a * b).sum();
        let enorm2: f64 = e.iter().map(|z| z.norm_sqr()).sum();
        if enorm2 < 1e-12 || ee.norm() < 1e-12 * enorm2 {
            continue;
        }
        let coef = fe / ee;
        for (fi, ei) in f.iter_mut().zip(&e) {
            *fi -= coef * ei;
        }
        let m = Mat::outer(&e, &f);
        if m.max_abs_entry() > 1e-12 {
            return Ok(alg.embed(block, m));
        }
    }
    Err(Error::GenerationFailure { what: "nilpotent rank-one element".into(), attempts: GEN_ATTEMPTS })
}

/// Quasinilpotent element: per block a conjugated strictly upper
/// triangular Gaussian, s N s^-1.
///
/// Exactly nilpotent in exact arithmetic; in floating point the computed
/// eigenvalues of a conjugated nilpotent scatter like
/// (eps * cond(s))^(1/n) * |N|, so N is scaled per block to keep the
/// scatter a couple of decades inside the clustering radius.
pub fn random_quasinilpotent(alg: &BlockAlgebra, seed: u64) -> AlgebraElement {
    random_quasinilpotent_rng(alg, &mut rng_from_seed(seed))
}

pub fn random_quasinilpotent_rng(alg: &BlockAlgebra, rng: &mut impl RngCore) -> AlgebraElement {
    let blocks: Vec<Mat> = alg
        .block_dims()
        .iter()
        .map(|&d| {
            if d == 1 {
                return Mat::zeros(1);
            }
            let mut n = Mat::zeros(d);
            for i in 0..d {
                for j in (i + 1)..d {
                    n[(i, j)] = complex_gaussian(rng);
                }
            }
            let (s, s_inv, cond) = conditioned_similarity(rng, d);
            let scatter = (f64::EPSILON * cond * 10.0).powf(1.0 / d as f64);
            let nnorm = n.frobenius_norm().max(1e-300);
            let eta = 1e-9 / (scatter * nnorm);
            s.matmul(&n.scale(C64::new(eta, 0.0))).matmul(&s_inv)
        })
        .collect();
    alg.from_blocks(blocks).expect("generated blocks match the algebra")
}

/// Random invertible block with moderate condition number, plus its
/// inverse and the measured condition.
pub(crate) fn conditioned_similarity(rng: &mut impl RngCore, d: usize) -> (Mat, Mat, f64) {
    for _ in 0..GEN_ATTEMPTS {
        let s = gaussian_matrix(rng, d);
        let sv = s.singular_values();
        if sv[sv.len() - 1] <= 0.0 {
            continue;
        }
        let cond = sv[0] / sv[sv.len() - 1];
        if cond <= 1e3 {
            return (s.clone(), s.inverse(), cond);
        }
    }
    // Condition draws at these sizes fail the cap with vanishing
    // probability; fall back to a unitary similarity.
    let u = haar_unitary(rng, d);
    let uh = u.adjoint();
    (u, uh, 1.0)
}

/// Normal element: blockwise U D U^H with Haar U and Gaussian diagonal.
/// Eigenvalues are exactly the chosen diagonal, which makes these the
/// reference inputs for spectral identities.
pub fn random_normal_rng(alg: &BlockAlgebra, rng: &mut impl RngCore) -> AlgebraElement {
    let blocks: Vec<Mat> = alg
        .block_dims()
        .iter()
        .map(|&d| {
            let u = haar_unitary(rng, d);
            let mut diag = Mat::zeros(d);
            for i in 0..d {
                diag[(i, i)] = complex_gaussian(rng);
            }
            u.matmul(&diag).matmul(&u.adjoint())
        })
        .collect();
    alg.from_blocks(blocks).expect("generated blocks match the algebra")
}

/// Element with prescribed classical rank: a sum of `r` random rank-one
/// elements, resampled until the singular-value rank comes out exactly r.
pub fn random_of_rank_rng(
    alg: &BlockAlgebra,
    r: usize,
    rng: &mut impl RngCore,
    tol: &Tolerances,
) -> Result<AlgebraElement> {
    assert!(r <= alg.total_dim(), "requested rank exceeds the total dimension");
    for _ in 0..GEN_ATTEMPTS {
        let mut x = alg.zero();
        for _ in 0..r {
            x = x.add(&random_rank_one_rng(alg, rng));
        }
        if crate::rank::classical_rank_oracle(&x, tol) == r {
            return Ok(x);
        }
    }
    Err(Error::GenerationFailure { what: format!("element of rank {r}"), attempts: GEN_ATTEMPTS })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::Tolerances;

    #[test]
    fn same_seed_same_element() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        let a = random_element(&alg, 17);
        let b = random_element(&alg, 17);
        assert_eq!(a, b);
        let c = random_element(&alg, 18);
        assert!(a.distance(&c) > 1e-6);
    }

    #[test]
    fn gaussian_moments_are_sane() {
        let mut rng = rng_from_seed(7);
        let n = 20000;
        let mut sum = 0.0;
        let mut sum2 = 0.0;
        for _ in 0..n {
            let z = complex_gaussian(&mut rng);
            sum += z.re + z.im;
            sum2 += z.norm_sqr();
        }
        assert!((sum / n as f64).abs() < 0.02);
        assert!((sum2 / n as f64 - 1.0).abs() < 0.03);
    }

    #[test]
    fn haar_unitary_is_unitary() {
        let mut rng = rng_from_seed(3);
        for n in [1usize, 2, 5, 8] {
            let u = haar_unitary(&mut rng, n);
            let r = u.matmul(&u.adjoint()).sub(&Mat::identity(n)).frobenius_norm();
            assert!(r < 1e-12, "n={n}: {r}");
        }
    }

    #[test]
    fn random_invertible_is_invertible() {
        let alg = BlockAlgebra::new(vec![3, 2]).unwrap();
        let tol = Tolerances::default();
        for seed in 0..50 {
            let x = random_invertible(&alg, seed, &tol).unwrap();
            assert_eq!(x.is_invertible(&tol), Verdict::Invertible);
        }
    }

    #[test]
    fn rank_one_occupies_exactly_one_block() {
        let alg = BlockAlgebra::new(vec![2, 3, 2]).unwrap();
        for seed in 0..50 {
            let x = random_rank_one(&alg, seed);
            let nonzero: Vec<usize> = (0..3)
                .filter(|&i| x.block(i).max_abs_entry() > 0.0)
                .collect();
            assert_eq!(nonzero.len(), 1, "seed {seed}");
        }
    }

    #[test]
    fn nilpotent_rank_one_squares_to_zero() {
        let alg = BlockAlgebra::new(vec![3]).unwrap();
        let mut rng = rng_from_seed(11);
        for _ in 0..50 {
            let x = random_rank_one_nilpotent_rng(&alg, &mut rng).unwrap();
            let sq = x.mul(&x);
            assert!(sq.norm() <= 1e-10 * (1.0 + x.norm().powi(2)), "square {}", sq.norm());
        }
    }

    #[test]
    fn quasinilpotent_spectrum_clusters_to_zero() {
        let tol = Tolerances::default();
        for dims in [vec![2], vec![3], vec![4, 4], vec![8], vec![2, 3, 2]] {
            let alg = BlockAlgebra::new(dims.clone()).unwrap();
            for seed in 0..25 {
                let q = random_quasinilpotent(&alg, seed);
                let rho = q.spectral_radius(&tol).unwrap();
                assert!(rho <= 1e-7, "dims {dims:?} seed {seed}: rho = {rho:.3e}");
                assert!(q.norm() > 0.0 || alg.total_dim() == alg.block_count());
            }
        }
    }

    #[test]
    fn normal_elements_have_prescribed_spectra_shape() {
        let alg = BlockAlgebra::new(vec![4]).unwrap();
        let tol = Tolerances::default();
        let mut rng = rng_from_seed(5);
        let x = random_normal_rng(&alg, &mut rng);
        // x x^H = x^H x for normal x.
        let xh = alg
            .from_blocks(vec![x.block(0).adjoint()])
            .unwrap();
        let comm = x.mul(&xh).distance(&xh.mul(&x));
        assert!(comm < 1e-12);
        let s = x.spectrum(&tol).unwrap();
        assert_eq!(s.multiset_size(), 4);
    }

    #[test]
    fn rank_prescribed_generator_hits_every_rank() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let tol = Tolerances::default();
        let mut rng = rng_from_seed(23);
        for r in 0..=4usize {
            let x = random_of_rank_rng(&alg, r, &mut rng, &tol).unwrap();
            assert_eq!(crate::rank::classical_rank_oracle(&x, &tol), r);
        }
    }
}
