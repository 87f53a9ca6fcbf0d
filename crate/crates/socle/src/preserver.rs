//! Canonical form of unital invertibility-preserving maps and its
//! reconstruction from black-box evaluations.
//!
//! On a direct sum of full matrix blocks, a linear unital map that
//! preserves invertibility in both directions factors as x -> u J(x):
//! u an invertible element and J a Jordan isomorphism that permutes
//! blocks of equal size, transposing some and conjugating each by a
//! block similarity. `reconstruct` recovers all of that data from
//! nothing but evaluations of the map.

use std::collections::BTreeMap;

use rand_core::RngCore;

use crate::algebra::{AlgebraElement, BlockAlgebra, Tolerances, Verdict};
use crate::error::{Error, Result};
use crate::mat::{C64, Mat};
use crate::random;

/// Per-block action of the Jordan part before the similarity.
/// Serializes as "I" / "T", the wire names used in form JSON.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum MapKind {
    #[serde(rename = "I", alias = "identity")]
    Identity,
    #[serde(rename = "T", alias = "transpose")]
    Transpose,
}

impl std::fmt::Display for MapKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MapKind::Identity => write!(f, "identity"),
            MapKind::Transpose => write!(f, "transpose"),
        }
    }
}

/// x -> u J(x) with J(x)_{perm[i]} = p_i (x_i or x_i^T) p_i^{-1}.
///
/// `block_perm[i]` is the target block of source block i; equal
/// dimensions are required. Similarities are stored per source block
/// with their inverses cached. On 1x1 blocks the transpose flag is
/// canonicalized to `Identity`.
#[derive(Clone, Debug)]
pub struct PreserverForm {
    algebra: BlockAlgebra,
    u: AlgebraElement,
    block_perm: Vec<usize>,
    flags: Vec<MapKind>,
    similarities: Vec<Mat>,
    inverses: Vec<Mat>,
}

impl PreserverForm {
    pub fn new(
        u: AlgebraElement,
        block_perm: Vec<usize>,
        flags: Vec<MapKind>,
        similarities: Vec<Mat>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let algebra = u.algebra().clone();
        let k = algebra.block_count();
        if block_perm.len() != k || flags.len() != k || similarities.len() != k {
            return Err(Error::InvalidForm(format!(
                "expected {k} permutation entries, flags, and similarities (got {}, {}, {})",
                block_perm.len(),
                flags.len(),
                similarities.len()
            )));
        }
        let mut seen = vec![false; k];
        for (i, &t) in block_perm.iter().enumerate() {
            if t >= k {
                return Err(Error::InvalidForm(format!("permutation target {t} out of range")));
            }
            if seen[t] {
                return Err(Error::InvalidForm(format!("permutation hits block {t} twice")));
            }
            seen[t] = true;
            if algebra.block_dims()[t] != algebra.block_dims()[i] {
                return Err(Error::InvalidForm(format!(
                    "permutation sends block {i} (dim {}) to block {t} (dim {})",
                    algebra.block_dims()[i],
                    algebra.block_dims()[t]
                )));
            }
        }
        u.check_finite()?;
        if u.is_invertible(tol) != Verdict::Invertible {
            return Err(Error::InvalidForm("unit factor u is not invertible".into()));
        }
        let mut flags = flags;
        let mut inverses = Vec::with_capacity(k);
        for (i, p) in similarities.iter().enumerate() {
            if p.dim() != algebra.block_dims()[i] {
                return Err(Error::InvalidForm(format!(
                    "similarity {i} has dimension {} but block {i} has dimension {}",
                    p.dim(),
                    algebra.block_dims()[i]
                )));
            }
            let sv = p.singular_values();
            if sv[sv.len() - 1] <= 1e-12 * sv[0].max(1.0) {
                return Err(Error::InvalidForm(format!("similarity {i} is numerically singular")));
            }
            if algebra.block_dims()[i] == 1 {
                flags[i] = MapKind::Identity;
            }
            inverses.push(p.inverse());
        }
        Ok(PreserverForm { algebra, u, block_perm, flags, similarities, inverses })
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn unit(&self) -> &AlgebraElement {
        &self.u
    }

    pub fn block_perm(&self) -> &[usize] {
        &self.block_perm
    }

    pub fn flags(&self) -> &[MapKind] {
        &self.flags
    }

    pub fn similarities(&self) -> &[Mat] {
        &self.similarities
    }

    /// Jordan part alone: blocks permuted, optionally transposed, then
    /// conjugated. Multiplicative or anti-multiplicative per block.
    pub fn jordan(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = self.algebra.zero();
        for (i, &t) in self.block_perm.iter().enumerate() {
            let xi = match self.flags[i] {
                MapKind::Identity => x.block(i).clone(),
                MapKind::Transpose => x.block(i).transpose(),
            };
            *out.block_mut(t) = self.similarities[i].matmul(&xi).matmul(&self.inverses[i]);
        }
        out
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        self.u.mul(&self.jordan(x))
    }

    /// Structural equality up to the scalar gauge of each similarity.
    /// u is compared exactly (relative tol), permutation and flags
    /// literally, similarities up to one complex scalar per block.
    pub fn matches(&self, other: &PreserverForm, u_tol: f64, sim_tol: f64) -> bool {
        self.block_perm == other.block_perm
            && self.flags == other.flags
            && self.u.distance(&other.u) <= u_tol * (1.0 + self.u.norm())
            && self
                .similarities
                .iter()
                .zip(&other.similarities)
                .all(|(p, q)| scalar_aligned_distance(p, q) <= sim_tol)
    }
}

/// min over complex c of |p - c q|_F / |p|_F.
pub fn scalar_aligned_distance(p: &Mat, q: &Mat) -> f64 {
    let mut qp = C64::new(0.0, 0.0);
    let mut qq = 0.0;
    for r in 0..p.dim() {
        for c in 0..p.dim() {
            qp += q[(r, c)].conj() * p[(r, c)];
            qq += q[(r, c)].norm_sqr();
        }
    }
    let pn = p.frobenius_norm();
    if qq == 0.0 {
        return if pn == 0.0 { 0.0 } else { 1.0 };
    }
    let c = qp / qq;
    let mut diff = 0.0;
    for r in 0..p.dim() {
        for col in 0..p.dim() {
            diff += (p[(r, col)] - c * q[(r, col)]).norm_sqr();
        }
    }
    diff.sqrt() / pn.max(1e-300)
}

/// Random form with moderate conditioning everywhere: Haar-like unit
/// factor, dimension-preserving permutation, independent flags, and
/// similarities with condition below 1e3.
pub fn random_form(alg: &BlockAlgebra, seed: u64, tol: &Tolerances) -> Result<PreserverForm> {
    let mut rng = random::rng_from_seed(seed);
    let u = random::random_well_conditioned_rng(alg, &mut rng, tol, 1e4)?;
    let block_perm = random_dim_preserving_perm(alg.block_dims(), &mut rng);
    let flags: Vec<MapKind> = alg
        .block_dims()
        .iter()
        .map(|&d| {
            if d >= 2 && random::below(&mut rng, 2) == 1 {
                MapKind::Transpose
            } else {
                MapKind::Identity
            }
        })
        .collect();
    let similarities: Vec<Mat> = alg
        .block_dims()
        .iter()
        .map(|&d| random::conditioned_similarity(&mut rng, d).0)
        .collect();
    PreserverForm::new(u, block_perm, flags, similarities, tol)
}

fn random_dim_preserving_perm(dims: &[usize], rng: &mut impl RngCore) -> Vec<usize> {
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &d) in dims.iter().enumerate() {
        groups.entry(d).or_default().push(i);
    }
    let mut perm = vec![0usize; dims.len()];
    for idxs in groups.values() {
        let mut targets = idxs.clone();
        for i in (1..targets.len()).rev() {
            targets.swap(i, random::below(rng, i + 1));
        }
        for (&src, &dst) in idxs.iter().zip(&targets) {
            perm[src] = dst;
        }
    }
    perm
}

/// A map given only by evaluation. Domain and codomain are the same
/// block algebra.
pub struct BlackBoxMap {
    algebra: BlockAlgebra,
    eval: Box<dyn Fn(&AlgebraElement) -> AlgebraElement + Send + Sync>,
}

impl BlackBoxMap {
    pub fn new(
        algebra: BlockAlgebra,
        eval: impl Fn(&AlgebraElement) -> AlgebraElement + Send + Sync + 'static,
    ) -> Self {
        BlackBoxMap { algebra, eval: Box::new(eval) }
    }

    pub fn from_form(form: &PreserverForm) -> Self {
        let form = form.clone();
        BlackBoxMap::new(form.algebra().clone(), move |x| form.apply(x))
    }

    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn apply(&self, x: &AlgebraElement) -> AlgebraElement {
        assert!(
            x.algebra().block_dims() == self.algebra.block_dims(),
            "input lives in a different algebra than the map"
        );
        (self.eval)(x)
    }
}

impl std::fmt::Debug for BlackBoxMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BlackBoxMap on {}", self.algebra.describe())
    }
}

const STRUCTURE_TOL: f64 = 1e-6;

/// Recover the canonical form of a black-box preserver.
///
/// Pipeline: u = phi(1) (must be invertible), J = u^{-1} phi, block
/// permutation from the images of the central idempotents, per-block
/// identity/transpose classification by multiplicativity residuals on
/// matrix units, similarity recovery from rank-one images, and a final
/// agreement check of the synthesized form against the map on random
/// probes. Every failure mode names the step that broke.
pub fn reconstruct(map: &BlackBoxMap, tol: &Tolerances, seed: u64) -> Result<PreserverForm> {
    let alg = map.algebra().clone();
    let mut rng = random::rng_from_seed(seed);

    let u = map.apply(&alg.identity());
    u.check_finite()?;
    if u.is_invertible(tol) != Verdict::Invertible {
        let scale = u.operator_norm();
        let smin = u
            .blocks()
            .iter()
            .map(|b| {
                let sv = b.singular_values();
                sv[sv.len() - 1]
            })
            .fold(f64::INFINITY, f64::min);
        return Err(Error::NotUnital { residual: smin / (1.0 + scale) });
    }
    let uinv = u.inverse(tol)?;
    let jordan = |x: &AlgebraElement| -> AlgebraElement { uinv.mul(&map.apply(x)) };

    // Block permutation: J sends the i-th central idempotent to exactly
    // one target identity block.
    let k = alg.block_count();
    let mut block_perm = vec![0usize; k];
    let mut taken = vec![false; k];
    for i in 0..k {
        let w = jordan(&alg.central_idempotent(i));
        w.check_finite()?;
        let t = (0..k)
            .max_by(|&a, &b| {
                w.block(a)
                    .frobenius_norm()
                    .partial_cmp(&w.block(b).frobenius_norm())
                    .unwrap()
            })
            .expect("algebra has blocks");
        let on_target = w.block(t).sub(&Mat::identity(w.block(t).dim())).frobenius_norm();
        let off_target: f64 = (0..k)
            .filter(|&s| s != t)
            .map(|s| w.block(s).frobenius_norm())
            .fold(0.0, f64::max);
        if on_target > STRUCTURE_TOL || off_target > STRUCTURE_TOL {
            return Err(Error::PermutationAmbiguous(format!(
                "image of central idempotent {i} is not a central idempotent \
                 (distance {on_target:.3e} from identity on block {t}, \
                 {off_target:.3e} of mass elsewhere)"
            )));
        }
        if alg.block_dims()[t] != alg.block_dims()[i] {
            return Err(Error::PermutationAmbiguous(format!(
                "central idempotent {i} (dim {}) lands on block {t} (dim {})",
                alg.block_dims()[i],
                alg.block_dims()[t]
            )));
        }
        if taken[t] {
            return Err(Error::PermutationAmbiguous(format!(
                "two central idempotents land on block {t}"
            )));
        }
        taken[t] = true;
        block_perm[i] = t;
    }

    let mut flags = Vec::with_capacity(k);
    let mut similarities = Vec::with_capacity(k);
    for i in 0..k {
        let t = block_perm[i];
        let n = alg.block_dims()[i];
        let restricted = |m: &Mat| -> Mat { jordan(&alg.embed(i, m.clone())).block(t).clone() };
        if n == 1 {
            flags.push(MapKind::Identity);
            similarities.push(Mat::identity(1));
            continue;
        }

        // Multiplicative vs anti-multiplicative on probe pairs. Exactly
        // one residual vanishes for a genuine Jordan block map; both
        // large means the map is broken.
        let mut probe_pairs: Vec<(Mat, Mat)> = vec![
            (Mat::unit(n, 0, 1), Mat::unit(n, 1, 0)),
            (Mat::unit(n, 0, 0), Mat::unit(n, 0, 1)),
            (Mat::unit(n, 0, 1), Mat::unit(n, 1, 1)),
        ];
        for _ in 0..2 {
            probe_pairs
                .push((random::gaussian_matrix(&mut rng, n), random::gaussian_matrix(&mut rng, n)));
        }
        let mut mult = 0.0f64;
        let mut anti = 0.0f64;
        for (x, y) in &probe_pairs {
            let mx = restricted(x);
            let my = restricted(y);
            let mxy = restricted(&x.matmul(y));
            let scale = (1.0 + mx.frobenius_norm()) * (1.0 + my.frobenius_norm());
            mult = mult.max(mxy.sub(&mx.matmul(&my)).frobenius_norm() / scale);
            anti = anti.max(mxy.sub(&my.matmul(&mx)).frobenius_norm() / scale);
        }
        let flag = if mult <= STRUCTURE_TOL && mult <= anti {
            MapKind::Identity
        } else if anti <= STRUCTURE_TOL {
            MapKind::Transpose
        } else {
            return Err(Error::NeitherMultiplicativeNorAnti { block: i, mult, anti });
        };
        let normalized = |m: &Mat| -> Mat {
            match flag {
                MapKind::Identity => restricted(m),
                MapKind::Transpose => restricted(&m.transpose()),
            }
        };

        // N(E_kj) v recovers column k of p up to one global scalar,
        // where v is any nonzero column of N(E_jj) = (p e_j)(e_j^T p^-1).
        let diag_images: Vec<Mat> = (0..n).map(|j| normalized(&Mat::unit(n, j, j))).collect();
        let j = (0..n)
            .max_by(|&a, &b| {
                diag_images[a]
                    .frobenius_norm()
                    .partial_cmp(&diag_images[b].frobenius_norm())
                    .unwrap()
            })
            .unwrap();
        let vcol = (0..n)
            .max_by(|&a, &b| {
                let na: f64 = (0..n).map(|r| diag_images[j][(r, a)].norm_sqr()).sum();
                let nb: f64 = (0..n).map(|r| diag_images[j][(r, b)].norm_sqr()).sum();
                na.partial_cmp(&nb).unwrap()
            })
            .unwrap();
        let v = diag_images[j].column(vcol);
        let mut p = Mat::zeros(n);
        for kcol in 0..n {
            let col = if kcol == j { v.clone() } else { normalized(&Mat::unit(n, kcol, j)).matvec(&v) };
            for r in 0..n {
                p[(r, kcol)] = col[r];
            }
        }
        // Gauge: largest entry becomes 1, fixing scale and phase.
        let mut best = (0usize, 0usize, 0.0f64);
        for r in 0..n {
            for c in 0..n {
                if p[(r, c)].norm() > best.2 {
                    best = (r, c, p[(r, c)].norm());
                }
            }
        }
        let sv = p.singular_values();
        if best.2 == 0.0 || sv[sv.len() - 1] <= 1e-10 * sv[0] {
            return Err(Error::SimilarityInconsistent {
                block: i,
                residual: if sv[0] > 0.0 { sv[sv.len() - 1] / sv[0] } else { 0.0 },
            });
        }
        let p = p.scale(C64::new(1.0, 0.0) / p[(best.0, best.1)]);
        let pinv = p.inverse();
        let mut residual = 0.0f64;
        let mut probes: Vec<Mat> =
            vec![Mat::unit(n, 0, 1), Mat::unit(n, n - 1, 0), Mat::identity(n)];
        probes.push(random::gaussian_matrix(&mut rng, n));
        for m in &probes {
            let reference = p.matmul(m).matmul(&pinv);
            let r = normalized(m).sub(&reference).frobenius_norm()
                / (1.0 + reference.frobenius_norm());
            residual = residual.max(r);
        }
        if residual > STRUCTURE_TOL {
            return Err(Error::SimilarityInconsistent { block: i, residual });
        }
        flags.push(flag);
        similarities.push(p);
    }

    let form = PreserverForm::new(u, block_perm, flags, similarities, tol)?;

    // Linearity was never assumed; the synthesized form must reproduce
    // the map on fresh probes.
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let x = random::random_element_rng(&alg, &mut rng);
        let expect = map.apply(&x);
        let got = form.apply(&x);
        worst = worst.max(got.distance(&expect) / (1.0 + expect.norm()));
    }
    if worst > STRUCTURE_TOL {
        return Err(Error::ReassemblyMismatch { residual: worst });
    }
    Ok(form)
}

/// Reconstruct from the first map, then demand the second agrees with
/// the synthesized form on random probes. The pencil condition forces
/// the two maps to coincide, so disagreement is a structural failure,
/// not a numerical one.
pub fn reconstruct_pair(
    phi: &BlackBoxMap,
    psi: &BlackBoxMap,
    tol: &Tolerances,
    seed: u64,
) -> Result<PreserverForm> {
    let form = reconstruct(phi, tol, seed)?;
    let mut rng = random::rng_from_seed(seed ^ 0x9e3779b97f4a7c15);
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let x = random::random_element_rng(phi.algebra(), &mut rng);
        let expect = form.apply(&x);
        let got = psi.apply(&x);
        worst = worst.max(got.distance(&expect) / (1.0 + expect.norm()));
    }
    if worst > STRUCTURE_TOL {
        return Err(Error::SecondMapDisagrees { residual: worst, tol: STRUCTURE_TOL });
    }
    Ok(form)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::rng_from_seed;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn form_validation_rejects_bad_data() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        let u = alg.identity();
        let p2 = Mat::identity(2);
        let p3 = Mat::identity(3);
        // Dimension-violating permutation.
        let err = PreserverForm::new(
            u.clone(),
            vec![1, 0],
            vec![MapKind::Identity, MapKind::Identity],
            vec![p2.clone(), p3.clone()],
            &tol(),
        );
        assert!(matches!(err, Err(Error::InvalidForm(_))));
        // Singular unit factor.
        let err = PreserverForm::new(
            alg.zero(),
            vec![0, 1],
            vec![MapKind::Identity, MapKind::Identity],
            vec![p2.clone(), p3.clone()],
            &tol(),
        );
        assert!(matches!(err, Err(Error::InvalidForm(_))));
        // Singular similarity.
        let err = PreserverForm::new(
            u,
            vec![0, 1],
            vec![MapKind::Identity, MapKind::Identity],
            vec![Mat::zeros(2), p3],
            &tol(),
        );
        assert!(matches!(err, Err(Error::InvalidForm(_))));
    }

    #[test]
    fn jordan_part_is_unital_and_spectrum_preserving() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let form = random_form(&alg, 9, &tol()).unwrap();
        let one = alg.identity();
        assert!(form.jordan(&one).distance(&one) < 1e-10);
        let mut rng = rng_from_seed(10);
        for _ in 0..10 {
            let x = crate::random::random_element_rng(&alg, &mut rng);
            let jx = form.jordan(&x);
            let sx = x.spectrum(&tol()).unwrap();
            let sjx = jx.spectrum(&tol()).unwrap();
            assert!(sx.matches(&sjx, 1e-7), "jordan part moved the spectrum");
        }
    }

    #[test]
    fn scalar_alignment_ignores_gauge() {
        let mut rng = rng_from_seed(4);
        let p = crate::random::gaussian_matrix(&mut rng, 3);
        let q = p.scale(C64::new(-0.3, 1.7));
        assert!(scalar_aligned_distance(&p, &q) < 1e-12);
        let r = crate::random::gaussian_matrix(&mut rng, 3);
        assert!(scalar_aligned_distance(&p, &r) > 1e-3);
    }

    #[test]
    fn roundtrip_recovers_every_component() {
        for dims in [vec![2], vec![2, 2], vec![2, 3, 2], vec![1, 2]] {
            let alg = BlockAlgebra::new(dims.clone()).unwrap();
            for seed in 0..8u64 {
                let form = random_form(&alg, seed, &tol()).unwrap();
                let map = BlackBoxMap::from_form(&form);
                let rec = reconstruct(&map, &tol(), seed + 1000).unwrap();
                assert_eq!(rec.block_perm(), form.block_perm(), "dims {dims:?} seed {seed}");
                assert_eq!(rec.flags(), form.flags(), "dims {dims:?} seed {seed}");
                assert!(
                    rec.unit().distance(form.unit()) <= 1e-10 * (1.0 + form.unit().norm()),
                    "dims {dims:?} seed {seed}: unit factor off"
                );
                for (p, q) in rec.similarities().iter().zip(form.similarities()) {
                    assert!(
                        scalar_aligned_distance(p, q) <= 1e-7,
                        "dims {dims:?} seed {seed}: similarity off by {}",
                        scalar_aligned_distance(p, q)
                    );
                }
                let mut rng = rng_from_seed(seed ^ 77);
                for _ in 0..5 {
                    let x = crate::random::random_element_rng(&alg, &mut rng);
                    let d = rec.apply(&x).distance(&map.apply(&x));
                    assert!(d <= 1e-8 * (1.0 + x.norm()), "dims {dims:?} seed {seed}: residual {d:.3e}");
                }
            }
        }
    }

    #[test]
    fn transpose_and_swap_are_recovered_literally() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mut rng = rng_from_seed(21);
        let u = crate::random::random_well_conditioned_rng(&alg, &mut rng, &tol(), 1e3).unwrap();
        let p0 = crate::random::conditioned_similarity(&mut rng, 2).0;
        let p1 = crate::random::conditioned_similarity(&mut rng, 2).0;
        let form = PreserverForm::new(
            u,
            vec![1, 0],
            vec![MapKind::Transpose, MapKind::Identity],
            vec![p0, p1],
            &tol(),
        )
        .unwrap();
        let rec = reconstruct(&BlackBoxMap::from_form(&form), &tol(), 3).unwrap();
        assert_eq!(rec.block_perm(), &[1, 0]);
        assert_eq!(rec.flags(), &[MapKind::Transpose, MapKind::Identity]);
    }

    #[test]
    fn non_unital_map_is_rejected() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let map = BlackBoxMap::new(alg.clone(), |x| x.scale(C64::new(0.0, 0.0)));
        match reconstruct(&map, &tol(), 1) {
            Err(Error::NotUnital { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn additive_shift_breaks_the_permutation_step() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let shift = crate::random::random_element(&alg, 5).scale(C64::new(0.1, 0.0));
        let map = BlackBoxMap::new(alg.clone(), move |x| x.add(&shift));
        match reconstruct(&map, &tol(), 1) {
            Err(Error::PermutationAmbiguous(_)) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn quadratic_corruption_breaks_multiplicativity() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let map =
            BlackBoxMap::new(alg.clone(), |x| x.add(&x.mul(x).scale(C64::new(0.1, 0.0))));
        match reconstruct(&map, &tol(), 1) {
            Err(Error::NeitherMultiplicativeNorAnti { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }

    #[test]
    fn pair_reconstruction_demands_agreement() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let form = random_form(&alg, 31, &tol()).unwrap();
        let phi = BlackBoxMap::from_form(&form);
        let psi_good = BlackBoxMap::from_form(&form);
        assert!(reconstruct_pair(&phi, &psi_good, &tol(), 2).is_ok());
        let psi_bad = BlackBoxMap::new(alg.clone(), {
            let form = form.clone();
            move |x| form.apply(&x.transpose_blocks())
        });
        match reconstruct_pair(&phi, &psi_bad, &tol(), 2) {
            Err(Error::SecondMapDisagrees { .. }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
