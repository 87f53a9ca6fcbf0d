//! Direct sums of full complex matrix algebras M_{n_1} + ... + M_{n_k},
//! their elements, and elementwise arithmetic.
//!
//! An element is invertible exactly when every block is, and the numerical
//! verdict is three-valued: a block whose smallest singular value falls in
//! the band between `singular_tol * scale` and `ambiguity_band * scale` is
//! neither trusted invertible nor trusted singular.

use crate::error::{Error, Result};
use crate::mat::{C64, Mat};

/// Total dimension cap. Keeps every factorization in comfortably dense
/// territory; larger algebras are out of scope.
pub const MAX_TOTAL_DIM: usize = 64;

/// Shape of a direct sum of full matrix algebras: the list of block sizes.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BlockAlgebra {
    dims: Vec<usize>,
}

impl BlockAlgebra {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Schema("algebra needs at least one block".into()));
        }
        if dims.iter().any(|&d| d == 0) {
            return Err(Error::Schema("block dimensions must be positive".into()));
        }
        let total: usize = dims.iter().sum();
        if total > MAX_TOTAL_DIM {
            return Err(Error::Schema(format!(
                "total dimension {total} exceeds the cap of {MAX_TOTAL_DIM}"
            )));
        }
        Ok(BlockAlgebra { dims })
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block_count(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn describe(&self) -> String {
        let parts: Vec<String> = self.dims.iter().map(|d| d.to_string()).collect();
        parts.join(",")
    }

    pub fn zero(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.dims.iter().map(|&d| Mat::zeros(d)).collect(),
        }
    }

    pub fn identity(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.clone(),
            blocks: self.dims.iter().map(|&d| Mat::identity(d)).collect(),
        }
    }

    /// Element supported on a single block; all other blocks zero.
    pub fn embed(&self, block: usize, m: Mat) -> AlgebraElement {
        assert!(block < self.dims.len(), "block index out of range");
        assert_eq!(m.dim(), self.dims[block], "block dimension mismatch in embed");
        let mut e = self.zero();
        e.blocks[block] = m;
        e
    }

    /// Matrix unit E_ij inside one block, zero elsewhere.
    pub fn matrix_unit(&self, block: usize, i: usize, j: usize) -> AlgebraElement {
        self.embed(block, Mat::unit(self.dims[block], i, j))
    }

    /// Central idempotent: identity on one block, zero elsewhere.
    pub fn central_idempotent(&self, block: usize) -> AlgebraElement {
        self.embed(block, Mat::identity(self.dims[block]))
    }

    pub fn from_blocks(&self, blocks: Vec<Mat>) -> Result<AlgebraElement> {
        if blocks.len() != self.dims.len() {
            return Err(Error::Schema(format!(
                "expected {} blocks, got {}",
                self.dims.len(),
                blocks.len()
            )));
        }
        for (i, (b, &d)) in blocks.iter().zip(&self.dims).enumerate() {
            if b.dim() != d {
                return Err(Error::Schema(format!(
                    "block {i} should be {d}x{d}, got {}x{}",
                    b.dim(),
                    b.dim()
                )));
            }
        }
        Ok(AlgebraElement { algebra: self.clone(), blocks })
    }
}

/// Numerical thresholds shared across the crate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    /// Relative smallest-singular-value threshold below which a block is
    /// declared singular.
    pub singular_tol: f64,
    /// Relative threshold above which a block is declared invertible;
    /// between the two lies the ambiguous band.
    pub ambiguity_band: f64,
    /// Radius used to merge nearby eigenvalues into one spectrum entry.
    pub cluster_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            singular_tol: 1e-12,
            ambiguity_band: 1e-8,
            cluster_tol: 1e-7,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        let ok = self.singular_tol > 0.0
            && self.ambiguity_band >= self.singular_tol
            && self.cluster_tol > 0.0
            && self.singular_tol.is_finite()
            && self.ambiguity_band.is_finite()
            && self.cluster_tol.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::Schema(format!(
                "invalid tolerances: singular_tol {:.3e}, ambiguity_band {:.3e}, cluster_tol {:.3e}",
                self.singular_tol, self.ambiguity_band, self.cluster_tol
            )))
        }
    }
}

/// Three-valued invertibility verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Invertible,
    Singular,
    Ambiguous,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Invertible => write!(f, "invertible"),
            Verdict::Singular => write!(f, "singular"),
            Verdict::Ambiguous => write!(f, "ambiguous"),
        }
    }
}

/// One element of a block algebra: one dense matrix per block.
#[derive(Clone, PartialEq, Debug)]
pub struct AlgebraElement {
    algebra: BlockAlgebra,
    blocks: Vec<Mat>,
}

impl AlgebraElement {
    pub fn algebra(&self) -> &BlockAlgebra {
        &self.algebra
    }

    pub fn block(&self, i: usize) -> &Mat {
        &self.blocks[i]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut Mat {
        &mut self.blocks[i]
    }

    pub fn blocks(&self) -> &[Mat] {
        &self.blocks
    }

    fn same_algebra(&self, rhs: &AlgebraElement, op: &str) {
        assert_eq!(
            self.algebra, rhs.algebra,
            "{op}: operands live in different algebras ({} vs {})",
            self.algebra.describe(),
            rhs.algebra.describe()
        );
    }

    pub fn add(&self, rhs: &AlgebraElement) -> AlgebraElement {
        self.same_algebra(rhs, "add");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, rhs: &AlgebraElement) -> AlgebraElement {
        self.same_algebra(rhs, "sub");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, k: C64) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.scale(k)).collect(),
        }
    }

    pub fn mul(&self, rhs: &AlgebraElement) -> AlgebraElement {
        self.same_algebra(rhs, "mul");
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self
                .blocks
                .iter()
                .zip(&rhs.blocks)
                .map(|(a, b)| a.matmul(b))
                .collect(),
        }
    }

    /// Blockwise transpose (no conjugation). This is the unique linear
    /// anti-automorphism shape that block permutation forms use.
    pub fn transpose_blocks(&self) -> AlgebraElement {
        AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.transpose()).collect(),
        }
    }

    pub fn map_blocks(&self, mut f: impl FnMut(usize, &Mat) -> Mat) -> AlgebraElement {
        let blocks: Vec<Mat> = self
            .blocks
            .iter()
            .enumerate()
            .map(|(i, b)| {
                let out = f(i, b);
                assert_eq!(out.dim(), b.dim(), "map_blocks must preserve block dimensions");
                out
            })
            .collect();
        AlgebraElement { algebra: self.algebra.clone(), blocks }
    }

    /// Frobenius norm over all blocks.
    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.frobenius_norm().powi(2))
            .sum::<f64>()
            .sqrt()
    }

    /// Operator norm: the largest singular value across blocks.
    pub fn operator_norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| b.singular_values()[0])
            .fold(0.0, f64::max)
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.blocks.iter().map(|b| b.max_abs_entry()).fold(0.0, f64::max)
    }

    pub fn distance(&self, rhs: &AlgebraElement) -> f64 {
        self.sub(rhs).norm()
    }

    /// Sum of block traces; the plain matrix trace of the direct sum.
    pub fn diagonal_sum(&self) -> C64 {
        self.blocks.iter().map(|b| b.trace()).sum()
    }

    pub fn check_finite(&self) -> Result<()> {
        for (bi, b) in self.blocks.iter().enumerate() {
            for i in 0..b.dim() {
                for j in 0..b.dim() {
                    let z = b[(i, j)];
                    if !(z.re.is_finite() && z.im.is_finite()) {
                        return Err(Error::NonFinite { block: bi, row: i, col: j });
                    }
                }
            }
        }
        Ok(())
    }

    /// Three-valued invertibility from per-block scaled smallest singular
    /// values. Any decisively singular block makes the element singular;
    /// otherwise any ambiguous block makes the verdict ambiguous.
    pub fn is_invertible(&self, tol: &Tolerances) -> Verdict {
        let mut ambiguous = false;
        for b in &self.blocks {
            let sv = b.singular_values();
            let scale = sv[0];
            if scale == 0.0 {
                return Verdict::Singular;
            }
            let smallest = sv[sv.len() - 1];
            if smallest < tol.singular_tol * scale {
                return Verdict::Singular;
            }
            if smallest <= tol.ambiguity_band * scale {
                ambiguous = true;
            }
        }
        if ambiguous {
            Verdict::Ambiguous
        } else {
            Verdict::Invertible
        }
    }

    /// Blockwise inverse. Refuses anything whose verdict is not cleanly
    /// invertible, so the residual stays controlled.
    pub fn inverse(&self, tol: &Tolerances) -> Result<AlgebraElement> {
        let v = self.is_invertible(tol);
        if v != Verdict::Invertible {
            return Err(Error::NotInvertible { which: "input".into(), verdict: v.to_string() });
        }
        Ok(AlgebraElement {
            algebra: self.algebra.clone(),
            blocks: self.blocks.iter().map(|b| b.inverse()).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn diag(dims: &[usize], entries: &[f64]) -> AlgebraElement {
        let alg = BlockAlgebra::new(dims.to_vec()).unwrap();
        let mut e = alg.zero();
        let mut k = 0;
        for (bi, &d) in dims.iter().enumerate() {
            for i in 0..d {
                e.block_mut(bi)[(i, i)] = C64::new(entries[k], 0.0);
                k += 1;
            }
        }
        e
    }

    #[test]
    fn algebra_constructor_validates() {
        assert!(BlockAlgebra::new(vec![]).is_err());
        assert!(BlockAlgebra::new(vec![2, 0]).is_err());
        assert!(BlockAlgebra::new(vec![65]).is_err());
        assert!(BlockAlgebra::new(vec![32, 32]).is_ok());
        assert!(BlockAlgebra::new(vec![32, 33]).is_err());
    }

    #[test]
    fn identity_is_neutral() {
        let alg = BlockAlgebra::new(vec![2, 3]).unwrap();
        let one = alg.identity();
        let x = diag(&[2, 3], &[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(one.mul(&x), x);
        assert_eq!(x.mul(&one), x);
    }

    #[test]
    fn verdict_bands_on_diagonal_elements() {
        // Smallest/largest singular value ratios squarely inside each band.
        let sing = diag(&[2], &[1.0, 1e-30]);
        assert_eq!(sing.is_invertible(&tol()), Verdict::Singular);

        let amb = diag(&[2], &[1.0, 1e-10]);
        assert_eq!(amb.is_invertible(&tol()), Verdict::Ambiguous);

        let inv = diag(&[2], &[1.0, 0.5]);
        assert_eq!(inv.is_invertible(&tol()), Verdict::Invertible);

        let zero = BlockAlgebra::new(vec![2]).unwrap().zero();
        assert_eq!(zero.is_invertible(&tol()), Verdict::Singular);
    }

    #[test]
    fn singular_block_defeats_invertible_blocks() {
        let x = diag(&[2, 2], &[1.0, 1.0, 1.0, 0.0]);
        assert_eq!(x.is_invertible(&tol()), Verdict::Singular);
    }

    #[test]
    fn inverse_refuses_singular_input() {
        let x = diag(&[2], &[1.0, 0.0]);
        match x.inverse(&tol()) {
            Err(Error::NotInvertible { .. }) => {}
            other => panic!("expected NotInvertible, got {other:?}"),
        }
    }

    #[test]
    fn inverse_residual_is_small() {
        let x = diag(&[2, 1], &[3.0, -2.0, 0.5]);
        let inv = x.inverse(&tol()).unwrap();
        let r = x.mul(&inv).distance(&x.algebra().identity());
        assert!(r < 1e-14);
    }

    #[test]
    #[should_panic(expected = "different algebras")]
    fn mixing_algebras_panics() {
        let a = BlockAlgebra::new(vec![2]).unwrap().identity();
        let b = BlockAlgebra::new(vec![3]).unwrap().identity();
        let _ = a.add(&b);
    }

    #[test]
    fn tolerances_validate() {
        assert!(Tolerances::default().validate().is_ok());
        let bad = Tolerances { singular_tol: 1e-6, ambiguity_band: 1e-9, cluster_tol: 1e-7 };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn non_finite_entries_are_reported_with_position() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mut x = alg.zero();
        x.block_mut(1)[(0, 1)] = C64::new(f64::NAN, 0.0);
        match x.check_finite() {
            Err(Error::NonFinite { block: 1, row: 0, col: 1 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
    }
}
