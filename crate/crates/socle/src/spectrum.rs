//! Spectra of block algebra elements.
//!
//! The spectrum of a direct sum is the union of the block spectra, counted
//! with algebraic multiplicity. Computed eigenvalues closer than
//! `cluster_tol` are merged into a single entry whose value is the
//! multiplicity-weighted mean, so multiset sums (and hence traces) are
//! preserved exactly by the merge.

use crate::algebra::{AlgebraElement, Tolerances};
use crate::error::{Error, Result};
use crate::mat::C64;

/// Clustered eigenvalue multiset, sorted by (re, im).
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    entries: Vec<(C64, usize)>,
    cluster_tol: f64,
}

impl Spectrum {
    /// Cluster a raw list of eigenvalues. Merging is closest-pair-first,
    /// so the final entries are pairwise separated by more than the radius.
    pub fn from_raw(mut raw: Vec<C64>, cluster_tol: f64) -> Spectrum {
        raw.sort_by(|a, b| (a.re, a.im).partial_cmp(&(b.re, b.im)).unwrap());
        let mut entries: Vec<(C64, usize)> = raw.into_iter().map(|z| (z, 1usize)).collect();
        loop {
            let mut best: Option<(usize, usize, f64)> = None;
            for i in 0..entries.len() {
                for j in i + 1..entries.len() {
                    let d = (entries[i].0 - entries[j].0).norm();
                    if d <= cluster_tol && best.map_or(true, |(_, _, bd)| d < bd) {
                        best = Some((i, j, d));
                    }
                }
            }
            match best {
                None => break,
                Some((i, j, _)) => {
                    let (zi, mi) = entries[i];
                    let (zj, mj) = entries[j];
                    let m = mi + mj;
                    let z = (zi * mi as f64 + zj * mj as f64) / m as f64;
                    entries[i] = (z, m);
                    entries.remove(j);
                }
            }
        }
        entries.sort_by(|a, b| (a.0.re, a.0.im).partial_cmp(&(b.0.re, b.0.im)).unwrap());
        Spectrum { entries, cluster_tol }
    }

    /// Distinct eigenvalues with multiplicities, sorted by (re, im).
    pub fn entries(&self) -> &[(C64, usize)] {
        &self.entries
    }

    pub fn cluster_tol(&self) -> f64 {
        self.cluster_tol
    }

    /// Number of distinct eigenvalues.
    pub fn distinct_count(&self) -> usize {
        self.entries.len()
    }

    /// Total multiplicity; equals the total dimension of the algebra.
    pub fn multiset_size(&self) -> usize {
        self.entries.iter().map(|&(_, m)| m).sum()
    }

    /// Entries whose modulus exceeds the clustering radius; the zero
    /// cluster is dropped.
    pub fn nonzero_entries(&self) -> Vec<(C64, usize)> {
        self.entries
            .iter()
            .copied()
            .filter(|&(z, _)| z.norm() > self.cluster_tol)
            .collect()
    }

    pub fn nonzero_count(&self) -> usize {
        self.nonzero_entries().len()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.entries.iter().map(|&(z, _)| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_modulus(&self) -> f64 {
        self.entries
            .iter()
            .map(|&(z, _)| z.norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Multiplicity-weighted sum; survives clustering unchanged because
    /// merged entries store the weighted mean.
    pub fn weighted_sum(&self) -> C64 {
        self.entries
            .iter()
            .map(|&(z, m)| z * m as f64)
            .sum()
    }

    /// Multiset equality up to a matching tolerance: both spectra sorted
    /// canonically, compared entrywise with multiplicities.
    pub fn matches(&self, other: &Spectrum, tol: f64) -> bool {
        let a = self.expand();
        let b = other.expand();
        if a.len() != b.len() {
            return false;
        }
        a.iter().zip(&b).all(|(x, y)| (x - y).norm() <= tol)
    }

    /// Expanded multiset in canonical order (each value repeated by its
    /// multiplicity).
    pub fn expand(&self) -> Vec<C64> {
        let mut out = Vec::with_capacity(self.multiset_size());
        for &(z, m) in &self.entries {
            for _ in 0..m {
                out.push(z);
            }
        }
        out
    }
}

/// Eigenvalue multiset of an element: union of block spectra, clustered.
pub fn spectrum(a: &AlgebraElement, tol: &Tolerances) -> Result<Spectrum> {
    let mut raw = Vec::with_capacity(a.algebra().total_dim());
    for (bi, b) in a.blocks().iter().enumerate() {
        let ev = b
            .eigenvalues()
            .map_err(|_| Error::ConvergenceFailure { block: bi })?;
        raw.extend(ev);
    }
    Ok(Spectrum::from_raw(raw, tol.cluster_tol))
}

pub fn spectral_radius(a: &AlgebraElement, tol: &Tolerances) -> Result<f64> {
    Ok(spectrum(a, tol)?.spectral_radius())
}

/// Distinct nonzero eigenvalues (zero cluster removed).
pub fn nonzero_spectrum(a: &AlgebraElement, tol: &Tolerances) -> Result<Vec<(C64, usize)>> {
    Ok(spectrum(a, tol)?.nonzero_entries())
}

impl AlgebraElement {
    pub fn spectrum(&self, tol: &Tolerances) -> Result<Spectrum> {
        spectrum(self, tol)
    }

    pub fn spectral_radius(&self, tol: &Tolerances) -> Result<f64> {
        spectral_radius(self, tol)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::BlockAlgebra;
    use crate::mat::Mat;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn block_spectra_take_union_with_multiplicity() {
        let alg = BlockAlgebra::new(vec![2, 2]).unwrap();
        let mut x = alg.zero();
        x.block_mut(0)[(0, 0)] = c(1.0, 0.0);
        x.block_mut(0)[(1, 1)] = c(2.0, 0.0);
        x.block_mut(1)[(0, 0)] = c(2.0, 0.0);
        x.block_mut(1)[(1, 1)] = c(3.0, 0.0);
        let s = x.spectrum(&Tolerances::default()).unwrap();
        assert_eq!(s.multiset_size(), 4);
        let got: Vec<(f64, usize)> = s.entries().iter().map(|&(z, m)| (z.re, m)).collect();
        assert_eq!(got, vec![(1.0, 1), (2.0, 2), (3.0, 1)]);
    }

    #[test]
    fn clustering_preserves_weighted_sum() {
        let s = Spectrum::from_raw(
            vec![c(1.0, 0.0), c(1.0 + 1e-8, 0.0), c(5.0, 0.0)],
            1e-7,
        );
        assert_eq!(s.distinct_count(), 2);
        let total = s.weighted_sum();
        assert!((total - c(7.0 + 1e-8, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn chained_clusters_merge_and_stay_separated() {
        // Three values, each within tol of its neighbor but the ends are
        // not within tol of each other; closest-pair merging still leaves
        // entries separated by more than the radius.
        let s = Spectrum::from_raw(
            vec![c(0.0, 0.0), c(0.9e-7, 0.0), c(1.8e-7, 0.0)],
            1e-7,
        );
        for i in 0..s.entries().len() {
            for j in i + 1..s.entries().len() {
                let d = (s.entries()[i].0 - s.entries()[j].0).norm();
                assert!(d > 1e-7, "entries {i},{j} only {d} apart");
            }
        }
        assert_eq!(s.multiset_size(), 3);
    }

    #[test]
    fn nonzero_spectrum_drops_the_zero_cluster() {
        let alg = BlockAlgebra::new(vec![3]).unwrap();
        let mut x = alg.zero();
        x.block_mut(0)[(0, 0)] = c(1.0, 0.0);
        x.block_mut(0)[(1, 1)] = c(2.0, 0.0);
        let nz = nonzero_spectrum(&x, &Tolerances::default()).unwrap();
        assert_eq!(nz.len(), 2);
        assert!(nz.iter().all(|&(z, _)| z.norm() > 1e-7));
    }

    #[test]
    fn spectral_radius_of_shifted_identity() {
        let alg = BlockAlgebra::new(vec![2, 1]).unwrap();
        let x = alg.identity().scale(c(0.0, -3.0));
        let r = x.spectral_radius(&Tolerances::default()).unwrap();
        assert!((r - 3.0).abs() < 1e-12);
    }

    #[test]
    fn rotation_block_has_conjugate_pair_spectrum() {
        let alg = BlockAlgebra::new(vec![2]).unwrap();
        let rot = Mat::from_rows(&[
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]);
        let x = alg.embed(0, rot);
        let s = x.spectrum(&Tolerances::default()).unwrap();
        let vals = s.expand();
        assert_eq!(vals.len(), 2);
        assert!((vals[0] - c(0.0, -1.0)).norm() < 1e-10);
        assert!((vals[1] - c(0.0, 1.0)).norm() < 1e-10);
    }
}
