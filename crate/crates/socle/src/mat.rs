//! Dense square complex matrices and the factorizations the rest of the
//! crate is built on: LU with partial pivoting, one-sided Jacobi singular
//! values, and a shifted-QR eigensolver over a Hessenberg reduction.
//!
//! Everything here is deterministic: identical inputs produce identical
//! bits, which the reproducibility guarantees upstream depend on.

use num_complex::Complex64;

pub type C64 = Complex64;

const EPS: f64 = f64::EPSILON;

/// Square, row-major, heap-allocated complex matrix.
#[derive(Clone, PartialEq)]
pub struct Mat {
    n: usize,
    a: Vec<C64>,
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat({}x{})", self.n, self.n)?;
        for i in 0..self.n {
            write!(f, " [")?;
            for j in 0..self.n {
                let z = self[(i, j)];
                write!(f, " {:.4}{:+.4}i", z.re, z.im)?;
            }
            writeln!(f, " ]")?;
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.a[i * self.n + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.a[i * self.n + j]
    }
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, a: vec![C64::new(0.0, 0.0); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Matrix unit E_ij: 1 at (i,j), 0 elsewhere.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zeros(n);
        m[(i, j)] = C64::new(1.0, 0.0);
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "rows must form a square matrix");
        Mat::from_fn(n, |i, j| rows[i][j])
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[C64] {
        &self.a
    }

    pub fn is_finite(&self) -> bool {
        self.a.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Rank-one outer product e * f^T (no conjugation on f).
    pub fn outer(e: &[C64], f: &[C64]) -> Self {
        assert_eq!(e.len(), f.len(), "outer product needs equal-length vectors");
        Mat::from_fn(e.len(), |i, j| e[i] * f[j])
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Mat::from_fn(self.n, |i, j| self[(j, i)].conj())
    }

    pub fn add(&self, rhs: &Mat) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in add");
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&rhs.a) {
            *x += y;
        }
        out
    }

    pub fn sub(&self, rhs: &Mat) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in sub");
        let mut out = self.clone();
        for (x, y) in out.a.iter_mut().zip(&rhs.a) {
            *x -= y;
        }
        out
    }

    pub fn scale(&self, k: C64) -> Self {
        let mut out = self.clone();
        for x in out.a.iter_mut() {
            *x *= k;
        }
        out
    }

    pub fn matmul(&self, rhs: &Mat) -> Self {
        assert_eq!(self.n, rhs.n, "dimension mismatch in matmul");
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self[(i, k)];
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += aik * rhs[(k, j)];
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.n, v.len(), "dimension mismatch in matvec");
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self[(i, j)] * v[j]).sum())
            .collect()
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.a.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    pub fn lu(&self) -> Lu {
        Lu::new(self)
    }

    pub fn det(&self) -> C64 {
        self.lu().det()
    }

    /// Inverse via LU. Caller decides whether the matrix is fit to invert;
    /// near-singular inputs produce large entries, not an error.
    pub fn inverse(&self) -> Mat {
        self.lu().solve_mat(&Mat::identity(self.n))
    }

    /// Singular values, descending. One-sided Jacobi on the columns, so
    /// tiny singular values are recovered without squaring the matrix.
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n;
        if n == 0 {
            return vec![];
        }
        let mut b = self.clone();
        let mut rotated = true;
        let mut sweeps = 0;
        while rotated && sweeps < 60 {
            rotated = false;
            sweeps += 1;
            for p in 0..n {
                for q in (p + 1)..n {
                    let mut gpp = 0.0;
                    let mut gqq = 0.0;
                    let mut gpq = C64::new(0.0, 0.0);
                    for i in 0..n {
                        let u = b[(i, p)];
                        let v = b[(i, q)];
                        gpp += u.norm_sqr();
                        gqq += v.norm_sqr();
                        gpq += u.conj() * v;
                    }
                    let off = gpq.norm();
                    if off <= 1e2 * EPS * (gpp * gqq).sqrt() || off == 0.0 {
                        continue;
                    }
                    rotated = true;
                    // Phase-align the Gram off-diagonal, then a real Jacobi
                    // rotation annihilates it.
                    let phase = gpq / off;
                    let tau = (gqq - gpp) / (2.0 * off);
                    let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    let ph = phase.conj();
                    for i in 0..n {
                        let u = b[(i, p)];
                        let v = b[(i, q)];
                        b[(i, p)] = u * c - v * ph * s;
                        b[(i, q)] = u * s + v * ph * c;
                    }
                }
            }
        }
        let mut sv: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| b[(i, j)].norm_sqr()).sum::<f64>().sqrt())
            .collect();
        sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
        sv
    }

    /// sigma_max / sigma_min, infinite for singular input.
    pub fn condition_number(&self) -> f64 {
        let sv = self.singular_values();
        match (sv.first(), sv.last()) {
            (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
            (Some(&hi), _) if hi == 0.0 => 1.0,
            _ => f64::INFINITY,
        }
    }

    /// Householder reduction to upper Hessenberg form, returning (H, U)
    /// with A = U H U^H and U unitary.
    pub fn hessenberg(&self) -> (Mat, Mat) {
        let n = self.n;
        let mut h = self.clone();
        let mut u = Mat::identity(n);
        if n < 3 {
            return (h, u);
        }
        for k in 0..n - 2 {
            // Householder vector for column k below the subdiagonal.
            let mut x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
            let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            if xnorm <= EPS * h.frobenius_norm() {
                continue;
            }
            let x0 = x[0];
            let alpha = if x0.norm() == 0.0 {
                C64::new(-xnorm, 0.0)
            } else {
                -(x0 / x0.norm()) * xnorm
            };
            x[0] -= alpha;
            let vnorm2: f64 = x.iter().map(|z| z.norm_sqr()).sum();
            if vnorm2 == 0.0 {
                continue;
            }
            let beta = 2.0 / vnorm2;
            // h := P h P with P = I - beta v v^H acting on rows/cols k+1..n
            for j in 0..n {
                let dot: C64 = (0..x.len()).map(|i| x[i].conj() * h[(k + 1 + i, j)]).sum();
                let f = dot * beta;
                for i in 0..x.len() {
                    let xi = x[i];
                    h[(k + 1 + i, j)] -= f * xi;
                }
            }
            for i in 0..n {
                let dot: C64 = (0..x.len()).map(|j| h[(i, k + 1 + j)] * x[j]).sum();
                let f = dot * beta;
                for j in 0..x.len() {
                    let xj = x[j].conj();
                    h[(i, k + 1 + j)] -= f * xj;
                }
            }
            for i in 0..n {
                let dot: C64 = (0..x.len()).map(|j| u[(i, k + 1 + j)] * x[j]).sum();
                let f = dot * beta;
                for j in 0..x.len() {
                    let xj = x[j].conj();
                    u[(i, k + 1 + j)] -= f * xj;
                }
            }
        }
        // Scrub rounding fuzz below the subdiagonal so later sweeps see
        // exact zeros.
        for i in 0..n {
            for j in 0..i.saturating_sub(1) {
                h[(i, j)] = C64::new(0.0, 0.0);
            }
        }
        (h, u)
    }

    /// Complex Schur decomposition A = Q T Q^H with T upper triangular,
    /// via explicitly shifted QR iteration with Wilkinson shifts.
    pub fn schur(&self) -> Result<Schur, SchurFailure> {
        let n = self.n;
        let (mut t, mut q) = self.hessenberg();
        let norm = t.frobenius_norm().max(EPS);
        let mut hi = n.saturating_sub(1);
        let mut iters_at_hi = 0usize;
        let mut total = 0usize;
        let budget = 60 * n.max(1);
        while hi > 0 {
            // Deflate any negligible subdiagonal entry at the active edge.
            let sub = t[(hi, hi - 1)].norm();
            let local = t[(hi - 1, hi - 1)].norm() + t[(hi, hi)].norm();
            if sub <= EPS * local.max(norm * EPS * 1e2) || sub == 0.0 {
                t[(hi, hi - 1)] = C64::new(0.0, 0.0);
                hi -= 1;
                iters_at_hi = 0;
                continue;
            }
            // Find the top of the unreduced window ending at hi.
            let mut lo = hi;
            while lo > 0 {
                let s = t[(lo, lo - 1)].norm();
                let l = t[(lo - 1, lo - 1)].norm() + t[(lo, lo)].norm();
                if s <= EPS * l.max(norm * EPS * 1e2) || s == 0.0 {
                    t[(lo, lo - 1)] = C64::new(0.0, 0.0);
                    break;
                }
                lo -= 1;
            }
            total += 1;
            iters_at_hi += 1;
            if total > budget {
                return Err(SchurFailure);
            }
            // Wilkinson shift: eigenvalue of the trailing 2x2 nearest t[hi,hi],
            // with an exceptional perturbation when progress stalls.
            let a = t[(hi - 1, hi - 1)];
            let b = t[(hi - 1, hi)];
            let c = t[(hi, hi - 1)];
            let d = t[(hi, hi)];
            let mut mu = {
                let half = (a - d) * 0.5;
                let disc = (half * half + b * c).sqrt();
                let r1 = d + half + disc;
                let r2 = d + half - disc;
                if (r1 - d).norm() <= (r2 - d).norm() {
                    r1
                } else {
                    r2
                }
            };
            if iters_at_hi % 12 == 0 {
                mu = d + C64::new(0.75 * c.norm(), 0.25 * c.norm());
            }
            // Explicit shifted QR step on the window [lo, hi]; rotations
            // extend across the full rows/columns to keep T consistent.
            for i in lo..=hi {
                t[(i, i)] -= mu;
            }
            let mut rots: Vec<(f64, C64)> = Vec::with_capacity(hi - lo);
            for k in lo..hi {
                let f = t[(k, k)];
                let g = t[(k + 1, k)];
                let (cs, sn) = givens(f, g);
                rots.push((cs, sn));
                for j in k..n {
                    let tk = t[(k, j)];
                    let tk1 = t[(k + 1, j)];
                    t[(k, j)] = tk * cs + tk1 * sn;
                    t[(k + 1, j)] = tk1 * cs - tk * sn.conj();
                }
                t[(k + 1, k)] = C64::new(0.0, 0.0);
            }
            for (k, &(cs, sn)) in (lo..hi).zip(&rots) {
                for i in 0..=(k + 1) {
                    let tk = t[(i, k)];
                    let tk1 = t[(i, k + 1)];
                    t[(i, k)] = tk * cs + tk1 * sn.conj();
                    t[(i, k + 1)] = tk1 * cs - tk * sn;
                }
                for i in 0..n {
                    let qk = q[(i, k)];
                    let qk1 = q[(i, k + 1)];
                    q[(i, k)] = qk * cs + qk1 * sn.conj();
                    q[(i, k + 1)] = qk1 * cs - qk * sn;
                }
            }
            for i in lo..=hi {
                t[(i, i)] += mu;
            }
        }
        Ok(Schur { t, q })
    }

    /// Eigenvalues in Schur order (no sorting).
    pub fn eigenvalues(&self) -> Result<Vec<C64>, SchurFailure> {
        let s = self.schur()?;
        Ok((0..self.n).map(|i| s.t[(i, i)]).collect())
    }

    /// Eigendecomposition: eigenvalues plus an eigenvector matrix V whose
    /// k-th column is an eigenvector for the k-th value. Columns come from
    /// back-substitution on the Schur factor, so near-defective inputs give
    /// an ill-conditioned V rather than an error here.
    pub fn eigen_full(&self) -> Result<(Vec<C64>, Mat), SchurFailure> {
        let n = self.n;
        let s = self.schur()?;
        let t = &s.t;
        let tnorm = t.frobenius_norm().max(EPS);
        let mut y = Mat::zeros(n);
        for k in 0..n {
            let lam = t[(k, k)];
            y[(k, k)] = C64::new(1.0, 0.0);
            for i in (0..k).rev() {
                let mut acc = C64::new(0.0, 0.0);
                for j in i + 1..=k {
                    acc += t[(i, j)] * y[(j, k)];
                }
                let mut denom = t[(i, i)] - lam;
                if denom.norm() < EPS * tnorm {
                    denom = C64::new(EPS * tnorm, 0.0);
                }
                y[(i, k)] = -acc / denom;
            }
        }
        let mut v = s.q.matmul(&y);
        for k in 0..n {
            let nrm = (0..n).map(|i| v[(i, k)].norm_sqr()).sum::<f64>().sqrt();
            if nrm > 0.0 {
                for i in 0..n {
                    v[(i, k)] /= nrm;
                }
            }
        }
        let values = (0..n).map(|i| t[(i, i)]).collect();
        Ok((values, v))
    }
}

/// Schur decomposition: t upper triangular, q unitary, a = q t q^H.
pub struct Schur {
    pub t: Mat,
    pub q: Mat,
}

/// The QR iteration exceeded its budget.
#[derive(Debug, Clone, Copy)]
pub struct SchurFailure;

/// Givens rotation (c real, s complex) with
/// [c, s; -conj(s), c]^H applied from the left mapping (f, g) to (r, 0).
fn givens(f: C64, g: C64) -> (f64, C64) {
    let gn = g.norm();
    if gn == 0.0 {
        return (1.0, C64::new(0.0, 0.0));
    }
    let fn_ = f.norm();
    let r = (fn_ * fn_ + gn * gn).sqrt();
    if fn_ == 0.0 {
        // f is zero: swap-like rotation.
        return (0.0, g.conj() / gn);
    }
    let c = fn_ / r;
    let s = (f / fn_) * g.conj() / r;
    (c, s)
}

/// LU factorization with partial pivoting.
pub struct Lu {
    lu: Mat,
    piv: Vec<usize>,
    swaps: usize,
}

impl Lu {
    fn new(a: &Mat) -> Self {
        let n = a.dim();
        let mut lu = a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut swaps = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let tmp = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = tmp;
                }
                piv.swap(k, p);
                swaps += 1;
            }
            let pivot = lu[(k, k)];
            if pivot.norm() == 0.0 {
                continue;
            }
            for i in k + 1..n {
                let m = lu[(i, k)] / pivot;
                lu[(i, k)] = m;
                for j in k + 1..n {
                    let s = m * lu[(k, j)];
                    lu[(i, j)] -= s;
                }
            }
        }
        Lu { lu, piv, swaps }
    }

    pub fn det(&self) -> C64 {
        let n = self.lu.dim();
        let mut d = if self.swaps % 2 == 0 {
            C64::new(1.0, 0.0)
        } else {
            C64::new(-1.0, 0.0)
        };
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.lu.dim();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.piv.iter().map(|&i| b[i]).collect();
        for i in 1..n {
            for j in 0..i {
                let s = self.lu[(i, j)] * x[j];
                x[i] -= s;
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let s = self.lu[(i, j)] * x[j];
                x[i] -= s;
            }
            x[i] /= self.lu[(i, i)];
        }
        x
    }

    pub fn solve_mat(&self, b: &Mat) -> Mat {
        let n = self.lu.dim();
        assert_eq!(b.dim(), n);
        let mut out = Mat::zeros(n);
        for j in 0..n {
            let col = self.solve_vec(&b.column(j));
            for i in 0..n {
                out[(i, j)] = col[i];
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn det3_direct(m: &Mat) -> C64 {
        m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
            - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
            + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)])
    }

    fn seeded(n: usize, seed: u64) -> Mat {
        // Tiny deterministic LCG, enough to fill test matrices.
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
        let mut next = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        Mat::from_fn(n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn lu_det_matches_cofactor_expansion() {
        for seed in 0..20 {
            let m = seeded(3, seed);
            let d = m.det();
            let e = det3_direct(&m);
            assert!((d - e).norm() <= 1e-12 * (1.0 + e.norm()), "seed {seed}: {d} vs {e}");
        }
    }

    #[test]
    fn lu_solves_and_inverts() {
        for seed in 0..20 {
            let m = seeded(5, seed);
            let inv = m.inverse();
            let r = m.matmul(&inv).sub(&Mat::identity(5)).frobenius_norm();
            assert!(r < 1e-10, "seed {seed}: residual {r}");
        }
    }

    #[test]
    fn singular_values_of_diagonal_are_exact() {
        let m = Mat::from_fn(3, |i, j| {
            if i == j {
                c([1.0, 1e-30, 4.0][i], 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let sv = m.singular_values();
        assert_eq!(sv.len(), 3);
        assert!((sv[0] - 4.0).abs() < 1e-14);
        assert!((sv[1] - 1.0).abs() < 1e-14);
        assert!((sv[2] - 1e-30).abs() < 1e-44, "tiny singular value must survive: {}", sv[2]);
    }

    #[test]
    fn singular_values_match_det_and_frobenius() {
        for seed in 0..20 {
            let m = seeded(4, seed);
            let sv = m.singular_values();
            let prod: f64 = sv.iter().product();
            let dabs = m.det().norm();
            assert!((prod - dabs).abs() <= 1e-10 * (1.0 + dabs), "det {dabs} vs product {prod}");
            let f2: f64 = sv.iter().map(|s| s * s).sum();
            let fro2 = m.frobenius_norm().powi(2);
            assert!((f2 - fro2).abs() <= 1e-10 * (1.0 + fro2));
        }
    }

    #[test]
    fn hessenberg_is_similarity() {
        for seed in 0..10 {
            let m = seeded(6, seed);
            let (h, u) = m.hessenberg();
            for i in 0..6usize {
                for j in 0..i.saturating_sub(1) {
                    assert_eq!(h[(i, j)].norm(), 0.0);
                }
            }
            let back = u.matmul(&h).matmul(&u.adjoint());
            let r = back.sub(&m).frobenius_norm();
            assert!(r < 1e-12 * (1.0 + m.frobenius_norm()), "seed {seed}: {r}");
        }
    }

    #[test]
    fn schur_reconstructs_and_triangularizes() {
        for seed in 0..20 {
            let m = seeded(7, seed);
            let s = m.schur().unwrap();
            for i in 0..7 {
                for j in 0..i {
                    assert!(
                        s.t[(i, j)].norm() <= 1e-10 * (1.0 + m.frobenius_norm()),
                        "seed {seed}: T not triangular at ({i},{j})"
                    );
                }
            }
            let back = s.q.matmul(&s.t).matmul(&s.q.adjoint());
            let r = back.sub(&m).frobenius_norm();
            assert!(r < 1e-9 * (1.0 + m.frobenius_norm()), "seed {seed}: residual {r}");
            let qq = s.q.matmul(&s.q.adjoint()).sub(&Mat::identity(7)).frobenius_norm();
            assert!(qq < 1e-11, "seed {seed}: Q not unitary: {qq}");
        }
    }

    #[test]
    fn eigenvalues_of_triangular_matrix_are_diagonal() {
        let m = Mat::from_rows(&[
            vec![c(2.0, 0.0), c(5.0, -1.0), c(0.5, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 3.0), c(7.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(0.25, 0.25)],
        ]);
        let mut ev = m.eigenvalues().unwrap();
        ev.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        let mut expect = [c(2.0, 0.0), c(-1.0, 3.0), c(0.25, 0.25)];
        expect.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        for (e, x) in ev.iter().zip(&expect) {
            assert!((e - x).norm() < 1e-10, "{e} vs {x}");
        }
    }

    #[test]
    fn eigenvalue_sum_matches_trace() {
        for seed in 0..20 {
            let m = seeded(6, seed);
            let ev = m.eigenvalues().unwrap();
            let sum: C64 = ev.iter().sum();
            let tr = m.trace();
            assert!((sum - tr).norm() < 1e-10 * (1.0 + tr.norm()), "seed {seed}");
        }
    }

    #[test]
    fn eigen_full_satisfies_definition() {
        for seed in 0..10 {
            let m = seeded(5, seed);
            let (vals, v) = m.eigen_full().unwrap();
            for k in 0..5 {
                let col = v.column(k);
                let av = m.matvec(&col);
                let lv: Vec<C64> = col.iter().map(|x| x * vals[k]).collect();
                let r: f64 = av
                    .iter()
                    .zip(&lv)
                    .map(|(a, b)| (a - b).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(r < 1e-8 * (1.0 + m.frobenius_norm()), "seed {seed} col {k}: {r}");
            }
        }
    }

    #[test]
    fn givens_annihilates_second_entry() {
        for (f, g) in [
            (c(1.0, 2.0), c(-3.0, 0.5)),
            (c(0.0, 0.0), c(1.0, 1.0)),
            (c(2.0, 0.0), c(0.0, 0.0)),
            (c(1e-8, 0.0), c(1.0, -1.0)),
        ] {
            let (cs, sn) = givens(f, g);
            let lo = -f * sn.conj() + g * cs;
            assert!(lo.norm() < 1e-12 * (1.0 + f.norm() + g.norm()), "({f},{g}) -> {lo}");
            let unit = cs * cs + sn.norm_sqr();
            assert!((unit - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unit_matrix_products() {
        // E_12 E_21 = E_11 in M_2.
        let e12 = Mat::unit(2, 0, 1);
        let e21 = Mat::unit(2, 1, 0);
        assert_eq!(e12.matmul(&e21), Mat::unit(2, 0, 0));
        assert_eq!(e21.matmul(&e12), Mat::unit(2, 1, 1));
    }
}
