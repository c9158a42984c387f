//! Dense complex linear algebra kernels.
//!
//! A small column-major matrix type plus the factorizations the solvers
//! need: Householder QR least squares (with a ridge fallback for
//! rank-deficient systems), Cholesky, and a cyclic Jacobi eigensolver for
//! Hermitian matrices. Everything is `f64`/`Complex64` and allocation-based;
//! no BLAS.

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

/// Ridge added to the normal equations when a selected submatrix is
/// numerically rank deficient.
pub const LS_RIDGE: f64 = 1e-12;

/// Dense complex matrix, column-major storage.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMat::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m.data[j * rows + i] = f(i, j);
            }
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors (all same length).
    pub fn from_columns(cols: &[Vec<Complex64>]) -> Self {
        let rows = cols.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows * cols.len());
        for c in cols {
            debug_assert_eq!(c.len(), rows);
            data.extend_from_slice(c);
        }
        CMat {
            rows,
            cols: cols.len(),
            data,
        }
    }

    /// Column vector from a slice.
    pub fn column_vector(v: &[Complex64]) -> Self {
        CMat {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[j * self.rows + i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[j * self.rows + i] = v;
    }

    #[inline]
    pub fn col(&self, j: usize) -> &[Complex64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    #[inline]
    pub fn col_mut(&mut self, j: usize) -> &mut [Complex64] {
        &mut self.data[j * self.rows..(j + 1) * self.rows]
    }

    /// Gathers the given columns into a new matrix, in the given order.
    pub fn select_columns(&self, indices: &[usize]) -> CMat {
        let mut m = CMat::zeros(self.rows, indices.len());
        for (k, &j) in indices.iter().enumerate() {
            m.col_mut(k).copy_from_slice(self.col(j));
        }
        m
    }

    /// `A * x` for a vector `x` of length `cols`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        debug_assert_eq!(x.len(), self.cols);
        let mut out = vec![Complex64::new(0.0, 0.0); self.rows];
        for j in 0..self.cols {
            let xj = x[j];
            if xj == Complex64::new(0.0, 0.0) {
                continue;
            }
            let col = self.col(j);
            for i in 0..self.rows {
                out[i] += col[i] * xj;
            }
        }
        out
    }

    /// `A * B`.
    pub fn mul_mat(&self, b: &CMat) -> CMat {
        debug_assert_eq!(self.cols, b.rows);
        let mut out = CMat::zeros(self.rows, b.cols);
        for j in 0..b.cols {
            let bj = b.col(j);
            let oj = j * self.rows;
            for k in 0..self.cols {
                let bkj = bj[k];
                if bkj == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let ak = self.col(k);
                for i in 0..self.rows {
                    out.data[oj + i] += ak[i] * bkj;
                }
            }
        }
        out
    }

    /// `A^H * B` (conjugate transpose on the left).
    pub fn herm_mul_mat(&self, b: &CMat) -> CMat {
        debug_assert_eq!(self.rows, b.rows);
        let mut out = CMat::zeros(self.cols, b.cols);
        for j in 0..b.cols {
            let bj = b.col(j);
            for i in 0..self.cols {
                out.set(i, j, dot(self.col(i), bj));
            }
        }
        out
    }

    /// Frobenius norm.
    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Euclidean norm of row `i`.
    pub fn row_norm(&self, i: usize) -> f64 {
        (0..self.cols)
            .map(|j| self.at(i, j).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Element-wise difference `self - b`.
    pub fn sub(&self, b: &CMat) -> CMat {
        debug_assert!(self.rows == b.rows && self.cols == b.cols);
        let data = self.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
        CMat {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&mut self, s: f64) {
        for z in &mut self.data {
            *z *= s;
        }
    }

    pub fn conj_transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).conj())
    }
}

/// Hermitian inner product `sum conj(a_i) b_i`.
#[inline]
pub fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = Complex64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b) {
        acc += x.conj() * y;
    }
    acc
}

/// Euclidean norm of a complex vector.
#[inline]
pub fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Least squares `min ||A x - B||_F` for a tall or square `A` via
/// Householder QR. Falls back to a ridge-regularized solve (ridge
/// [`LS_RIDGE`]) when `A` is numerically rank deficient.
pub fn lstsq(a: &CMat, b: &CMat) -> CMat {
    debug_assert!(a.rows >= a.cols, "lstsq requires rows >= cols");
    match qr_solve(a, b) {
        Some(x) => x,
        None => {
            // Augmented system [A; sqrt(ridge) I] has full column rank.
            let s = LS_RIDGE.sqrt();
            let aug = CMat::from_fn(a.rows + a.cols, a.cols, |i, j| {
                if i < a.rows {
                    a.at(i, j)
                } else if i - a.rows == j {
                    Complex64::new(s, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            let rhs = CMat::from_fn(a.rows + a.cols, b.cols, |i, j| {
                if i < a.rows {
                    b.at(i, j)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            });
            qr_solve(&aug, &rhs).expect("ridge-augmented system is full rank")
        }
    }
}

/// QR least squares; `None` if `A` is numerically rank deficient.
fn qr_solve(a: &CMat, b: &CMat) -> Option<CMat> {
    let (m, n) = (a.rows, a.cols);
    let mut r = a.clone();
    let mut q_b = b.clone();
    let mut diag = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n {
        // Householder reflector for column k below the diagonal.
        let col = &r.col(k)[k..];
        let normx = vec_norm(col);
        if normx == 0.0 {
            return None;
        }
        let x0 = col[0];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -phase * normx;
        // v = x - alpha e1, normalized below by its norm squared.
        let mut v: Vec<Complex64> = col.to_vec();
        v[0] -= alpha;
        let vnorm_sqr: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        diag[k] = alpha;
        if vnorm_sqr > 0.0 {
            let scale = 2.0 / vnorm_sqr;
            for j in (k + 1)..n {
                let w = dot(&v, &r.col(j)[k..]) * scale;
                let cj = &mut r.col_mut(j)[k..];
                for (ci, vi) in cj.iter_mut().zip(&v) {
                    *ci -= vi * w;
                }
            }
            for j in 0..q_b.cols {
                let w = dot(&v, &q_b.col(j)[k..]) * scale;
                let cj = &mut q_b.col_mut(j)[k..];
                for (ci, vi) in cj.iter_mut().zip(&v) {
                    *ci -= vi * w;
                }
            }
            // Store the diagonal; the rest of column k is implicit.
            r.set(k, k, alpha);
            for i in (k + 1)..m {
                r.set(i, k, Complex64::new(0.0, 0.0));
            }
        }
    }

    let dmax = diag.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if diag.iter().any(|z| z.norm() <= 1e-12 * dmax) || dmax == 0.0 {
        return None;
    }

    // Back substitution on the n x n upper triangle.
    let mut x = CMat::zeros(n, b.cols);
    for j in 0..b.cols {
        for i in (0..n).rev() {
            let mut acc = q_b.at(i, j);
            for l in (i + 1)..n {
                acc -= r.at(i, l) * x.at(l, j);
            }
            x.set(i, j, acc / diag[i]);
        }
    }
    Some(x)
}

/// Solves `H x = B` for Hermitian positive definite `H` via Cholesky.
pub fn chol_solve(h: &CMat, b: &CMat) -> Option<CMat> {
    debug_assert_eq!(h.rows, h.cols);
    let n = h.rows;
    let mut l = h.clone();
    for j in 0..n {
        let mut d = l.at(j, j).re;
        for k in 0..j {
            d -= l.at(j, k).norm_sqr();
        }
        if d <= 0.0 || !d.is_finite() {
            return None;
        }
        let d = d.sqrt();
        l.set(j, j, Complex64::new(d, 0.0));
        for i in (j + 1)..n {
            let mut v = l.at(i, j);
            for k in 0..j {
                v -= l.at(i, k) * l.at(j, k).conj();
            }
            l.set(i, j, v / d);
        }
    }
    // Forward then backward substitution: L y = B, L^H x = y.
    let mut x = b.clone();
    for j in 0..b.cols {
        for i in 0..n {
            let mut acc = x.at(i, j);
            for k in 0..i {
                acc -= l.at(i, k) * x.at(k, j);
            }
            x.set(i, j, acc / l.at(i, i).re);
        }
        for i in (0..n).rev() {
            let mut acc = x.at(i, j);
            for k in (i + 1)..n {
                acc -= l.at(k, i).conj() * x.at(k, j);
            }
            x.set(i, j, acc / l.at(i, i).re);
        }
    }
    Some(x)
}

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Returns eigenvalues in ascending order and the matching eigenvectors
/// as columns.
pub fn eigh(h: &CMat) -> (Vec<f64>, CMat) {
    debug_assert_eq!(h.rows, h.cols);
    let n = h.rows;
    // Symmetrize to wash out rounding in the input.
    let mut a = CMat::from_fn(n, n, |i, j| (h.at(i, j) + h.at(j, i).conj()) * 0.5);
    let mut v = CMat::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });

    let frob = a.frob_norm().max(f64::MIN_POSITIVE);
    let tol = 1e-14 * frob;
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.at(p, q).norm_sqr();
            }
        }
        if (2.0 * off).sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.at(p, q);
                let rmag = apq.norm();
                if rmag <= 1e-300 {
                    continue;
                }
                let phase = apq / rmag;
                let app = a.at(p, p).re;
                let aqq = a.at(q, q).re;
                // Small root of r t^2 - (aqq - app) t - r = 0, which zeroes
                // the transformed (p,q) entry for this rotation convention.
                let tau = (aqq - app) / (2.0 * rmag);
                let t = if tau >= 0.0 {
                    -1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // Unitary rotation U: U[p][p]=c, U[p][q]=-s*phase,
                // U[q][p]=s*conj(phase), U[q][q]=c. Apply A <- U^H A U.
                let sp = s * phase;
                let spc = s * phase.conj();
                for i in 0..n {
                    let aip = a.at(i, p);
                    let aiq = a.at(i, q);
                    a.set(i, p, aip * c + aiq * spc);
                    a.set(i, q, aiq * c - aip * sp);
                }
                for i in 0..n {
                    let api = a.at(p, i);
                    let aqi = a.at(q, i);
                    a.set(p, i, api * c + aqi * sp);
                    a.set(q, i, aqi * c - api * spc);
                }
                for i in 0..n {
                    let vip = v.at(i, p);
                    let viq = v.at(i, q);
                    v.set(i, p, vip * c + viq * spc);
                    v.set(i, q, viq * c - vip * sp);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evs: Vec<f64> = (0..n).map(|i| a.at(i, i).re).collect();
    order.sort_by(|&i, &j| evs[i].total_cmp(&evs[j]));
    let values = order.iter().map(|&i| evs[i]).collect();
    let vectors = v.select_columns(&order);
    (values, vectors)
}

/// Orthonormal basis of the column span via modified Gram-Schmidt,
/// dropping directions with norm below `tol` (absolute).
pub fn orth_basis(m: &CMat, tol: f64) -> CMat {
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    for j in 0..m.cols() {
        let mut v = m.col(j).to_vec();
        for b in &basis {
            let w = dot(b, &v);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= bi * w;
            }
        }
        // Second pass for numerical orthogonality.
        for b in &basis {
            let w = dot(b, &v);
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= bi * w;
            }
        }
        let nv = vec_norm(&v);
        if nv > tol {
            for vi in &mut v {
                *vi /= nv;
            }
            basis.push(v);
        }
    }
    CMat::from_columns(&basis)
}

/// Upper estimate of the spectral norm `||A||_2` by power iteration on
/// `A^H A` from a fixed deterministic start vector.
pub fn op_norm_est(a: &CMat) -> f64 {
    let n = a.cols();
    if n == 0 || a.rows() == 0 {
        return 0.0;
    }
    let mut v: Vec<Complex64> = (0..n)
        .map(|j| Complex64::new(1.0 + (j as f64 + 1.0).cos() * 0.5, 0.0))
        .collect();
    let nv = vec_norm(&v);
    for z in &mut v {
        *z /= nv;
    }
    let mut lambda = 0.0;
    for _ in 0..60 {
        let av = a.mul_vec(&v);
        let mut w = vec![Complex64::new(0.0, 0.0); n];
        for j in 0..n {
            w[j] = dot(a.col(j), &av);
        }
        let nw = vec_norm(&w);
        if nw == 0.0 {
            return 0.0;
        }
        lambda = nw;
        for (vi, wi) in v.iter_mut().zip(&w) {
            *vi = wi / nw;
        }
    }
    // Small headroom so the estimate is safe as a Lipschitz constant.
    (lambda.sqrt()) * 1.001
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::seeded_rng;
    use rand::Rng;

    fn random_mat(rows: usize, cols: usize, seed: u64) -> CMat {
        let mut rng = seeded_rng(seed);
        CMat::from_fn(rows, cols, |_, _| {
            Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5)
        })
    }

    #[test]
    fn lstsq_recovers_exact_solution() {
        let a = random_mat(12, 4, 1);
        let x_true = random_mat(4, 2, 2);
        let b = a.mul_mat(&x_true);
        let x = lstsq(&a, &b);
        assert!(x.sub(&x_true).frob_norm() < 1e-10);
    }

    #[test]
    fn lstsq_residual_orthogonal_to_columns() {
        let a = random_mat(10, 3, 3);
        let b = random_mat(10, 1, 4);
        let x = lstsq(&a, &b);
        let r = b.sub(&a.mul_mat(&x));
        for j in 0..3 {
            assert!(dot(a.col(j), r.col(0)).norm() < 1e-10);
        }
    }

    #[test]
    fn lstsq_rank_deficient_uses_ridge() {
        // Two identical columns.
        let base = random_mat(8, 1, 5);
        let a = CMat::from_columns(&[base.col(0).to_vec(), base.col(0).to_vec()]);
        let b = random_mat(8, 1, 6);
        let x = lstsq(&a, &b);
        assert!(x.data().iter().all(|z| z.norm().is_finite()));
    }

    #[test]
    fn cholesky_solves_hpd_system() {
        let a = random_mat(9, 5, 7);
        // H = A^H A + I is Hermitian positive definite.
        let mut h = a.herm_mul_mat(&a);
        for i in 0..5 {
            let d = h.at(i, i) + Complex64::new(1.0, 0.0);
            h.set(i, i, d);
        }
        let x_true = random_mat(5, 2, 8);
        let b = h.mul_mat(&x_true);
        let x = chol_solve(&h, &b).unwrap();
        assert!(x.sub(&x_true).frob_norm() < 1e-9);
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let mut h = CMat::zeros(2, 2);
        h.set(0, 0, Complex64::new(1.0, 0.0));
        h.set(1, 1, Complex64::new(-1.0, 0.0));
        assert!(chol_solve(&h, &CMat::zeros(2, 1)).is_none());
    }

    #[test]
    fn eigh_reconstructs_matrix() {
        let a = random_mat(7, 7, 9);
        let h = CMat::from_fn(7, 7, |i, j| (a.at(i, j) + a.at(j, i).conj()) * 0.5);
        let (vals, vecs) = eigh(&h);
        // H V = V diag(vals)
        let hv = h.mul_mat(&vecs);
        let mut vd = vecs.clone();
        for j in 0..7 {
            for i in 0..7 {
                let v = vd.at(i, j) * vals[j];
                vd.set(i, j, v);
            }
        }
        assert!(hv.sub(&vd).frob_norm() < 1e-9 * h.frob_norm().max(1.0));
        // ascending order
        for w in vals.windows(2) {
            assert!(w[0] <= w[1]);
        }
        // orthonormal eigenvectors
        let g = vecs.herm_mul_mat(&vecs);
        for i in 0..7 {
            for j in 0..7 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g.at(i, j).norm() - expect).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn orth_basis_spans_and_is_orthonormal() {
        let a = random_mat(10, 4, 11);
        let q = orth_basis(&a, 1e-12);
        assert_eq!(q.cols(), 4);
        let g = q.herm_mul_mat(&q);
        for i in 0..4 {
            for j in 0..4 {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((g.at(i, j).norm() - expect).abs() < 1e-10);
            }
        }
        // Duplicated column collapses the basis.
        let dup = CMat::from_columns(&[a.col(0).to_vec(), a.col(0).to_vec()]);
        assert_eq!(orth_basis(&dup, 1e-10).cols(), 1);
    }

    #[test]
    fn op_norm_bounds_matrix_action() {
        let a = random_mat(9, 6, 13);
        let est = op_norm_est(&a);
        let mut rng = seeded_rng(14);
        for _ in 0..20 {
            let x: Vec<Complex64> = (0..6)
                .map(|_| Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5))
                .collect();
            let ax = a.mul_vec(&x);
            assert!(vec_norm(&ax) <= est * vec_norm(&x) * (1.0 + 1e-9));
        }
    }
}
