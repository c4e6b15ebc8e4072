//! Dense symmetric matrices and the handful of factorizations the solver
//! and the structural checks need: cyclic Jacobi eigendecomposition and
//! Cholesky.
//!
//! Sizes in this crate are small (tens of rows at most), so everything is
//! plain row-major `Vec<f64>` storage without blocking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MatrixError {
    #[error("row {row} has length {len}, expected {expected}")]
    Ragged {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("matrix is not symmetric at ({i}, {j}): {a} vs {b}")]
    NotSymmetric { i: usize, j: usize, a: f64, b: f64 },
    #[error("non-finite entry at ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("dimension mismatch: {0} vs {1}")]
    Dimension(usize, usize),
}

/// Dense symmetric matrix. Writes go through [`SymMatrix::set`], which
/// updates both triangles, so `get(i, j) == get(j, i)` holds exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diag(d: &[f64]) -> Self {
        let mut m = Self::zeros(d.len());
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Outer product `x xᵀ`.
    pub fn outer(x: &[f64]) -> Self {
        let n = x.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] = x[i] * x[j];
            }
        }
        m
    }

    /// Builds from nested rows, requiring exact symmetry and finite entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, MatrixError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(MatrixError::Ragged {
                    row: r,
                    len: row.len(),
                    expected: n,
                });
            }
            data.extend_from_slice(row);
        }
        for i in 0..n {
            for j in 0..n {
                let a = data[i * n + j];
                if !a.is_finite() {
                    return Err(MatrixError::NonFinite { i, j });
                }
                let b = data[j * n + i];
                if a != b {
                    return Err(MatrixError::NotSymmetric { i, j, a, b });
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Builds from a row-major square buffer, averaging the two triangles.
    pub fn from_row_major_symmetrized(n: usize, buf: &[f64]) -> Self {
        assert_eq!(buf.len(), n * n);
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = buf[i * n + i];
            for j in 0..i {
                let v = 0.5 * (buf[i * n + j] + buf[j * n + i]);
                m.data[i * n + j] = v;
                m.data[j * n + i] = v;
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
        self.data[j * self.n + i] = v;
    }

    /// Adds `v` to entry `(i, j)` and its mirror (once on the diagonal).
    #[inline]
    pub fn add_at(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] += v;
        if i != j {
            self.data[j * self.n + i] += v;
        }
    }

    /// Row-major view of the full (both triangles) storage.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn diag(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        Self { n: self.n, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        Self { n: self.n, data }
    }

    /// Frobenius inner product `A • B = Tr(AᵀB)`.
    pub fn dot(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.n);
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// Quadratic form `xᵀ M x`.
    pub fn quad(&self, x: &[f64]) -> f64 {
        self.mul_vec(x).iter().zip(x).map(|(a, b)| a * b).sum()
    }

    /// Largest absolute entry of the (generally non-symmetric) product `self · other`.
    pub fn product_max_abs(&self, other: &Self) -> f64 {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut m: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v: f64 = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
                m = m.max(v.abs());
            }
        }
        m
    }

    /// Principal submatrix on the given index list, in that order.
    pub fn principal(&self, idx: &[usize]) -> Self {
        let k = idx.len();
        let mut m = Self::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.data[a * k + b] = self.get(i, j);
            }
        }
        m
    }

    /// `P M Pᵀ` where `perm[new] = old`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.n);
        self.principal(perm)
    }

    /// Copies `block` into the principal position starting at `offset`.
    pub fn embed(&self, size: usize, offset: usize) -> Self {
        assert!(offset + self.n <= size);
        let mut m = Self::zeros(size);
        for i in 0..self.n {
            for j in 0..self.n {
                m.data[(offset + i) * size + offset + j] = self.get(i, j);
            }
        }
        m
    }

    /// Symmetric eigendecomposition by cyclic Jacobi rotations.
    pub fn eigh(&self) -> SymEigen {
        jacobi_eigen(self)
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.eigh().values
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigh().values.first().copied().unwrap_or(0.0)
    }

    pub fn cholesky(&self) -> Option<Cholesky> {
        Cholesky::new(self)
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<f64>>::deserialize(d)?;
        SymMatrix::from_rows(&rows).map_err(serde::de::Error::custom)
    }
}

/// Eigenvalues in ascending order with matching orthonormal eigenvectors.
#[derive(Debug, Clone)]
pub struct SymEigen {
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<f64>>,
}

impl SymEigen {
    /// Rebuilds `Σ λ_k v_k v_kᵀ` using `f(λ_k)` in place of each eigenvalue.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        let n = self.values.len();
        let mut buf = vec![0.0; n * n];
        for (lam, v) in self.values.iter().zip(&self.vectors) {
            let l = f(*lam);
            if l == 0.0 {
                continue;
            }
            for i in 0..n {
                let li = l * v[i];
                for j in 0..n {
                    buf[i * n + j] += li * v[j];
                }
            }
        }
        SymMatrix::from_row_major_symmetrized(n, &buf)
    }
}

const JACOBI_MAX_SWEEPS: usize = 100;

fn jacobi_eigen(m: &SymMatrix) -> SymEigen {
    let n = m.n();
    let mut a = m.as_slice().to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();

    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= f64::EPSILON * 1e-3 * scale || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                // Skip rotations that would not change the diagonal in floating point.
                if apq.abs() * 1e18 < app.abs().min(aqq.abs()) {
                    a[p * n + q] = 0.0;
                    a[q * n + p] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&k| a[k * n + k]).collect();
    let vectors = order
        .iter()
        .map(|&k| (0..n).map(|i| v[i * n + k]).collect())
        .collect();
    SymEigen { values, vectors }
}

/// Lower-triangular Cholesky factor `M = L Lᵀ`.
#[derive(Debug, Clone)]
pub struct Cholesky {
    n: usize,
    l: Vec<f64>,
}

impl Cholesky {
    /// Returns `None` unless the matrix is numerically positive definite.
    pub fn new(m: &SymMatrix) -> Option<Self> {
        Self::from_row_major(m.n(), m.as_slice())
    }

    pub(crate) fn from_row_major(n: usize, a: &[f64]) -> Option<Self> {
        let mut l = vec![0.0; n * n];
        for j in 0..n {
            let mut d = a[j * n + j];
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > 0.0) || !d.is_finite() {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let mut s = a[i * n + j];
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(Self { n, l })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Solves `L z = b` in place.
    pub fn forward(&self, b: &mut [f64]) {
        let n = self.n;
        for i in 0..n {
            let mut s = b[i];
            for k in 0..i {
                s -= self.l[i * n + k] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    /// Solves `Lᵀ z = b` in place.
    pub fn backward(&self, b: &mut [f64]) {
        let n = self.n;
        for i in (0..n).rev() {
            let mut s = b[i];
            for k in (i + 1)..n {
                s -= self.l[k * n + i] * b[k];
            }
            b[i] = s / self.l[i * n + i];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.forward(&mut x);
        self.backward(&mut x);
        x
    }

    pub fn inverse(&self) -> SymMatrix {
        let n = self.n;
        let mut buf = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for j in 0..n {
            e.iter_mut().for_each(|v| *v = 0.0);
            e[j] = 1.0;
            let col = self.solve(&e);
            for i in 0..n {
                buf[i * n + j] = col[i];
            }
        }
        SymMatrix::from_row_major_symmetrized(n, &buf)
    }

    /// `L⁻¹ D L⁻ᵀ` for symmetric `D`, used for exact step-to-boundary tests.
    pub fn congruence_inverse(&self, d: &SymMatrix) -> SymMatrix {
        let n = self.n;
        // Columns of L⁻¹ D.
        let mut t = vec![0.0; n * n];
        let mut col = vec![0.0; n];
        for j in 0..n {
            for i in 0..n {
                col[i] = d.get(i, j);
            }
            self.forward(&mut col);
            for i in 0..n {
                t[i * n + j] = col[i];
            }
        }
        // (L⁻¹ (L⁻¹ D)ᵀ)ᵀ = L⁻¹ D L⁻ᵀ since D is symmetric.
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                col[k] = t[i * n + k];
            }
            self.forward(&mut col);
            for k in 0..n {
                out[i * n + k] = col[k];
            }
        }
        SymMatrix::from_row_major_symmetrized(n, &out)
    }

    pub fn log_det(&self) -> f64 {
        (0..self.n).map(|i| 2.0 * self.l[i * self.n + i].ln()).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rand_sym(n: usize, seed: u64) -> SymMatrix {
        let mut s = seed;
        let mut next = || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        let mut m = SymMatrix::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                m.set(i, j, next());
            }
        }
        m
    }

    #[test]
    fn set_keeps_symmetry() {
        let mut m = SymMatrix::zeros(3);
        m.set(0, 2, 4.0);
        m.add_at(1, 2, -1.5);
        m.add_at(1, 1, 2.0);
        assert_eq!(m.get(2, 0), 4.0);
        assert_eq!(m.get(2, 1), -1.5);
        assert_eq!(m.get(1, 1), 2.0);
    }

    #[test]
    fn from_rows_rejects_asymmetry() {
        let err = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.5, 1.0]]).unwrap_err();
        assert!(matches!(err, MatrixError::NotSymmetric { .. }));
        assert!(SymMatrix::from_rows(&[vec![1.0], vec![2.0, 1.0]]).is_err());
    }

    #[test]
    fn jacobi_reconstructs() {
        for n in 1..9 {
            let m = rand_sym(n, n as u64 + 17);
            let e = m.eigh();
            let back = e.reconstruct_with(|l| l);
            assert!(back.sub(&m).max_abs() < 1e-12, "n={n}");
            for w in e.values.windows(2) {
                assert!(w[0] <= w[1]);
            }
            // Orthonormal vectors.
            for a in 0..n {
                for b in 0..n {
                    let d: f64 = (0..n).map(|i| e.vectors[a][i] * e.vectors[b][i]).sum();
                    let want = if a == b { 1.0 } else { 0.0 };
                    assert!((d - want).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn jacobi_on_known_spectrum() {
        let k3 = SymMatrix::from_rows(&[
            vec![2.0, -1.0, -1.0],
            vec![-1.0, 2.0, -1.0],
            vec![-1.0, -1.0, 2.0],
        ])
        .unwrap();
        let v = k3.eigenvalues();
        assert!(v[0].abs() < 1e-14);
        assert!((v[1] - 3.0).abs() < 1e-14);
        assert!((v[2] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn cholesky_solve_and_inverse() {
        let mut m = rand_sym(5, 3);
        for i in 0..5 {
            m.add_at(i, i, 6.0);
        }
        let c = m.cholesky().unwrap();
        let b = vec![1.0, -2.0, 0.5, 3.0, 0.0];
        let x = c.solve(&b);
        let r = m.mul_vec(&x);
        for (a, b) in r.iter().zip(&b) {
            assert!((a - b).abs() < 1e-12);
        }
        let inv = c.inverse();
        assert!(m.product_max_abs(&inv) < 1.0 + 1e-12);
        let id = SymMatrix::identity(5);
        let mut prod = vec![0.0; 25];
        for i in 0..5 {
            for j in 0..5 {
                prod[i * 5 + j] = (0..5).map(|k| m.get(i, k) * inv.get(k, j)).sum();
            }
        }
        assert!(
            SymMatrix::from_row_major_symmetrized(5, &prod)
                .sub(&id)
                .max_abs()
                < 1e-12
        );
    }

    #[test]
    fn cholesky_rejects_indefinite() {
        let m = SymMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap();
        assert!(m.cholesky().is_none());
    }

    #[test]
    fn congruence_matches_eigen_route() {
        let mut x = rand_sym(4, 9);
        for i in 0..4 {
            x.add_at(i, i, 5.0);
        }
        let d = rand_sym(4, 10);
        let c = x.cholesky().unwrap();
        let t = c.congruence_inverse(&d);
        // Generalized eigenvalues of (D, X) are the eigenvalues of L⁻¹DL⁻ᵀ:
        // each λ makes D − λX singular.
        for lam in t.eigenvalues() {
            let m = d.sub(&x.scaled(lam));
            let ev = m.eigenvalues();
            let smallest = ev.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
            assert!(smallest < 1e-10);
        }
    }
}
