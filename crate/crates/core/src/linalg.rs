//! Small dense square matrices.
//!
//! Dimensions in this crate stay tiny (n <= 8), so everything is a flat
//! row-major `Vec<f64>` with straightforward loops.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

// float math is not inherent on f64 in core; the lint misfires on the unstable methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Square `n x n` matrix, row-major. The row index plays the role of the
/// superscript in `H^i_j`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Matrix {
    n: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    /// Builds a matrix from row-major data; `data.len()` must be a perfect square.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: data.len(),
            });
        }
        Ok(Self { n, data })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            let r = r.as_ref();
            if r.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Ok(Self { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self[(j, i)])
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            n: self.n,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|v| v.is_finite())
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        debug_assert_eq!(v.len(), self.n);
        (0..self.n)
            .map(|i| (0..self.n).map(|k| self[(i, k)] * v[k]).sum())
            .collect()
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self[(i, j)]).collect()
    }

    /// `self += k * other`
    pub fn axpy(&mut self, k: f64, other: &Matrix) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += k * b;
        }
    }

    /// Max-norm distance between two matrices of equal size.
    pub fn max_diff(&self, other: &Matrix) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .unwrap_or(col);
            if !(a[(pivot, col)].abs() > 1e-14 * scale) {
                return Err(Error::Singular);
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let f = a[(row, col)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[(row, j)] -= f * a[(col, j)];
                    inv[(row, j)] -= f * inv[(col, j)];
                }
            }
        }
        Ok(inv)
    }

    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.clone();
        let mut det = 1.0;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| a[(x, col)].abs().total_cmp(&a[(y, col)].abs()))
                .unwrap_or(col);
            if a[(pivot, col)] == 0.0 {
                return 0.0;
            }
            if pivot != col {
                a.swap_rows(pivot, col);
                det = -det;
            }
            let p = a[(col, col)];
            det *= p;
            for row in col + 1..n {
                let f = a[(row, col)] / p;
                for j in col..n {
                    a[(row, j)] -= f * a[(col, j)];
                }
            }
        }
        det
    }

    /// Lower-triangular `L` with `self = L L^T`. Requires a symmetric
    /// positive-definite matrix.
    pub fn cholesky(&self) -> Result<Self> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = self[(i, j)];
                for k in 0..j {
                    sum -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if !(sum > 0.0) {
                        return Err(Error::NotPositiveDefinite);
                    }
                    l[(i, j)] = sum.sqrt();
                } else {
                    l[(i, j)] = sum / l[(j, j)];
                }
            }
        }
        Ok(l)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        for j in 0..self.n {
            self.data.swap(a * self.n + j, b * self.n + j);
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.n + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.n + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        debug_assert_eq!(self.n, rhs.n);
        let n = self.n;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.axpy(1.0, rhs);
        out
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        let mut out = self.clone();
        out.axpy(-1.0, rhs);
        out
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(m: &Matrix) -> Vec<f64> {
    let n = m.dim();
    let mut a = m.clone();
    for _sweep in 0..64 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off <= 1e-30 * a.max_abs().max(f64::MIN_POSITIVE).powi(2) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = 0.5 * (a[(q, q)] - a[(p, p)]) / apq;
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[(i, i)]).collect();
    ev.sort_by(|x, y| x.total_cmp(y));
    ev
}

/// Angle of the rotation factor in the polar decomposition of a 2x2 matrix
/// with positive determinant, in `(-pi, pi]`.
pub fn rotation_angle_2x2(m: &Matrix) -> Result<f64> {
    if m.dim() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: m.dim(),
        });
    }
    if !(m.determinant() > 0.0) {
        return Err(Error::Singular);
    }
    // M = R P with P symmetric positive definite; R's angle is that of the
    // "conformal" part of M.
    Ok(f64::atan2(m[(1, 0)] - m[(0, 1)], m[(0, 0)] + m[(1, 1)]))
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * core::f64::consts::PI;
    let mut r = a % two_pi;
    if r <= -core::f64::consts::PI {
        r += two_pi;
    } else if r > core::f64::consts::PI {
        r -= two_pi;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_known_matrix() {
        let m = Matrix::from_rows(&[[4.0, 7.0], [2.0, 6.0]]).unwrap();
        let inv = m.inverse().unwrap();
        let expected = Matrix::from_rows(&[[0.6, -0.7], [-0.2, 0.4]]).unwrap();
        assert!(inv.max_diff(&expected) < 1e-15);
        assert!((&m * &inv).max_diff(&Matrix::identity(2)) < 1e-15);
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Matrix::from_rows(&[[1.0, 2.0], [2.0, 4.0]]).unwrap();
        assert_eq!(m.inverse(), Err(Error::Singular));
        assert_eq!(m.determinant(), 0.0);
    }

    #[test]
    fn cholesky_reconstructs() {
        let m = Matrix::from_rows(&[[4.0, 2.0, 0.4], [2.0, 3.0, 0.1], [0.4, 0.1, 2.0]]).unwrap();
        let l = m.cholesky().unwrap();
        assert!((&l * &l.transpose()).max_diff(&m) < 1e-14);
        assert!(Matrix::diag(&[-1.0, 1.0]).cholesky().is_err());
    }

    #[test]
    fn polar_angle_ignores_symmetric_stretch() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let r = Matrix::from_rows(&[[c, -s], [s, c]]).unwrap();
        let p = Matrix::from_rows(&[[2.0, 0.5], [0.5, 1.0]]).unwrap();
        let a = rotation_angle_2x2(&(&r * &p)).unwrap();
        assert!((a - 0.3).abs() < 1e-14);
    }

    #[test]
    fn jacobi_eigenvalues() {
        let m = Matrix::from_rows(&[[2.0, 1.0, 0.0], [1.0, 2.0, 0.0], [0.0, 0.0, -1.0]]).unwrap();
        let ev = symmetric_eigenvalues(&m);
        for (a, b) in ev.iter().zip([-1.0, 1.0, 3.0]) {
            assert!((a - b).abs() < 1e-13, "{ev:?}");
        }
    }

    #[test]
    fn wrap_angle_range() {
        let pi = core::f64::consts::PI;
        assert!((wrap_angle(3.0 * pi / 2.0) + pi / 2.0).abs() < 1e-15);
        assert!((wrap_angle(-pi) - pi).abs() < 1e-15);
        assert_eq!(wrap_angle(0.25), 0.25);
    }
}
