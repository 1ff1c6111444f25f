//! Metric fields on a chart and their Levi-Civita Christoffel symbols.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigenvalues, Matrix};

/// Coordinate finite-difference step for metric derivatives.
pub const METRIC_FD_STEP: f64 = 1e-5;

/// Dense `n x n x n` array indexed `[a][b][c]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Array3 {
    n: usize,
    data: Vec<f64>,
}

impl Array3 {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            data: vec![0.0; n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Self { n, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.data[(a * self.n + b) * self.n + c]
    }

    #[inline]
    pub fn set(&mut self, a: usize, b: usize, c: usize, v: f64) {
        self.data[(a * self.n + b) * self.n + c] = v;
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &Array3) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// `M^a_b = A[a][b][c] v^c`
    pub fn contract_last(&self, v: &[f64]) -> Matrix {
        Matrix::from_fn(self.n, |a, b| {
            (0..self.n).map(|c| self.get(a, b, c) * v[c]).sum()
        })
    }
}

pub type PointMatrixFn = Arc<dyn Fn(&[f64]) -> Matrix + Send + Sync>;
pub type PointArray3Fn = Arc<dyn Fn(&[f64]) -> Array3 + Send + Sync>;

/// Metric components `g_ij` on a chart.
#[derive(Clone)]
pub struct MetricField {
    dim: usize,
    g: PointMatrixFn,
    g_inv: Option<PointMatrixFn>,
    /// `dg[k][i][j] = ∂_k g_ij`
    dg: Option<PointArray3Fn>,
    signature: Vec<i8>,
    fd_step: f64,
}

impl fmt::Debug for MetricField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MetricField")
            .field("dim", &self.dim)
            .field("signature", &self.signature)
            .field("analytic_derivatives", &self.dg.is_some())
            .finish()
    }
}

impl MetricField {
    /// `signature` lists the signs of the eigenvalues (any order); its
    /// length fixes the dimension.
    pub fn new(signature: Vec<i8>, g: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static) -> Self {
        Self {
            dim: signature.len(),
            g: Arc::new(g),
            g_inv: None,
            dg: None,
            signature,
            fd_step: METRIC_FD_STEP,
        }
    }

    /// Constant metric; derivatives are exactly zero.
    pub fn constant(g: Matrix) -> Result<Self> {
        let signature = signature_of(&g)?;
        let n = g.dim();
        let inv = g.inverse()?;
        Ok(Self::new(signature, move |_| g.clone())
            .with_inverse(move |_| inv.clone())
            .with_derivatives(move |_| Array3::zeros(n)))
    }

    pub fn euclidean(n: usize) -> Self {
        Self::constant(Matrix::identity(n)).expect("identity is regular")
    }

    /// `diag(-1, 1, ..., 1)`
    pub fn minkowski(n: usize) -> Self {
        let mut d = vec![1.0; n];
        d[0] = -1.0;
        Self::constant(Matrix::diag(&d)).expect("diagonal is regular")
    }

    pub fn with_inverse(
        mut self,
        g_inv: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        self.g_inv = Some(Arc::new(g_inv));
        self
    }

    /// Analytic `∂_k g_ij`, laid out `[k][i][j]`.
    pub fn with_derivatives(
        mut self,
        dg: impl Fn(&[f64]) -> Array3 + Send + Sync + 'static,
    ) -> Self {
        self.dg = Some(Arc::new(dg));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn signature(&self) -> &[i8] {
        &self.signature
    }

    pub fn g(&self, x: &[f64]) -> Matrix {
        (self.g)(x)
    }

    pub fn g_inv(&self, x: &[f64]) -> Result<Matrix> {
        match &self.g_inv {
            Some(f) => Ok(f(x)),
            None => self.g(x).inverse(),
        }
    }

    /// `∂_k g_ij` as `[k][i][j]`, analytic or central differences.
    pub fn dg(&self, x: &[f64]) -> Array3 {
        if let Some(f) = &self.dg {
            return f(x);
        }
        let n = self.dim;
        let h = self.fd_step;
        let mut out = Array3::zeros(n);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        for k in 0..n {
            xp[k] = x[k] + h;
            xm[k] = x[k] - h;
            let (gp, gm) = (self.g(&xp), self.g(&xm));
            for i in 0..n {
                for j in 0..n {
                    out.set(k, i, j, (gp[(i, j)] - gm[(i, j)]) / (2.0 * h));
                }
            }
            xp[k] = x[k];
            xm[k] = x[k];
        }
        out
    }

    /// `g(u, v)`
    pub fn inner(&self, x: &[f64], u: &[f64], v: &[f64]) -> f64 {
        let g = self.g(x);
        let gv = g.mul_vec(v);
        u.iter().zip(&gv).map(|(a, b)| a * b).sum()
    }

    /// `v_i = g_ij v^j`
    pub fn lower(&self, x: &[f64], v: &[f64]) -> Vec<f64> {
        self.g(x).mul_vec(v)
    }

    /// Checks symmetry, the inverse, and the signature at `x`.
    pub fn validate_at(&self, x: &[f64], tol: f64) -> Result<()> {
        let g = self.g(x);
        if g.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: g.dim(),
            });
        }
        let scale = g.max_abs().max(1.0);
        if g.max_diff(&g.transpose()) > tol * scale {
            return Err(Error::InvalidParameter("metric is not symmetric".into()));
        }
        let inv = self.g_inv(x)?;
        if (&g * &inv).max_diff(&Matrix::identity(self.dim)) > tol * scale * inv.max_abs().max(1.0)
        {
            return Err(Error::InvalidParameter(
                "metric inverse does not match".into(),
            ));
        }
        let mut found = signature_of(&g)?;
        let mut expected = self.signature.clone();
        found.sort_unstable();
        expected.sort_unstable();
        if found != expected {
            return Err(Error::InvalidParameter("metric signature changed".into()));
        }
        Ok(())
    }
}

/// Signs of the eigenvalues of a symmetric matrix, ascending.
pub fn signature_of(g: &Matrix) -> Result<Vec<i8>> {
    let ev = symmetric_eigenvalues(g);
    let scale = ev.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if ev.iter().any(|v| v.abs() <= 1e-12 * scale) || scale == 0.0 {
        return Err(Error::Singular);
    }
    Ok(ev.iter().map(|v| if *v < 0.0 { -1 } else { 1 }).collect())
}

/// Levi-Civita symbols `Γ^i_jk = ½ g^il (∂_j g_lk + ∂_k g_lj - ∂_l g_jk)`,
/// laid out `[i][j][k]`.
pub fn christoffels_from_metric(m: &MetricField, x: &[f64]) -> Result<Array3> {
    let n = m.dim();
    if x.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let g_inv = m.g_inv(x)?;
    let dg = m.dg(x);
    // first kind: Γ_ljk
    let first = Array3::from_fn(n, |l, j, k| {
        0.5 * (dg.get(j, l, k) + dg.get(k, l, j) - dg.get(l, j, k))
    });
    Ok(Array3::from_fn(n, |i, j, k| {
        (0..n).map(|l| g_inv[(i, l)] * first.get(l, j, k)).sum()
    }))
}
