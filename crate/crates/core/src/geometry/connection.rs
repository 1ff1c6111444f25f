//! Linear connections and vector fields on a chart.
//!
//! Index convention: `∇_{E_k} E_j = Γ^i_jk E_i`, so the covariant
//! derivative of a vector field is `X^i_;j = ∂_j X^i + Γ^i_kj X^k` and the
//! parallel-transport law along a curve is `Γ^i_j(s) = Γ^i_jk ẋ^k`.
//! Torsion is `T^i_jk = Γ^i_kj - Γ^i_jk`.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::metric::{christoffels_from_metric, Array3, MetricField, PointArray3Fn, PointMatrixFn};

/// Coordinate finite-difference step for vector-field Jacobians.
pub const FIELD_FD_STEP: f64 = 1e-5;

#[derive(Clone)]
pub struct ConnectionField {
    dim: usize,
    christoffels: PointArray3Fn,
    torsion: Option<PointArray3Fn>,
}

impl fmt::Debug for ConnectionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ConnectionField")
            .field("dim", &self.dim)
            .field("torsion", &self.torsion.is_some())
            .finish()
    }
}

impl ConnectionField {
    pub fn new(
        dim: usize,
        christoffels: impl Fn(&[f64]) -> Array3 + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            christoffels: Arc::new(christoffels),
            torsion: None,
        }
    }

    /// All symbols zero: Cartesian charts of flat space.
    pub fn flat(dim: usize) -> Self {
        Self::new(dim, move |_| Array3::zeros(dim))
    }

    /// Levi-Civita connection of `metric`. Points where the metric is
    /// singular yield NaN symbols.
    pub fn levi_civita(metric: &MetricField) -> Self {
        let m = metric.clone();
        let n = metric.dim();
        Self::new(n, move |x| {
            christoffels_from_metric(&m, x)
                .unwrap_or_else(|_| Array3::from_fn(n, |_, _, _| f64::NAN))
        })
    }

    /// Explicit torsion `T^i_jk`, laid out `[i][j][k]`. Without it torsion
    /// is taken to be zero.
    pub fn with_torsion(
        mut self,
        torsion: impl Fn(&[f64]) -> Array3 + Send + Sync + 'static,
    ) -> Self {
        self.torsion = Some(Arc::new(torsion));
        self
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn christoffels(&self, x: &[f64]) -> Array3 {
        (self.christoffels)(x)
    }

    pub fn torsion(&self, x: &[f64]) -> Array3 {
        match &self.torsion {
            Some(t) => t(x),
            None => Array3::zeros(self.dim),
        }
    }

    /// `(∇_u v)^i` for constant-in-chart `v` plus its supplied derivative
    /// `dv`: `dv^i + Γ^i_jk v^j u^k`.
    pub fn covariant_along(&self, x: &[f64], u: &[f64], v: &[f64], dv: &[f64]) -> Vec<f64> {
        let g = self.christoffels(x);
        (0..self.dim)
            .map(|i| {
                let mut acc = dv[i];
                for (j, vj) in v.iter().enumerate() {
                    for (k, uk) in u.iter().enumerate() {
                        acc += g.get(i, j, k) * vj * uk;
                    }
                }
                acc
            })
            .collect()
    }

    /// `X^i_;j = ∂_j X^i + Γ^i_kj X^k`
    pub fn covariant_derivative(&self, field: &VectorField, x: &[f64]) -> Result<Matrix> {
        self.check_dim(field.dim())?;
        let g = self.christoffels(x);
        let jac = field.jacobian(x)?;
        let v = field.value(x);
        Ok(Matrix::from_fn(self.dim, |i, j| {
            jac[(i, j)] + (0..self.dim).map(|k| g.get(i, k, j) * v[k]).sum::<f64>()
        }))
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: n,
            });
        }
        Ok(())
    }
}

/// A vector field on the chart with optional analytic Jacobian
/// `J[i][j] = ∂_j X^i`.
#[derive(Clone)]
pub struct VectorField {
    dim: usize,
    value: Arc<dyn Fn(&[f64]) -> Vec<f64> + Send + Sync>,
    jacobian: Option<PointMatrixFn>,
    fd_step: f64,
}

impl fmt::Debug for VectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("VectorField")
            .field("dim", &self.dim)
            .field("analytic_jacobian", &self.jacobian.is_some())
            .finish()
    }
}

impl VectorField {
    pub fn new(dim: usize, value: impl Fn(&[f64]) -> Vec<f64> + Send + Sync + 'static) -> Self {
        Self {
            dim,
            value: Arc::new(value),
            jacobian: None,
            fd_step: FIELD_FD_STEP,
        }
    }

    /// `X(x) = M x + c` in chart coordinates.
    pub fn affine(m: Matrix, c: Vec<f64>) -> Result<Self> {
        if c.len() != m.dim() {
            return Err(Error::DimensionMismatch {
                expected: m.dim(),
                found: c.len(),
            });
        }
        let n = m.dim();
        let mj = m.clone();
        Ok(Self::new(n, move |x| {
            m.mul_vec(x).iter().zip(&c).map(|(a, b)| a + b).collect()
        })
        .with_jacobian(move |_| mj.clone()))
    }

    pub fn with_jacobian(mut self, j: impl Fn(&[f64]) -> Matrix + Send + Sync + 'static) -> Self {
        self.jacobian = Some(Arc::new(j));
        self
    }

    pub fn without_jacobian(mut self) -> Self {
        self.jacobian = None;
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

    pub fn value(&self, x: &[f64]) -> Vec<f64> {
        (self.value)(x)
    }

    /// `∂_j X^i`, analytic or central differences.
    pub fn jacobian(&self, x: &[f64]) -> Result<Matrix> {
        if let Some(j) = &self.jacobian {
            return Ok(j(x));
        }
        let h = self.fd_step;
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::MissingDerivative);
        }
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        let mut xp = x.to_vec();
        let mut xm = x.to_vec();
        for j in 0..n {
            xp[j] = x[j] + h;
            xm[j] = x[j] - h;
            let (fp, fm) = (self.value(&xp), self.value(&xm));
            for i in 0..n {
                out[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
            xp[j] = x[j];
            xm[j] = x[j];
        }
        Ok(out)
    }
}

/// `Σ(X)^i_j = X^i_;j + T^i_kj X^k`, the (1,1) tensor with
/// `∇_X = L_X + Σ(X)`.
pub fn sigma_of_x(conn: &ConnectionField, field: &VectorField, x: &[f64]) -> Result<Matrix> {
    let cov = conn.covariant_derivative(field, x)?;
    let t = conn.torsion(x);
    let v = field.value(x);
    let n = conn.dim();
    Ok(Matrix::from_fn(n, |i, j| {
        cov[(i, j)] + (0..n).map(|k| t.get(i, k, j) * v[k]).sum::<f64>()
    }))
}
