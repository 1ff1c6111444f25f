//! Transport laws built from a connection and curve data.
//!
//! Every named transport is written as the parallel law plus a deformation
//! `B(s)`: `Γ(s) = Γ^i_jk ẋ^k + B(s)`, where `B` is the (1,1) tensor by which
//! the generating derivation differs from `∇_ẋ` on the curve.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::law::{Domain, MatrixFn, TransportLaw};
use crate::linalg::Matrix;

use super::connection::{sigma_of_x, ConnectionField, VectorField};
use super::curve::Curve;
use super::metric::MetricField;

/// Number of parameter samples used to check curve preconditions.
pub const PRECONDITION_SAMPLES: usize = 65;

/// Tolerance on `g(u,u) = -1` required by the Fermi transport.
pub const UNIT_TIMELIKE_TOL: f64 = 1e-8;

#[derive(Clone)]
pub struct DeformationField {
    dim: usize,
    domain: Domain,
    b: MatrixFn,
}

impl fmt::Debug for DeformationField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DeformationField")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .finish()
    }
}

impl DeformationField {
    pub fn new(
        dim: usize,
        domain: Domain,
        b: impl Fn(f64) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            domain,
            b: Arc::new(b),
        }
    }

    pub fn zero(dim: usize, domain: Domain) -> Self {
        Self::new(dim, domain, move |_| Matrix::zeros(dim))
    }

    pub fn constant(b: Matrix, domain: Domain) -> Self {
        Self::new(b.dim(), domain, move |_| b.clone())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn at(&self, s: f64) -> Matrix {
        (self.b)(s)
    }
}

fn check_dims(curve: &Curve, n: usize) -> Result<()> {
    if curve.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: curve.dim(),
        });
    }
    Ok(())
}

/// `Γ^i_j(s) = Γ^i_jk(x(s)) ẋ^k(s)`
pub fn parallel_law(curve: &Curve, conn: &ConnectionField) -> Result<TransportLaw> {
    check_dims(curve, conn.dim())?;
    let (c, k) = (curve.clone(), conn.clone());
    Ok(TransportLaw::from_fn(
        curve.dim(),
        curve.domain(),
        move |s| k.christoffels(&c.position(s)).contract_last(&c.velocity(s)),
    ))
}

/// Parallel law plus the deformation `B(s)`.
pub fn law_with_deformation(
    curve: &Curve,
    conn: &ConnectionField,
    d: &DeformationField,
) -> Result<TransportLaw> {
    check_dims(curve, conn.dim())?;
    if d.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: curve.dim(),
            found: d.dim(),
        });
    }
    let (cd, dd) = (curve.domain(), d.domain());
    if dd.min > cd.min || dd.max < cd.max {
        return Err(Error::InvalidParameter(
            "deformation field does not cover the curve".into(),
        ));
    }
    let b = d.b.clone();
    Ok(parallel_law(curve, conn)?.plus(b))
}

/// Covariant acceleration `a^i = ẍ^i + Γ^i_jk ẋ^j ẋ^k`.
pub fn covariant_acceleration(curve: &Curve, conn: &ConnectionField, s: f64) -> Result<Vec<f64>> {
    let acc = curve.acceleration(s)?;
    let (x, u) = (curve.position(s), curve.velocity(s));
    Ok(conn.covariant_along(&x, &u, &u, &acc))
}

/// `M^i_j = (u^i a_j - a^i u_j)` with lowered indices taken with `g`.
fn antisymmetric_generator(g: &Matrix, u: &[f64], a: &[f64]) -> Matrix {
    let (u_low, a_low) = (g.mul_vec(u), g.mul_vec(a));
    Matrix::from_fn(u.len(), |i, j| u[i] * a_low[j] - a[i] * u_low[j])
}

fn sample_grid(domain: Domain) -> Vec<f64> {
    domain.linspace(PRECONDITION_SAMPLES)
}

/// Fermi-Walker deformation `B^i_j = (u^i a_j - a^i u_j) / g(u,u)`.
pub fn fermi_walker_b(curve: &Curve, metric: &MetricField) -> Result<DeformationField> {
    check_dims(curve, metric.dim())?;
    if !curve.has_acceleration() {
        return Err(Error::MissingAcceleration);
    }
    for s in sample_grid(curve.domain()) {
        let (x, u) = (curve.position(s), curve.velocity(s));
        let norm = metric.inner(&x, &u, &u);
        let scale: f64 = u.iter().map(|v| v * v).sum();
        if !(norm.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
            return Err(Error::NullVelocity { s });
        }
    }
    let conn = ConnectionField::levi_civita(metric);
    let (c, m) = (curve.clone(), metric.clone());
    let n = curve.dim();
    Ok(DeformationField::new(n, curve.domain(), move |s| {
        let (x, u) = (c.position(s), c.velocity(s));
        let Ok(a) = covariant_acceleration(&c, &conn, s) else {
            return Matrix::from_fn(n, |_, _| f64::NAN);
        };
        let g = m.g(&x);
        let norm = m.inner(&x, &u, &u);
        antisymmetric_generator(&g, &u, &a).scale(1.0 / norm)
    }))
}

/// Fermi deformation for a unit timelike velocity: with
/// `L_ij = u_i a_j`, `B = -2 L_[ij]` with the first index raised.
pub fn fermi_b(curve: &Curve, metric: &MetricField) -> Result<DeformationField> {
    check_dims(curve, metric.dim())?;
    if !curve.has_acceleration() {
        return Err(Error::MissingAcceleration);
    }
    for s in sample_grid(curve.domain()) {
        let (x, u) = (curve.position(s), curve.velocity(s));
        let norm = metric.inner(&x, &u, &u);
        if !((norm + 1.0).abs() <= UNIT_TIMELIKE_TOL) {
            return Err(Error::NotUnitTimelike { s, norm });
        }
    }
    let conn = ConnectionField::levi_civita(metric);
    let (c, m) = (curve.clone(), metric.clone());
    let n = curve.dim();
    Ok(DeformationField::new(n, curve.domain(), move |s| {
        let (x, u) = (c.position(s), c.velocity(s));
        let Ok(a) = covariant_acceleration(&c, &conn, s) else {
            return Matrix::from_fn(n, |_, _| f64::NAN);
        };
        let g = m.g(&x);
        let g_inv = m
            .g_inv(&x)
            .unwrap_or_else(|_| Matrix::from_fn(n, |_, _| f64::NAN));
        let (u_low, a_low) = (g.mul_vec(&u), g.mul_vec(&a));
        // L_ij = u_i a_j; antisymmetrize, scale by -2, raise the first index
        let l_anti = Matrix::from_fn(n, |i, j| 0.5 * (u_low[i] * a_low[j] - u_low[j] * a_low[i]));
        (&g_inv * &l_anti).scale(-2.0)
    }))
}

/// Truesdell deformation `B = θ I - Σ(X)` with expansion `θ = X^i_;i`.
pub fn truesdell_b(
    curve: &Curve,
    metric: &MetricField,
    field: &VectorField,
) -> Result<DeformationField> {
    check_dims(curve, metric.dim())?;
    if field.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: curve.dim(),
            found: field.dim(),
        });
    }
    let conn = ConnectionField::levi_civita(metric);
    // surface missing derivative data before building the law
    sigma_of_x(&conn, field, &curve.position(curve.domain().min))?;
    let (c, f) = (curve.clone(), field.clone());
    let n = curve.dim();
    Ok(DeformationField::new(n, curve.domain(), move |s| {
        let x = c.position(s);
        match (conn.covariant_derivative(&f, &x), sigma_of_x(&conn, &f, &x)) {
            (Ok(cov), Ok(sigma)) => &Matrix::identity(n).scale(cov.trace()) - &sigma,
            _ => Matrix::from_fn(n, |_, _| f64::NAN),
        }
    }))
}

/// Vorticity `ω^i_j = g^ik (X_k;j - X_j;k) / 2`.
pub fn vorticity(
    metric: &MetricField,
    conn: &ConnectionField,
    field: &VectorField,
    x: &[f64],
) -> Result<Matrix> {
    let n = metric.dim();
    let cov = conn.covariant_derivative(field, x)?;
    let g = metric.g(x);
    let g_inv = metric.g_inv(x)?;
    let low = &g * &cov; // X_k;j
    let omega_low = Matrix::from_fn(n, |k, j| 0.5 * (low[(k, j)] - low[(j, k)]));
    Ok(&g_inv * &omega_low)
}

/// Jaumann deformation `B = -ω`.
pub fn jaumann_b(
    curve: &Curve,
    metric: &MetricField,
    field: &VectorField,
) -> Result<DeformationField> {
    check_dims(curve, metric.dim())?;
    if field.dim() != curve.dim() {
        return Err(Error::DimensionMismatch {
            expected: curve.dim(),
            found: field.dim(),
        });
    }
    let conn = ConnectionField::levi_civita(metric);
    vorticity(metric, &conn, field, &curve.position(curve.domain().min))?;
    let (c, f, m) = (curve.clone(), field.clone(), metric.clone());
    let n = curve.dim();
    Ok(DeformationField::new(n, curve.domain(), move |s| {
        vorticity(&m, &conn, &f, &c.position(s))
            .map(|w| w.scale(-1.0))
            .unwrap_or_else(|_| Matrix::from_fn(n, |_, _| f64::NAN))
    }))
}
