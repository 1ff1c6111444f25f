//! Transport matrices, their action on tensors, and the derivation a
//! transport law induces along its curve.
//!
//! Sign conventions: `H(t, s)` carries components at `s` to components at
//! `t` and solves `∂H(t,s)/∂t = -Γ(t) H(t,s)` with `H(s,s) = I`. Upper
//! indices are carried by `H`, lower indices by the inverse matrix
//! `H(s, t)` placed transposed, so that pairings are preserved. The
//! induced derivation is `(DT)^i = dT^i/ds + Γ^i_k T^k` on upper indices
//! and `(DT)_j = dT_j/ds - Γ^k_j T_k` on lower ones, and annihilates every
//! transported field.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::law::{Domain, TransportLaw};
use crate::linalg::Matrix;
use crate::ode::solve_fundamental_on_mesh;
use crate::tensor::TensorComponents;

/// Number of RK4 steps per domain length used when no step is given.
pub const DEFAULT_STEPS_PER_DOMAIN: f64 = 2000.0;

/// Relative finite-difference step for field derivatives.
pub const DEFAULT_FIELD_FD_FRACTION: f64 = 1e-6;

/// Default integration step for a law: domain length / 2000.
pub fn default_step(domain: Domain) -> f64 {
    let len = domain.length();
    if len > 0.0 {
        len / DEFAULT_STEPS_PER_DOMAIN
    } else {
        1e-3
    }
}

/// Two-point operator `H(t, s)` together with its inverse `H(s, t)`.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TransportMatrix {
    pub s: f64,
    pub t: f64,
    pub h: Matrix,
    pub h_inv: Matrix,
}

impl TransportMatrix {
    pub fn identity(n: usize, s: f64) -> Self {
        Self {
            s,
            t: s,
            h: Matrix::identity(n),
            h_inv: Matrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.h.dim()
    }

    /// `max |H H_inv - I|`
    pub fn inverse_residual(&self) -> f64 {
        (&self.h * &self.h_inv).max_diff(&Matrix::identity(self.dim()))
    }
}

/// Computes `H(t, s)` by integrating `dY/dτ = -Γ(τ) Y` from `s` to `t`, and
/// `H(s, t)` by integrating back from `t` to `s`.
///
/// Every solve for a law uses one mesh: `domain.min + k step` plus the law's
/// breakpoints, cut short at the ends. Transports between different points
/// therefore share nodes, and both matrices depend smoothly on `s` and `t`.
pub fn transport_matrix(law: &TransportLaw, s: f64, t: f64, step: f64) -> Result<TransportMatrix> {
    let domain = law.domain();
    domain.check(s)?;
    domain.check(t)?;
    let n = law.dim();
    if s == t || domain.length() == 0.0 {
        return Ok(TransportMatrix::identity(n, s));
    }
    let z = |tau: f64| law.coefficients(tau).scale(-1.0);
    let (anchor, bps) = (domain.min, law.breakpoints());
    let h = solve_fundamental_on_mesh(z, n, s, t, anchor, step, bps)?;
    let h_inv = solve_fundamental_on_mesh(z, n, t, s, anchor, step, bps)?;
    Ok(TransportMatrix { s, t, h, h_inv })
}

/// `H(t, s) = Y(t, s0) Y(s, s0)^{-1}` with an arbitrary reference point `s0`.
/// The result does not depend on `s0` up to integration error; this exists
/// to check that.
pub fn transport_matrix_via_reference(
    law: &TransportLaw,
    s: f64,
    t: f64,
    s0: f64,
    step: f64,
) -> Result<TransportMatrix> {
    let domain = law.domain();
    domain.check(s)?;
    domain.check(t)?;
    domain.check(s0)?;
    let n = law.dim();
    let z = |tau: f64| law.coefficients(tau).scale(-1.0);
    let (anchor, bps) = (domain.min, law.breakpoints());
    let y_t = solve_fundamental_on_mesh(z, n, s0, t, anchor, step, bps)?;
    let y_s = solve_fundamental_on_mesh(z, n, s0, s, anchor, step, bps)?;
    let h = &y_t * &y_s.inverse()?;
    let h_inv = &y_s * &y_t.inverse()?;
    Ok(TransportMatrix { s, t, h, h_inv })
}

/// Applies the transport to a tensor: one factor of `H` per upper slot, one
/// factor of the inverse (transposed placement) per lower slot. Scalars are
/// returned unchanged.
pub fn transport_tensor(
    tm: &TransportMatrix,
    tensor: &TensorComponents,
) -> Result<TensorComponents> {
    if tensor.is_scalar() {
        return Ok(tensor.clone());
    }
    if tensor.dim() != tm.dim() {
        return Err(Error::DimensionMismatch {
            expected: tm.dim(),
            found: tensor.dim(),
        });
    }
    tensor.transform_slots(&tm.h, &tm.h_inv.transpose())
}

type FieldFn = Arc<dyn Fn(f64) -> Result<TensorComponents> + Send + Sync>;

/// A tensor field of fixed type given along a parameter interval.
#[derive(Clone)]
pub struct TensorFieldAlongPath {
    domain: Domain,
    p: usize,
    q: usize,
    dim: usize,
    value: FieldFn,
    derivative: Option<FieldFn>,
    fd_step: f64,
}

impl fmt::Debug for TensorFieldAlongPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TensorFieldAlongPath")
            .field("domain", &self.domain)
            .field("type", &(self.p, self.q))
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl TensorFieldAlongPath {
    /// Field of type `(p, q)` in dimension `dim`; derivatives fall back to
    /// central differences.
    pub fn new(
        domain: Domain,
        (p, q): (usize, usize),
        dim: usize,
        value: impl Fn(f64) -> TensorComponents + Send + Sync + 'static,
    ) -> Self {
        Self::fallible(domain, (p, q), dim, move |s| Ok(value(s)))
    }

    pub fn fallible(
        domain: Domain,
        (p, q): (usize, usize),
        dim: usize,
        value: impl Fn(f64) -> Result<TensorComponents> + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            p,
            q,
            dim,
            value: Arc::new(value),
            derivative: None,
            fd_step: DEFAULT_FIELD_FD_FRACTION * domain.length(),
        }
    }

    /// Constant components over the domain.
    pub fn constant(domain: Domain, tensor: TensorComponents) -> Self {
        let (p, q, dim) = (
            tensor.contravariant_rank(),
            tensor.covariant_rank(),
            tensor.dim(),
        );
        let zero = tensor.scale(0.0);
        Self::new(domain, (p, q), dim, move |_| tensor.clone())
            .with_derivative(move |_| zero.clone())
    }

    pub fn with_derivative(
        mut self,
        d: impl Fn(f64) -> TensorComponents + Send + Sync + 'static,
    ) -> Self {
        self.derivative = Some(Arc::new(move |s| Ok(d(s))));
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn tensor_type(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn value_at(&self, s: f64) -> Result<TensorComponents> {
        self.domain.check(s)?;
        let v = (self.value)(s)?;
        self.check_type(&v)?;
        Ok(v)
    }

    /// Componentwise `d/ds`, analytic if supplied, otherwise central
    /// differences (second-order one-sided near the ends).
    pub fn derivative_at(&self, s: f64) -> Result<TensorComponents> {
        self.domain.check(s)?;
        if self.domain.length() == 0.0 {
            return Err(Error::DegenerateDomain);
        }
        if let Some(d) = &self.derivative {
            let v = d(s)?;
            self.check_type(&v)?;
            return Ok(v);
        }
        let mut acc: Option<TensorComponents> = None;
        for (node, w) in fd_stencil(self.domain, s, self.fd_step)? {
            let v = self.value_at(node)?.scale(w);
            acc = Some(match acc {
                None => v,
                Some(a) => a.linear_combination(1.0, &v, 1.0)?,
            });
        }
        Ok(acc.expect("stencil is nonempty"))
    }

    fn check_type(&self, v: &TensorComponents) -> Result<()> {
        if (v.contravariant_rank(), v.covariant_rank()) != (self.p, self.q) {
            return Err(Error::RankMismatch {
                expected: (self.p, self.q),
                found: (v.contravariant_rank(), v.covariant_rank()),
            });
        }
        if !v.is_scalar() && v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }
}

/// `(node, weight)` pairs of the first-derivative stencil at `s`: central
/// differences of width `h`, second-order one-sided near the ends.
fn fd_stencil(domain: Domain, s: f64, h: f64) -> Result<Vec<(f64, f64)>> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::InvalidStep(h));
    }
    let Domain { min, max } = domain;
    if s - h >= min && s + h <= max {
        return Ok(alloc::vec![(s + h, 0.5 / h), (s - h, -0.5 / h)]);
    }
    // (-3 f0 + 4 f1 - f2) / 2h, pointing into the domain
    let dir = if s + 2.0 * h <= max { 1.0 } else { -1.0 };
    if !domain.contains(s + 2.0 * dir * h) {
        return Err(Error::InvalidStep(h));
    }
    let c = dir / (2.0 * h);
    Ok(alloc::vec![
        (s, -3.0 * c),
        (s + dir * h, 4.0 * c),
        (s + 2.0 * dir * h, -c)
    ])
}

/// `Γ` terms of the induced derivation applied to fixed components:
/// `+Γ` on every upper slot, `-Γ^T` on every lower slot.
pub fn connection_terms(gamma: &Matrix, tensor: &TensorComponents) -> Result<TensorComponents> {
    if tensor.is_scalar() {
        return Ok(tensor.scale(0.0));
    }
    if tensor.dim() != gamma.dim() {
        return Err(Error::DimensionMismatch {
            expected: gamma.dim(),
            found: tensor.dim(),
        });
    }
    let gamma_t = gamma.transpose();
    let mut acc = tensor.scale(0.0);
    for slot in 0..tensor.rank() {
        let upper = slot < tensor.contravariant_rank();
        let term = tensor.apply_to_slot(slot, if upper { gamma } else { &gamma_t });
        acc = acc.linear_combination(1.0, &term, if upper { 1.0 } else { -1.0 })?;
    }
    Ok(acc)
}

/// Components of the derivation induced by `law`, applied to `field` at `s`.
pub fn derivation_at(
    law: &TransportLaw,
    field: &TensorFieldAlongPath,
    s: f64,
) -> Result<TensorComponents> {
    law.domain().check(s)?;
    if field.dim != law.dim() && (field.p + field.q) > 0 {
        return Err(Error::DimensionMismatch {
            expected: law.dim(),
            found: field.dim,
        });
    }
    let d = field.derivative_at(s)?;
    if field.p + field.q == 0 {
        return Ok(d);
    }
    let gamma = law.coefficients_at(s)?;
    let value = field.value_at(s)?;
    let terms = connection_terms(&gamma, &value)?;
    d.linear_combination(1.0, &terms, 1.0)
}

/// The derivation at `t` of the field `τ -> S(s -> τ) T0`. Identically zero
/// in exact arithmetic; the returned components are the numerical residual.
pub fn derivation_of_transported(
    law: &TransportLaw,
    t0: &TensorComponents,
    s: f64,
    t: f64,
    step: f64,
) -> Result<TensorComponents> {
    Ok(derivations_of_transported(law, core::slice::from_ref(t0), s, t, step)?.remove(0))
}

/// [`derivation_of_transported`] for several initial tensors, sharing the
/// transport solves between them.
pub fn derivations_of_transported(
    law: &TransportLaw,
    tensors: &[TensorComponents],
    s: f64,
    t: f64,
    step: f64,
) -> Result<Vec<TensorComponents>> {
    let domain = law.domain();
    domain.check(s)?;
    domain.check(t)?;
    if domain.length() == 0.0 {
        return Err(Error::DegenerateDomain);
    }
    if let Some(bad) = tensors
        .iter()
        .find(|t0| !t0.is_scalar() && t0.dim() != law.dim())
    {
        return Err(Error::DimensionMismatch {
            expected: law.dim(),
            found: bad.dim(),
        });
    }
    let stencil = fd_stencil(domain, t, DEFAULT_FIELD_FD_FRACTION * domain.length())?;
    let at_t = transport_matrix(law, s, t, step)?;
    let nodes = stencil
        .iter()
        .map(|&(tau, w)| Ok((transport_matrix(law, s, tau, step)?, w)))
        .collect::<Result<Vec<_>>>()?;
    let gamma = law.coefficients_at(t)?;
    tensors
        .iter()
        .map(|t0| {
            let mut d = connection_terms(&gamma, &transport_tensor(&at_t, t0)?)?;
            for (tm, w) in &nodes {
                d = d.linear_combination(1.0, &transport_tensor(tm, t0)?, *w)?;
            }
            Ok(d)
        })
        .collect()
}

/// Recovers `Γ(s) = -∂H(t,s)/∂t |_{t=s}` from transport matrices alone, with
/// Richardson-extrapolated central differences of width `h` (fourth-order
/// one-sided differences at the ends of the domain).
pub fn coefficients_from_transport(
    law: &TransportLaw,
    s: f64,
    h: f64,
    step: f64,
) -> Result<Matrix> {
    let domain = law.domain();
    domain.check(s)?;
    if domain.length() == 0.0 {
        return Err(Error::DegenerateDomain);
    }
    if !(h > 0.0) {
        return Err(Error::InvalidStep(h));
    }
    let step = step.min(h);
    let at = |tau: f64| -> Result<Matrix> { Ok(transport_matrix(law, s, tau, step)?.h) };
    let d = if s - 2.0 * h >= domain.min && s + 2.0 * h <= domain.max {
        let central = |w: f64| -> Result<Matrix> { Ok((&at(s + w)? - &at(s - w)?).scale(0.5 / w)) };
        let coarse = central(2.0 * h)?;
        let fine = central(h)?;
        (&fine.scale(4.0) - &coarse).scale(1.0 / 3.0)
    } else {
        let dir = if s + 4.0 * h <= domain.max { 1.0 } else { -1.0 };
        if !domain.contains(s + 4.0 * dir * h) {
            return Err(Error::InvalidStep(h));
        }
        let weights = [-25.0, 48.0, -36.0, 16.0, -3.0];
        let mut acc = Matrix::zeros(law.dim());
        for (k, w) in weights.iter().enumerate() {
            acc.axpy(*w, &at(s + dir * k as f64 * h)?);
        }
        acc.scale(dir / (12.0 * h))
    };
    Ok(d.scale(-1.0))
}

/// `Γ` columns recovered by applying the induced derivation to the basis
/// fields `E_i`: `D E_i = Γ^k_i E_k`.
pub fn coefficients_from_derivation(law: &TransportLaw, s: f64) -> Result<Matrix> {
    let n = law.dim();
    let mut gamma = Matrix::zeros(n);
    for i in 0..n {
        let mut e = alloc::vec![0.0; n];
        e[i] = 1.0;
        let field = TensorFieldAlongPath::constant(law.domain(), TensorComponents::vector(&e));
        let col = derivation_at(law, &field, s)?;
        for (k, v) in col.values().iter().enumerate() {
            gamma[(k, i)] = *v;
        }
    }
    Ok(gamma)
}

/// Transport matrices for a batch of `(s, t)` pairs.
pub fn transport_matrices(
    law: &TransportLaw,
    pairs: &[(f64, f64)],
    step: f64,
) -> Result<Vec<TransportMatrix>> {
    pairs
        .iter()
        .map(|&(s, t)| transport_matrix(law, s, t, step))
        .collect()
}
