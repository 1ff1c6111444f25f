//! Changes of frame along a curve, for tensor components and for transport
//! laws.
//!
//! A change `E_{i'} = A^i_{i'} E_i` is described by the matrix `A` (new basis
//! vectors as columns in the old basis). Contravariant components transform
//! with `A^{-1}`, covariant components with `A^T`, and a transport law picks
//! up the inhomogeneous term `A^{-1} dA/ds`.

use alloc::sync::Arc;
use core::fmt;

use crate::error::{Error, Result};
use crate::law::{Domain, MatrixFn, TransportLaw};
use crate::linalg::Matrix;
use crate::tensor::TensorComponents;

/// Tolerance on `forward * inverse = I` accepted by [`BasisChange::new`].
pub const BASIS_INVERSE_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct BasisChange {
    forward: Matrix,
    inverse: Matrix,
    derivative: Option<Matrix>,
}

impl BasisChange {
    /// Builds the change from `A`, inverting it.
    pub fn new(forward: Matrix) -> Result<Self> {
        let inverse = forward.inverse()?;
        Ok(Self {
            forward,
            inverse,
            derivative: None,
        })
    }

    /// Uses a caller-supplied inverse after checking it.
    pub fn with_inverse(forward: Matrix, inverse: Matrix) -> Result<Self> {
        if forward.dim() != inverse.dim() {
            return Err(Error::DimensionMismatch {
                expected: forward.dim(),
                found: inverse.dim(),
            });
        }
        let scale = forward.max_abs().max(1.0) * inverse.max_abs().max(1.0);
        if (&forward * &inverse).max_diff(&Matrix::identity(forward.dim()))
            > BASIS_INVERSE_TOL * scale
        {
            return Err(Error::InvalidParameter(
                "basis change inverse does not match forward matrix".into(),
            ));
        }
        Ok(Self {
            forward,
            inverse,
            derivative: None,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            forward: Matrix::identity(n),
            inverse: Matrix::identity(n),
            derivative: Some(Matrix::zeros(n)),
        }
    }

    pub fn with_derivative(mut self, d: Matrix) -> Self {
        self.derivative = Some(d);
        self
    }

    pub fn forward(&self) -> &Matrix {
        &self.forward
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn derivative(&self) -> Option<&Matrix> {
        self.derivative.as_ref()
    }

    pub fn dim(&self) -> usize {
        self.forward.dim()
    }

    /// The change back to the original frame.
    pub fn reversed(&self) -> Self {
        // d(A^{-1}) = -A^{-1} dA A^{-1}
        let derivative = self
            .derivative
            .as_ref()
            .map(|d| (&(&self.inverse * d) * &self.inverse).scale(-1.0));
        Self {
            forward: self.inverse.clone(),
            inverse: self.forward.clone(),
            derivative,
        }
    }

    /// `self` followed by `then`: `E'' = E' B = E A B`.
    pub fn compose(&self, then: &BasisChange) -> Result<Self> {
        if self.dim() != then.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: then.dim(),
            });
        }
        let derivative = match (&self.derivative, &then.derivative) {
            (Some(da), Some(db)) => Some(&(da * &then.forward) + &(&self.forward * db)),
            _ => None,
        };
        Ok(Self {
            forward: &self.forward * &then.forward,
            inverse: &then.inverse * &self.inverse,
            derivative,
        })
    }
}

/// Components of `t` in the new frame.
pub fn change_tensor_basis(t: &TensorComponents, ch: &BasisChange) -> Result<TensorComponents> {
    if t.is_scalar() {
        return Ok(t.clone());
    }
    if t.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: ch.dim(),
        });
    }
    t.transform_slots(&ch.inverse, &ch.forward.transpose())
}

/// A frame change that varies along the curve.
#[derive(Clone)]
pub struct BasisChangeField {
    domain: Domain,
    dim: usize,
    forward: MatrixFn,
    derivative: Option<MatrixFn>,
    fd_step: f64,
}

impl fmt::Debug for BasisChangeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisChangeField")
            .field("domain", &self.domain)
            .field("dim", &self.dim)
            .field("analytic_derivative", &self.derivative.is_some())
            .finish()
    }
}

impl BasisChangeField {
    /// `dA/ds` will be taken by central differences with step
    /// `1e-6 * domain length` unless [`with_derivative`](Self::with_derivative)
    /// is used.
    pub fn new(
        dim: usize,
        domain: Domain,
        forward: impl Fn(f64) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Self {
            domain,
            dim,
            forward: Arc::new(forward),
            derivative: None,
            fd_step: 1e-6 * domain.length(),
        }
    }

    pub fn constant(m: Matrix, domain: Domain) -> Self {
        let n = m.dim();
        Self::new(n, domain, move |_| m.clone()).with_derivative(move |_| Matrix::zeros(n))
    }

    pub fn with_derivative(mut self, d: impl Fn(f64) -> Matrix + Send + Sync + 'static) -> Self {
        self.derivative = Some(Arc::new(d));
        self
    }

    pub fn without_derivative(mut self) -> Self {
        self.derivative = None;
        self
    }

    pub fn with_fd_step(mut self, h: f64) -> Self {
        self.fd_step = h;
        self
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The change at `s`, including `dA/ds`.
    pub fn at(&self, s: f64) -> Result<BasisChange> {
        self.domain.check(s)?;
        let forward = (self.forward)(s);
        if forward.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: forward.dim(),
            });
        }
        let derivative = match &self.derivative {
            Some(d) => d(s),
            None => self.fd_derivative(s)?,
        };
        Ok(BasisChange::new(forward)?.with_derivative(derivative))
    }

    fn fd_derivative(&self, s: f64) -> Result<Matrix> {
        let h = self.fd_step;
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::MissingDerivative);
        }
        let Domain { min, max } = self.domain;
        let f = &self.forward;
        if s - h >= min && s + h <= max {
            Ok((&f(s + h) - &f(s - h)).scale(0.5 / h))
        } else {
            let dir = if s + 2.0 * h <= max { 1.0 } else { -1.0 };
            let mut acc = f(s).scale(-3.0);
            acc.axpy(4.0, &f(s + dir * h));
            acc.axpy(-1.0, &f(s + 2.0 * dir * h));
            Ok(acc.scale(dir / (2.0 * h)))
        }
    }

    /// The change back to the original frame, pointwise.
    pub fn reversed(&self) -> Self {
        let this = self.clone();
        let this_d = self.clone();
        let mut out = Self::new(self.dim, self.domain, move |s| {
            this.at(s)
                .map(|c| c.inverse)
                .unwrap_or_else(|_| Matrix::from_fn(this.dim, |_, _| f64::NAN))
        });
        out.derivative = Some(Arc::new(move |s| {
            this_d
                .at(s)
                .ok()
                .and_then(|c| c.reversed().derivative)
                .unwrap_or_else(|| Matrix::from_fn(this_d.dim, |_, _| f64::NAN))
        }));
        out
    }
}

/// Transport law expressed in the frame `E' = E A`:
/// `Γ' = A^{-1} Γ A + A^{-1} dA/ds`.
pub fn change_law_basis(law: &TransportLaw, ch: &BasisChangeField) -> Result<TransportLaw> {
    if law.dim() != ch.dim() {
        return Err(Error::DimensionMismatch {
            expected: law.dim(),
            found: ch.dim(),
        });
    }
    let (ld, cd) = (law.domain(), ch.domain());
    if ld.min < cd.min || ld.max > cd.max {
        return Err(Error::InvalidParameter(
            "basis change does not cover the law's domain".into(),
        ));
    }
    // fail early on a singular change at the ends and the midpoint
    for s in [ld.min, ld.midpoint(), ld.max] {
        ch.at(s)?;
    }
    let breakpoints = law.breakpoints().to_vec();
    let law = law.clone();
    let ch = ch.clone();
    let n = law.dim();
    TransportLaw::from_fn(n, ld, move |s| match ch.at(s) {
        Ok(c) => {
            let gamma = law.coefficients(s);
            let da = c.derivative.clone().unwrap_or_else(|| Matrix::zeros(n));
            let mut out = &(&c.inverse * &gamma) * &c.forward;
            out.axpy(1.0, &(&c.inverse * &da));
            out
        }
        // surfaces as a non-finite solve
        Err(_) => Matrix::from_fn(n, |_, _| f64::NAN),
    })
    .with_breakpoints(breakpoints)
}
