//! Transport laws: the coefficient matrix `s -> Γ(s)` along one curve.

use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::interp::{CubicSpline, Interpolation};
use crate::linalg::Matrix;

/// Closed parameter interval `[min, max]`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Domain {
    pub min: f64,
    pub max: f64,
}

impl Domain {
    pub fn new(min: f64, max: f64) -> Result<Self> {
        if !(min.is_finite() && max.is_finite()) || min > max {
            return Err(Error::InvalidParameter(
                "domain bounds must be finite with min <= max".into(),
            ));
        }
        Ok(Self { min, max })
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.max - self.min
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.min && s <= self.max
    }

    pub fn check(&self, s: f64) -> Result<()> {
        if self.contains(s) {
            Ok(())
        } else {
            Err(Error::OutOfDomain {
                s,
                min: self.min,
                max: self.max,
            })
        }
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.min + self.max)
    }

    /// `k >= 2` evenly spaced points including both ends.
    pub fn linspace(&self, k: usize) -> Vec<f64> {
        linspace(self.min, self.max, k)
    }
}

pub(crate) fn linspace(a: f64, b: f64, k: usize) -> Vec<f64> {
    match k {
        0 => Vec::new(),
        1 => alloc::vec![a],
        _ => (0..k)
            .map(|i| {
                if i == k - 1 {
                    b
                } else {
                    a + (b - a) * i as f64 / (k - 1) as f64
                }
            })
            .collect(),
    }
}

pub type MatrixFn = Arc<dyn Fn(f64) -> Matrix + Send + Sync>;

#[derive(Clone)]
enum Coefficients {
    Function(MatrixFn),
    Tabulated(Tabulated),
}

#[derive(Clone)]
struct Tabulated {
    s: Vec<f64>,
    samples: Vec<Matrix>,
    interpolation: Interpolation,
    // one spline per matrix entry, only for cubic interpolation
    splines: Vec<CubicSpline>,
}

impl Tabulated {
    fn eval(&self, s: f64) -> Matrix {
        let n = self.samples[0].dim();
        match self.interpolation {
            Interpolation::Linear => {
                let i = crate::interp::bracket(&self.s, s);
                let (s0, s1) = (self.s[i], self.s[i + 1]);
                let w = if s1 > s0 { (s - s0) / (s1 - s0) } else { 0.0 };
                let mut m = self.samples[i].scale(1.0 - w);
                m.axpy(w, &self.samples[i + 1]);
                m
            }
            Interpolation::Cubic => Matrix::from_fn(n, |i, j| self.splines[i * n + j].eval(s)),
        }
    }
}

/// Coefficient matrix function of an S-transport along one curve, with
/// `Γ^i_j` stored as row `i`, column `j`.
#[derive(Clone)]
pub struct TransportLaw {
    domain: Domain,
    dim: usize,
    coefficients: Coefficients,
    // sorted parameters where Γ is only piecewise smooth
    breakpoints: Arc<[f64]>,
}

impl fmt::Debug for TransportLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.coefficients {
            Coefficients::Function(_) => "function",
            Coefficients::Tabulated(_) => "tabulated",
        };
        f.debug_struct("TransportLaw")
            .field("domain", &self.domain)
            .field("dim", &self.dim)
            .field("kind", &kind)
            .finish()
    }
}

impl TransportLaw {
    pub fn from_fn(
        dim: usize,
        domain: Domain,
        f: impl Fn(f64) -> Matrix + Send + Sync + 'static,
    ) -> Self {
        Self::from_shared_fn(dim, domain, Arc::new(f))
    }

    pub fn from_shared_fn(dim: usize, domain: Domain, f: MatrixFn) -> Self {
        Self {
            domain,
            dim,
            coefficients: Coefficients::Function(f),
            breakpoints: Arc::from([]),
        }
    }

    pub fn constant(gamma: Matrix, domain: Domain) -> Self {
        let dim = gamma.dim();
        Self::from_fn(dim, domain, move |_| gamma.clone())
    }

    /// `Γ ≡ 0`.
    pub fn trivial(dim: usize, domain: Domain) -> Self {
        Self::constant(Matrix::zeros(dim), domain)
    }

    /// Law interpolated from samples `(s_k, Γ_k)` on a strictly increasing grid.
    pub fn tabulated(
        s: Vec<f64>,
        samples: Vec<Matrix>,
        interpolation: Interpolation,
    ) -> Result<Self> {
        if s.len() != samples.len() {
            return Err(Error::InvalidSamples(alloc::format!(
                "{} parameter values but {} matrices",
                s.len(),
                samples.len()
            )));
        }
        if s.len() < 2 {
            return Err(Error::InvalidSamples(
                "at least two samples are required".into(),
            ));
        }
        crate::interp::check_grid(&s)?;
        let dim = samples[0].dim();
        for m in &samples {
            if m.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            if !m.is_finite() {
                return Err(Error::InvalidSamples("non-finite coefficient".into()));
            }
        }
        let splines = match interpolation {
            Interpolation::Linear => Vec::new(),
            Interpolation::Cubic => (0..dim * dim)
                .map(|k| {
                    let ys: Vec<f64> = samples.iter().map(|m| m.as_slice()[k]).collect();
                    CubicSpline::natural(s.clone(), ys)
                })
                .collect::<Result<_>>()?,
        };
        let domain = Domain::new(s[0], s[s.len() - 1])?;
        let breakpoints = Arc::from(&s[1..s.len() - 1]);
        Ok(Self {
            domain,
            dim,
            coefficients: Coefficients::Tabulated(Tabulated {
                s,
                samples,
                interpolation,
                splines,
            }),
            breakpoints,
        })
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        self.domain
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `Γ(s)`; callers are expected to stay inside the domain.
    pub fn coefficients(&self, s: f64) -> Matrix {
        match &self.coefficients {
            Coefficients::Function(f) => f(s),
            Coefficients::Tabulated(t) => t.eval(s),
        }
    }

    /// Checked evaluation.
    pub fn coefficients_at(&self, s: f64) -> Result<Matrix> {
        self.domain.check(s)?;
        let m = self.coefficients(s);
        if m.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: m.dim(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite { s });
        }
        Ok(m)
    }

    /// The tabulated samples, if this law was built from samples.
    pub fn samples(&self) -> Option<(&[f64], &[Matrix])> {
        match &self.coefficients {
            Coefficients::Tabulated(t) => Some((&t.s, &t.samples)),
            Coefficients::Function(_) => None,
        }
    }

    /// Parameters where `Γ` is only piecewise smooth (the interior knots of
    /// a tabulated law); the integrator steps onto them.
    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    /// Declares where `Γ` is only piecewise smooth.
    pub fn with_breakpoints(mut self, mut breakpoints: Vec<f64>) -> Result<Self> {
        if breakpoints.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidSamples("non-finite breakpoint".into()));
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();
        self.breakpoints = Arc::from(breakpoints);
        Ok(self)
    }

    /// Pointwise sum `Γ(s) + B(s)`; keeps the breakpoints of `self`.
    pub fn plus(&self, extra: MatrixFn) -> Self {
        let base = self.clone();
        let mut out = Self::from_fn(self.dim, self.domain, move |s| {
            let mut m = base.coefficients(s);
            m.axpy(1.0, &extra(s));
            m
        });
        out.breakpoints = self.breakpoints.clone();
        out
    }

    /// Sampled continuity check: max entry jump between adjacent evaluations
    /// on a grid of `k` points, divided by the grid spacing.
    pub fn max_sampled_slope(&self, k: usize) -> Result<f64> {
        let grid = self.domain.linspace(k.max(2));
        let mut prev = self.coefficients_at(grid[0])?;
        let mut worst: f64 = 0.0;
        for w in grid.windows(2) {
            let next = self.coefficients_at(w[1])?;
            let ds = w[1] - w[0];
            if ds > 0.0 {
                worst = worst.max(prev.max_diff(&next) / ds);
            }
            prev = next;
        }
        Ok(worst)
    }
}
