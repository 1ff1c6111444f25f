use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::interp::CubicSpline;
use crate::law::Domain;

pub type CurveFn = Arc<dyn Fn(f64) -> Vec<f64> + Send + Sync>;

/// Parametrized path in chart coordinates.
#[derive(Clone)]
pub struct Curve {
    dim: usize,
    domain: Domain,
    position: CurveFn,
    velocity: CurveFn,
    acceleration: Option<CurveFn>,
}

impl fmt::Debug for Curve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Curve")
            .field("dim", &self.dim)
            .field("domain", &self.domain)
            .field("acceleration", &self.acceleration.is_some())
            .finish()
    }
}

impl Curve {
    pub fn new(
        dim: usize,
        domain: Domain,
        position: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
        velocity: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            domain,
            position: Arc::new(position),
            velocity: Arc::new(velocity),
            acceleration: None,
        }
    }

    /// Coordinate second derivative `ẍ`.
    pub fn with_acceleration(
        mut self,
        a: impl Fn(f64) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        self.acceleration = Some(Arc::new(a));
        self
    }

    /// Natural cubic spline through `(s_k, x_k)`; velocity and acceleration
    /// are the spline's derivatives.
    pub fn tabulated(s: Vec<f64>, points: Vec<Vec<f64>>) -> Result<Self> {
        if s.len() != points.len() {
            return Err(Error::InvalidSamples(alloc::format!(
                "{} parameters but {} points",
                s.len(),
                points.len()
            )));
        }
        let dim = points
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::InvalidSamples("no points".into()))?;
        if dim == 0 {
            return Err(Error::InvalidSamples("points have no coordinates".into()));
        }
        for p in &points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.len(),
                });
            }
        }
        let splines: Vec<CubicSpline> = (0..dim)
            .map(|c| CubicSpline::natural(s.clone(), points.iter().map(|p| p[c]).collect()))
            .collect::<Result<_>>()?;
        let domain = Domain::new(s[0], s[s.len() - 1])?;
        let splines = Arc::new(splines);
        let (sp, sv, sa) = (splines.clone(), splines.clone(), splines);
        Ok(Self::new(
            dim,
            domain,
            move |t| sp.iter().map(|c| c.eval(t)).collect(),
            move |t| sv.iter().map(|c| c.derivative(t)).collect(),
        )
        .with_acceleration(move |t| sa.iter().map(|c| c.second_derivative(t)).collect()))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn position(&self, s: f64) -> Vec<f64> {
        (self.position)(s)
    }

    pub fn velocity(&self, s: f64) -> Vec<f64> {
        (self.velocity)(s)
    }

    pub fn has_acceleration(&self) -> bool {
        self.acceleration.is_some()
    }

    pub fn acceleration(&self, s: f64) -> Result<Vec<f64>> {
        self.acceleration
            .as_ref()
            .map(|a| a(s))
            .ok_or(Error::MissingAcceleration)
    }

    /// Largest mismatch between the supplied velocity and a central
    /// difference of the position, over `k` interior sample points.
    pub fn velocity_consistency(&self, k: usize, h: f64) -> f64 {
        let Domain { min, max } = self.domain;
        if max - min <= 2.0 * h {
            return 0.0;
        }
        let grid = crate::law::linspace(min + h, max - h, k.max(2));
        let mut worst: f64 = 0.0;
        for s in grid {
            let (p, m, v) = (self.position(s + h), self.position(s - h), self.velocity(s));
            for i in 0..self.dim {
                worst = worst.max(((p[i] - m[i]) / (2.0 * h) - v[i]).abs());
            }
        }
        worst
    }
}
