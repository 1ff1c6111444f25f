//! One-dimensional interpolation on strictly increasing grids.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// How tabulated samples are turned into a function of `s`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Interpolation {
    #[default]
    Linear,
    /// Natural cubic spline (C² across knots).
    Cubic,
}

pub(crate) fn check_grid(s: &[f64]) -> Result<()> {
    if s.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidSamples("non-finite grid value".into()));
    }
    if let Some(k) = s.windows(2).position(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidSamples(alloc::format!(
            "grid not strictly increasing at index {}",
            k + 1
        )));
    }
    Ok(())
}

/// Index `i` with `s[i] <= x <= s[i+1]`, clamped to the end intervals.
pub(crate) fn bracket(s: &[f64], x: f64) -> usize {
    let last = s.len() - 2;
    match s.iter().position(|&v| v > x) {
        Some(0) => 0,
        Some(k) => (k - 1).min(last),
        None => last,
    }
}

/// Natural cubic spline through `(x_k, y_k)`.
#[derive(Clone, Debug)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    // second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn natural(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() || x.len() < 2 {
            return Err(Error::InvalidSamples(
                "spline needs at least two matching samples".into(),
            ));
        }
        check_grid(&x)?;
        let n = x.len();
        let mut m = vec![0.0; n];
        if n > 2 {
            // tridiagonal system for interior second derivatives (Thomas algorithm)
            let k = n - 2;
            let mut diag = vec![0.0; k];
            let mut upper = vec![0.0; k];
            let mut rhs = vec![0.0; k];
            for i in 1..n - 1 {
                let h0 = x[i] - x[i - 1];
                let h1 = x[i + 1] - x[i];
                diag[i - 1] = 2.0 * (h0 + h1);
                upper[i - 1] = h1;
                rhs[i - 1] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            }
            for i in 1..k {
                let lower = x[i + 1] - x[i];
                let w = lower / diag[i - 1];
                diag[i] -= w * upper[i - 1];
                rhs[i] -= w * rhs[i - 1];
            }
            m[k] = rhs[k - 1] / diag[k - 1];
            for i in (0..k - 1).rev() {
                m[i + 1] = (rhs[i] - upper[i] * m[i + 2]) / diag[i];
            }
        }
        Ok(Self { x, y, m })
    }

    fn segment(&self, t: f64) -> (usize, f64, f64, f64) {
        let i = bracket(&self.x, t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        (i, h, a, b)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let (i, h, a, b) = self.segment(t);
        a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn derivative(&self, t: f64) -> f64 {
        let (i, h, a, b) = self.segment(t);
        (self.y[i + 1] - self.y[i]) / h - (3.0 * a * a - 1.0) * h / 6.0 * self.m[i]
            + (3.0 * b * b - 1.0) * h / 6.0 * self.m[i + 1]
    }

    pub fn second_derivative(&self, t: f64) -> f64 {
        let (i, _, a, b) = self.segment(t);
        a * self.m[i] + b * self.m[i + 1]
    }
}
