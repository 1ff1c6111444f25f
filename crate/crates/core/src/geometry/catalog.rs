//! Built-in manifolds and curves addressable by string identifiers.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

// float math is not inherent on f64 in core; the lint misfires on the unstable methods
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::law::Domain;
use crate::linalg::Matrix;

use super::curve::Curve;
use super::metric::{Array3, MetricField};

/// Largest dimension accepted for the `-n` families.
pub const MAX_CATALOG_DIM: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ManifoldId {
    Euclidean(usize),
    Sphere2,
    Minkowski(usize),
    PolarPlane,
}

/// `(identifier pattern, description)` for every built-in manifold.
pub const MANIFOLDS: &[(&str, &str)] = &[
    (
        "euclidean-n",
        "flat R^n, Cartesian chart, metric I (1 <= n <= 8)",
    ),
    (
        "sphere-2",
        "unit 2-sphere, chart (theta, phi), metric diag(1, sin^2 theta)",
    ),
    (
        "minkowski-n",
        "flat spacetime, chart (t, x, ...), metric diag(-1, 1, ..., 1) (2 <= n <= 8)",
    ),
    (
        "polar-plane",
        "flat plane, chart (r, phi), metric diag(1, r^2)",
    ),
];

/// `(identifier, parameters, description)` for every built-in curve.
pub const CURVES: &[(&str, &str, &str)] = &[
    (
        "line",
        "start, direction, domain = [0, 1]",
        "x(s) = start + s direction in chart coordinates",
    ),
    (
        "latitude-circle",
        "theta0",
        "sphere-2: theta = theta0, phi = s on [0, 2 pi]",
    ),
    (
        "great-circle",
        "",
        "sphere-2: the equator theta = pi/2, phi = s on [0, 2 pi]",
    ),
    (
        "accelerated-worldline",
        "alpha, domain = [0, 1]",
        "minkowski-n: x = (sinh(alpha s)/alpha, cosh(alpha s)/alpha, 0, ...), proper time s",
    ),
    (
        "circular-worldline",
        "radius, omega",
        "minkowski-n, n >= 3: radius R at lab angular rate omega, proper time over one lab orbit",
    ),
];

impl ManifoldId {
    pub fn parse(id: &str) -> Result<Self> {
        let sized = |prefix: &str, min: usize| -> Option<Result<usize>> {
            let rest = id.strip_prefix(prefix)?;
            Some(match rest.parse::<usize>() {
                Ok(n) if (min..=MAX_CATALOG_DIM).contains(&n) => Ok(n),
                _ => Err(Error::InvalidParameter(format!(
                    "unknown catalog id `{id}`"
                ))),
            })
        };
        match id {
            "sphere-2" => return Ok(Self::Sphere2),
            "polar-plane" => return Ok(Self::PolarPlane),
            _ => {}
        }
        if let Some(n) = sized("euclidean-", 1) {
            return n.map(Self::Euclidean);
        }
        if let Some(n) = sized("minkowski-", 2) {
            return n.map(Self::Minkowski);
        }
        Err(Error::InvalidParameter(format!(
            "unknown catalog id `{id}`"
        )))
    }

    pub fn id(&self) -> String {
        match self {
            Self::Euclidean(n) => format!("euclidean-{n}"),
            Self::Sphere2 => "sphere-2".to_string(),
            Self::Minkowski(n) => format!("minkowski-{n}"),
            Self::PolarPlane => "polar-plane".to_string(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Euclidean(n) | Self::Minkowski(n) => *n,
            Self::Sphere2 | Self::PolarPlane => 2,
        }
    }

    pub fn metric(&self) -> MetricField {
        match *self {
            Self::Euclidean(n) => MetricField::euclidean(n),
            Self::Minkowski(n) => MetricField::minkowski(n),
            Self::Sphere2 => {
                MetricField::new(vec![1, 1], |x| Matrix::diag(&[1.0, x[0].sin().powi(2)]))
                    .with_inverse(|x| Matrix::diag(&[1.0, 1.0 / x[0].sin().powi(2)]))
                    .with_derivatives(|x| {
                        let d = 2.0 * x[0].sin() * x[0].cos();
                        Array3::from_fn(2, |k, i, j| if (k, i, j) == (0, 1, 1) { d } else { 0.0 })
                    })
            }
            Self::PolarPlane => MetricField::new(vec![1, 1], |x| Matrix::diag(&[1.0, x[0] * x[0]]))
                .with_inverse(|x| Matrix::diag(&[1.0, 1.0 / (x[0] * x[0])]))
                .with_derivatives(|x| {
                    let d = 2.0 * x[0];
                    Array3::from_fn(2, |k, i, j| if (k, i, j) == (0, 1, 1) { d } else { 0.0 })
                }),
        }
    }

    /// Coordinates that are angles with period `2π`.
    pub fn periodic_coordinates(&self) -> &'static [usize] {
        match self {
            Self::Sphere2 | Self::PolarPlane => &[1],
            _ => &[],
        }
    }

    /// Whether two chart points coincide within `tol`, identifying periodic
    /// angles.
    pub fn same_point(&self, a: &[f64], b: &[f64], tol: f64) -> bool {
        if a.len() != b.len() {
            return false;
        }
        let periodic = self.periodic_coordinates();
        a.iter().zip(b).enumerate().all(|(i, (x, y))| {
            let mut d = x - y;
            if periodic.contains(&i) {
                d -= (d / (2.0 * PI)).round() * 2.0 * PI;
            }
            d.abs() <= tol
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum CurveSpec {
    Line {
        start: Vec<f64>,
        direction: Vec<f64>,
        domain: Domain,
    },
    LatitudeCircle {
        theta0: f64,
    },
    GreatCircle,
    AcceleratedWorldline {
        alpha: f64,
        domain: Domain,
    },
    CircularWorldline {
        radius: f64,
        omega: f64,
    },
}

impl CurveSpec {
    pub fn id(&self) -> &'static str {
        match self {
            Self::Line { .. } => "line",
            Self::LatitudeCircle { .. } => "latitude-circle",
            Self::GreatCircle => "great-circle",
            Self::AcceleratedWorldline { .. } => "accelerated-worldline",
            Self::CircularWorldline { .. } => "circular-worldline",
        }
    }

    pub fn build(&self, manifold: ManifoldId) -> Result<Curve> {
        let n = manifold.dim();
        let wrong_manifold = |need: &str| {
            Error::InvalidParameter(format!(
                "curve `{}` requires {need}, got `{}`",
                self.id(),
                manifold.id()
            ))
        };
        match self {
            Self::Line {
                start,
                direction,
                domain,
            } => {
                for v in [start, direction] {
                    if v.len() != n {
                        return Err(Error::DimensionMismatch {
                            expected: n,
                            found: v.len(),
                        });
                    }
                    if v.iter().any(|x| !x.is_finite()) {
                        return Err(Error::InvalidParameter(
                            "line coordinates must be finite".into(),
                        ));
                    }
                }
                let (p0, d) = (start.clone(), direction.clone());
                let dv = d.clone();
                Ok(Curve::new(
                    n,
                    *domain,
                    move |s| p0.iter().zip(&d).map(|(a, b)| a + s * b).collect(),
                    move |_| dv.clone(),
                )
                .with_acceleration(move |_| vec![0.0; n]))
            }
            Self::LatitudeCircle { theta0 } => {
                if manifold != ManifoldId::Sphere2 {
                    return Err(wrong_manifold("sphere-2"));
                }
                let th = *theta0;
                if !(th > 0.0 && th < PI) {
                    return Err(Error::InvalidParameter(
                        "theta0 must lie strictly between 0 and pi".into(),
                    ));
                }
                Ok(latitude(th))
            }
            Self::GreatCircle => {
                if manifold != ManifoldId::Sphere2 {
                    return Err(wrong_manifold("sphere-2"));
                }
                Ok(latitude(PI / 2.0))
            }
            Self::AcceleratedWorldline { alpha, domain } => {
                if !matches!(manifold, ManifoldId::Minkowski(_)) {
                    return Err(wrong_manifold("minkowski-n"));
                }
                let a = *alpha;
                if !(a > 0.0 && a.is_finite()) {
                    return Err(Error::InvalidParameter("alpha must be positive".into()));
                }
                let pad = move |v0: f64, v1: f64| {
                    let mut v = vec![0.0; n];
                    v[0] = v0;
                    v[1] = v1;
                    v
                };
                Ok(Curve::new(
                    n,
                    *domain,
                    move |s| pad((a * s).sinh() / a, (a * s).cosh() / a),
                    move |s| pad((a * s).cosh(), (a * s).sinh()),
                )
                .with_acceleration(move |s| pad(a * (a * s).sinh(), a * (a * s).cosh())))
            }
            Self::CircularWorldline { radius, omega } => {
                if !matches!(manifold, ManifoldId::Minkowski(m) if m >= 3) {
                    return Err(wrong_manifold("minkowski-n with n >= 3"));
                }
                let (r, w) = (*radius, *omega);
                if !(r > 0.0 && w > 0.0 && r.is_finite() && w.is_finite()) {
                    return Err(Error::InvalidParameter(
                        "radius and omega must be positive".into(),
                    ));
                }
                let v = r * w;
                if !(v < 1.0) {
                    return Err(Error::InvalidParameter(
                        "radius * omega must be below 1".into(),
                    ));
                }
                let gamma = 1.0 / (1.0 - v * v).sqrt();
                let rate = w * gamma;
                let domain = Domain::new(0.0, 2.0 * PI / rate)?;
                let pad = move |v0: f64, v1: f64, v2: f64| {
                    let mut out = vec![0.0; n];
                    out[..3].copy_from_slice(&[v0, v1, v2]);
                    out
                };
                Ok(Curve::new(
                    n,
                    domain,
                    move |s| pad(gamma * s, r * (rate * s).cos(), r * (rate * s).sin()),
                    move |s| {
                        pad(
                            gamma,
                            -v * gamma * (rate * s).sin(),
                            v * gamma * (rate * s).cos(),
                        )
                    },
                )
                .with_acceleration(move |s| {
                    let k = r * rate * rate;
                    pad(0.0, -k * (rate * s).cos(), -k * (rate * s).sin())
                }))
            }
        }
    }
}

fn latitude(theta0: f64) -> Curve {
    Curve::new(
        2,
        Domain::new(0.0, 2.0 * PI).expect("nonempty"),
        move |s| vec![theta0, s],
        |_| vec![0.0, 1.0],
    )
    .with_acceleration(|_| vec![0.0, 0.0])
}
