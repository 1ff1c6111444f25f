//! Scenario files: TOML, schema version 1.
//!
//! Parsing goes through `serde_path_to_error` so that type errors carry the
//! path of the offending field; semantic checks report paths the same way.

use std::fmt;
use std::path::Path;

use pathtransport::geometry::{
    fermi_b, fermi_walker_b, jaumann_b, law_with_deformation, parallel_law, truesdell_b,
    ConnectionField, Curve, CurveSpec, DeformationField, ManifoldId, MetricField, VectorField,
};
use pathtransport::{default_step, Domain, Interpolation, Matrix, TensorComponents, TransportLaw};
use serde::Deserialize;
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

/// Tolerance for detecting closed curves.
pub const CLOSED_CURVE_TOL: f64 = 1e-9;

const DEFAULT_TOL: f64 = 1e-6;
const DEFAULT_PROBES: usize = 5;

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{}", located(field, *line, message))]
    Parse {
        field: String,
        line: Option<usize>,
        message: String,
    },
    #[error("{field}: {message}")]
    Invalid { field: String, message: String },
}

fn located(field: &str, line: Option<usize>, message: &str) -> String {
    match (field.is_empty(), line) {
        (true, Some(l)) => format!("line {l}: {message}"),
        (true, None) => message.to_string(),
        (false, Some(l)) => format!("{field} (line {l}): {message}"),
        (false, None) => format!("{field}: {message}"),
    }
}

impl ScenarioError {
    /// Dotted path of the offending field, empty for whole-file errors.
    pub fn field(&self) -> &str {
        match self {
            Self::Io { .. } => "",
            Self::Parse { field, .. } | Self::Invalid { field, .. } => field,
        }
    }
}

fn invalid(field: impl Into<String>, message: impl fmt::Display) -> ScenarioError {
    ScenarioError::Invalid {
        field: field.into(),
        message: message.to_string(),
    }
}

type Result<T> = std::result::Result<T, ScenarioError>;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    schema: u32,
    dim: usize,
    manifold: String,
    metric: Option<RawMetric>,
    curve: Option<RawCurve>,
    law: RawLaw,
    #[serde(default)]
    tensors: Vec<RawTensor>,
    #[serde(default)]
    transport_pairs: Vec<[f64; 2]>,
    axiom_check: Option<RawAxiomCheck>,
    integrator: Option<RawIntegrator>,
    output: Option<RawOutput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawMetric {
    catalog: Option<String>,
    constant: Option<Vec<Vec<f64>>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCurve {
    id: String,
    start: Option<Vec<f64>>,
    direction: Option<Vec<f64>>,
    domain: Option<[f64; 2]>,
    theta0: Option<f64>,
    alpha: Option<f64>,
    radius: Option<f64>,
    omega: Option<f64>,
    s: Option<Vec<f64>>,
    points: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LawKind {
    Parallel,
    FermiWalker,
    Fermi,
    Truesdell,
    Jaumann,
    CustomGamma,
}

impl LawKind {
    pub fn id(&self) -> &'static str {
        match self {
            Self::Parallel => "parallel",
            Self::FermiWalker => "fermi-walker",
            Self::Fermi => "fermi",
            Self::Truesdell => "truesdell",
            Self::Jaumann => "jaumann",
            Self::CustomGamma => "custom-gamma",
        }
    }
}

/// `(identifier, description)` for every law kind.
pub const LAWS: &[(&str, &str)] = &[
    (
        "parallel",
        "Levi-Civita parallel transport (flat connection without a metric)",
    ),
    (
        "fermi-walker",
        "Fermi-Walker transport; needs a metric and a non-null velocity",
    ),
    ("fermi", "Fermi transport; needs unit timelike velocity"),
    (
        "truesdell",
        "Truesdell transport of the affine field `law.field`",
    ),
    (
        "jaumann",
        "Jaumann transport of the affine field `law.field`",
    ),
    (
        "custom-gamma",
        "tabulated coefficients `law.s`, `law.gamma`, optional `law.interpolation`",
    ),
];

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLaw {
    kind: LawKind,
    field: Option<RawField>,
    s: Option<Vec<f64>>,
    gamma: Option<Vec<Vec<Vec<f64>>>>,
    interpolation: Option<Interpolation>,
}

/// Affine vector field `X(x) = matrix x + offset`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawField {
    matrix: Vec<Vec<f64>>,
    offset: Option<Vec<f64>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTensor {
    p: usize,
    q: usize,
    values: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawAxiomCheck {
    enabled: bool,
    tol: Option<f64>,
    probes: Option<usize>,
    seed: Option<u64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawIntegrator {
    step: Option<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawOutput {
    trace_points: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxiomCheck {
    pub tol: f64,
    pub probes: usize,
    pub seed: u64,
}

impl Default for AxiomCheck {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            probes: DEFAULT_PROBES,
            seed: 0,
        }
    }
}

/// A validated scenario with all catalog entries expanded.
#[derive(Clone, Debug)]
pub struct Scenario {
    pub dim: usize,
    /// `None` for a custom manifold.
    pub manifold: Option<ManifoldId>,
    pub metric: Option<MetricField>,
    pub curve: Option<Curve>,
    pub curve_id: Option<String>,
    pub law_kind: LawKind,
    pub law: TransportLaw,
    pub tensors: Vec<TensorComponents>,
    pub pairs: Vec<(f64, f64)>,
    pub axiom_check: Option<AxiomCheck>,
    pub step: f64,
    pub trace_points: Option<usize>,
    /// Whether the curve returns to its starting point.
    pub closed: bool,
    /// SHA-256 of the scenario text, lowercase hex.
    pub hash: String,
}

pub fn load_scenario(path: impl AsRef<Path>) -> Result<Scenario> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_scenario(&text)
}

pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let de = toml::Deserializer::new(text);
    let raw: RawScenario = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        let inner = e.into_inner();
        let line = inner
            .span()
            .map(|span| text[..span.start].matches('\n').count() + 1);
        ScenarioError::Parse {
            field: if field == "." { String::new() } else { field },
            line,
            message: inner.message().to_string(),
        }
    })?;
    let hash = format!("{:x}", Sha256::digest(text.as_bytes()));
    resolve(raw, hash)
}

impl Scenario {
    /// Overrides the integrator step (`--step`).
    pub fn with_step(mut self, step: f64) -> Result<Self> {
        self.step = check_positive("--step", step)?;
        Ok(self)
    }

    /// Overrides the axiom tolerance (`--tol`), enabling the check.
    pub fn with_tol(mut self, tol: f64) -> Result<Self> {
        let tol = check_positive("--tol", tol)?;
        self.axiom_check = Some(AxiomCheck {
            tol,
            ..self.axiom_check.unwrap_or_default()
        });
        Ok(self)
    }

    pub fn domain(&self) -> Domain {
        self.law.domain()
    }

    pub fn manifold_id(&self) -> String {
        self.manifold
            .map_or_else(|| "custom".to_string(), |m| m.id())
    }
}

fn check_positive(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(invalid(
            field,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

fn check_finite(field: &str, values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !v.is_finite()) {
        Some(i) => Err(invalid(format!("{field}[{i}]"), "must be finite")),
        None => Ok(()),
    }
}

fn check_len(field: &str, values: &[f64], n: usize) -> Result<()> {
    if values.len() != n {
        return Err(invalid(
            field,
            format!("expected {n} components, found {}", values.len()),
        ));
    }
    check_finite(field, values)
}

fn square_matrix(field: &str, rows: &[Vec<f64>], n: usize) -> Result<Matrix> {
    if rows.len() != n {
        return Err(invalid(
            field,
            format!("expected {n} rows, found {}", rows.len()),
        ));
    }
    for (i, row) in rows.iter().enumerate() {
        check_len(&format!("{field}[{i}]"), row, n)?;
    }
    Matrix::from_rows(rows).map_err(|e| invalid(field, e))
}

fn increasing_grid(field: &str, s: &[f64]) -> Result<()> {
    if s.len() < 2 {
        return Err(invalid(field, "needs at least two samples"));
    }
    check_finite(field, s)?;
    match s.windows(2).position(|w| w[1] <= w[0]) {
        Some(i) => Err(invalid(
            format!("{field}[{}]", i + 1),
            "grid is not strictly increasing",
        )),
        None => Ok(()),
    }
}

fn domain_of(field: &str, d: [f64; 2]) -> Result<Domain> {
    check_finite(field, &d)?;
    if d[1] <= d[0] {
        return Err(invalid(
            field,
            format!("empty interval [{}, {}]", d[0], d[1]),
        ));
    }
    Domain::new(d[0], d[1]).map_err(|e| invalid(field, e))
}

fn resolve(raw: RawScenario, hash: String) -> Result<Scenario> {
    if raw.schema != SCHEMA_VERSION {
        return Err(invalid(
            "schema",
            format!(
                "unsupported schema version {}, expected {SCHEMA_VERSION}",
                raw.schema
            ),
        ));
    }
    let manifold = match raw.manifold.as_str() {
        "custom" => None,
        id => Some(
            ManifoldId::parse(id)
                .map_err(|_| invalid("manifold", format!("unknown catalog id `{id}`")))?,
        ),
    };
    let n = raw.dim;
    if let Some(m) = manifold {
        if m.dim() != n {
            return Err(invalid(
                "dim",
                format!("manifold `{}` has dimension {}, got {n}", m.id(), m.dim()),
            ));
        }
    } else if !(1..=pathtransport::geometry::catalog::MAX_CATALOG_DIM).contains(&n) {
        return Err(invalid(
            "dim",
            format!(
                "must lie in 1..={}",
                pathtransport::geometry::catalog::MAX_CATALOG_DIM
            ),
        ));
    }

    let metric = resolve_metric(raw.metric.as_ref(), manifold, n)?;
    let curve = raw
        .curve
        .as_ref()
        .map(|c| resolve_curve(c, manifold, n))
        .transpose()?;
    let law = resolve_law(&raw.law, curve.as_ref(), metric.as_ref(), n)?;
    let domain = law.domain();

    let tensors = raw
        .tensors
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let expected = n.pow((t.p + t.q) as u32);
            check_len(&format!("tensors[{i}].values"), &t.values, expected)?;
            let dim = if t.p + t.q == 0 { 1 } else { n };
            TensorComponents::new(t.p, t.q, dim, t.values.clone())
                .map_err(|e| invalid(format!("tensors[{i}]"), e))
        })
        .collect::<Result<Vec<_>>>()?;

    let pairs = raw
        .transport_pairs
        .iter()
        .enumerate()
        .map(|(i, &[s, t])| {
            for (j, v) in [s, t].into_iter().enumerate() {
                if !domain.contains(v) {
                    return Err(invalid(
                        format!("transport_pairs[{i}][{j}]"),
                        format!("{v} outside the domain [{}, {}]", domain.min, domain.max),
                    ));
                }
            }
            Ok((s, t))
        })
        .collect::<Result<Vec<_>>>()?;

    let axiom_check = match &raw.axiom_check {
        Some(a) if a.enabled => {
            let tol = a
                .tol
                .map(|t| check_positive("axiom_check.tol", t))
                .transpose()?
                .unwrap_or(DEFAULT_TOL);
            let probes = a.probes.unwrap_or(DEFAULT_PROBES);
            if probes == 0 {
                return Err(invalid("axiom_check.probes", "must be at least 1"));
            }
            Some(AxiomCheck {
                tol,
                probes,
                seed: a.seed.unwrap_or(0),
            })
        }
        _ => None,
    };

    let step = match raw.integrator.as_ref().and_then(|i| i.step) {
        Some(h) => check_positive("integrator.step", h)?,
        None => default_step(domain),
    };

    let trace_points = raw.output.as_ref().and_then(|o| o.trace_points);
    if let Some(k) = trace_points {
        if k < 2 {
            return Err(invalid(
                "output.trace_points",
                format!("needs at least 2 points, got {k}"),
            ));
        }
    }

    let closed = curve.as_ref().is_some_and(|c| {
        let d = c.domain();
        let (a, b) = (c.position(d.min), c.position(d.max));
        match manifold {
            Some(m) => m.same_point(&a, &b, CLOSED_CURVE_TOL),
            None => a
                .iter()
                .zip(&b)
                .all(|(x, y)| (x - y).abs() <= CLOSED_CURVE_TOL),
        }
    });

    Ok(Scenario {
        dim: n,
        manifold,
        metric,
        curve,
        curve_id: raw.curve.as_ref().map(|c| c.id.clone()),
        law_kind: raw.law.kind,
        law,
        tensors,
        pairs,
        axiom_check,
        step,
        trace_points,
        closed,
        hash,
    })
}

fn resolve_metric(
    raw: Option<&RawMetric>,
    manifold: Option<ManifoldId>,
    n: usize,
) -> Result<Option<MetricField>> {
    let Some(raw) = raw else {
        return Ok(manifold.map(|m| m.metric()));
    };
    match (&raw.catalog, &raw.constant, manifold) {
        (Some(_), Some(_), _) => Err(invalid(
            "metric",
            "give either `catalog` or `constant`, not both",
        )),
        (None, None, _) => Err(invalid("metric", "needs `catalog` or `constant`")),
        (Some(id), None, Some(m)) => {
            if *id != m.id() {
                return Err(invalid(
                    "metric.catalog",
                    format!("`{id}` does not match manifold `{}`", m.id()),
                ));
            }
            Ok(Some(m.metric()))
        }
        (Some(_), None, None) => Err(invalid(
            "metric.catalog",
            "a custom manifold takes a `constant` metric",
        )),
        (None, Some(_), Some(_)) => Err(invalid(
            "metric.constant",
            "catalog manifolds carry their own metric",
        )),
        (None, Some(rows), None) => {
            let g = square_matrix("metric.constant", rows, n)?;
            if g.max_diff(&g.transpose()) > 1e-12 * g.max_abs().max(1.0) {
                return Err(invalid("metric.constant", "matrix is not symmetric"));
            }
            MetricField::constant(g)
                .map(Some)
                .map_err(|e| invalid("metric.constant", e))
        }
    }
}

fn resolve_curve(raw: &RawCurve, manifold: Option<ManifoldId>, n: usize) -> Result<Curve> {
    let allowed: &[&str] = match raw.id.as_str() {
        "line" => &["start", "direction", "domain"],
        "latitude-circle" => &["theta0"],
        "great-circle" => &[],
        "accelerated-worldline" => &["alpha", "domain"],
        "circular-worldline" => &["radius", "omega"],
        "tabulated" => &["s", "points"],
        id => return Err(invalid("curve.id", format!("unknown catalog id `{id}`"))),
    };
    let given = [
        ("start", raw.start.is_some()),
        ("direction", raw.direction.is_some()),
        ("domain", raw.domain.is_some()),
        ("theta0", raw.theta0.is_some()),
        ("alpha", raw.alpha.is_some()),
        ("radius", raw.radius.is_some()),
        ("omega", raw.omega.is_some()),
        ("s", raw.s.is_some()),
        ("points", raw.points.is_some()),
    ];
    if let Some((name, _)) = given
        .iter()
        .find(|(name, set)| *set && !allowed.contains(name))
    {
        return Err(invalid(
            format!("curve.{name}"),
            format!("not a parameter of curve `{}`", raw.id),
        ));
    }
    let need = |name: &str, v: Option<f64>| -> Result<f64> {
        let v = v.ok_or_else(|| {
            invalid(
                format!("curve.{name}"),
                format!("required by curve `{}`", raw.id),
            )
        })?;
        check_finite(&format!("curve.{name}"), &[v])?;
        Ok(v)
    };
    let domain = |default: [f64; 2]| domain_of("curve.domain", raw.domain.unwrap_or(default));

    if raw.id == "tabulated" {
        let s = raw
            .s
            .as_ref()
            .ok_or_else(|| invalid("curve.s", "required by curve `tabulated`"))?;
        let points = raw
            .points
            .as_ref()
            .ok_or_else(|| invalid("curve.points", "required by curve `tabulated`"))?;
        increasing_grid("curve.s", s)?;
        if points.len() != s.len() {
            return Err(invalid(
                "curve.points",
                format!("expected {} points, found {}", s.len(), points.len()),
            ));
        }
        for (i, p) in points.iter().enumerate() {
            check_len(&format!("curve.points[{i}]"), p, n)?;
        }
        return Curve::tabulated(s.clone(), points.clone()).map_err(|e| invalid("curve", e));
    }

    let spec = match raw.id.as_str() {
        "line" => {
            let start = raw.start.clone().unwrap_or_else(|| vec![0.0; n]);
            let direction = raw
                .direction
                .clone()
                .ok_or_else(|| invalid("curve.direction", "required by curve `line`"))?;
            check_len("curve.start", &start, n)?;
            check_len("curve.direction", &direction, n)?;
            CurveSpec::Line {
                start,
                direction,
                domain: domain([0.0, 1.0])?,
            }
        }
        "latitude-circle" => CurveSpec::LatitudeCircle {
            theta0: need("theta0", raw.theta0)?,
        },
        "great-circle" => CurveSpec::GreatCircle,
        "accelerated-worldline" => CurveSpec::AcceleratedWorldline {
            alpha: need("alpha", raw.alpha)?,
            domain: domain([0.0, 1.0])?,
        },
        _ => CurveSpec::CircularWorldline {
            radius: need("radius", raw.radius)?,
            omega: need("omega", raw.omega)?,
        },
    };
    // chart-linear lines only need the dimension of a custom manifold
    let host = match (manifold, &spec) {
        (Some(m), _) => m,
        (None, CurveSpec::Line { .. }) => ManifoldId::Euclidean(n),
        (None, _) => {
            return Err(invalid(
                "curve.id",
                format!("curve `{}` needs a catalog manifold", raw.id),
            ))
        }
    };
    spec.build(host).map_err(|e| invalid("curve", e))
}

fn resolve_law(
    raw: &RawLaw,
    curve: Option<&Curve>,
    metric: Option<&MetricField>,
    n: usize,
) -> Result<TransportLaw> {
    let kind = raw.kind;
    let forbid = |name: &str, set: bool| -> Result<()> {
        if set {
            Err(invalid(
                format!("law.{name}"),
                format!("not a parameter of law `{}`", kind.id()),
            ))
        } else {
            Ok(())
        }
    };
    let field_law = matches!(kind, LawKind::Truesdell | LawKind::Jaumann);
    forbid("field", !field_law && raw.field.is_some())?;
    if kind != LawKind::CustomGamma {
        forbid("s", raw.s.is_some())?;
        forbid("gamma", raw.gamma.is_some())?;
        forbid("interpolation", raw.interpolation.is_some())?;
    }

    if kind == LawKind::CustomGamma {
        let s = raw
            .s
            .as_ref()
            .ok_or_else(|| invalid("law.s", "required by law `custom-gamma`"))?;
        let gamma = raw
            .gamma
            .as_ref()
            .ok_or_else(|| invalid("law.gamma", "required by law `custom-gamma`"))?;
        increasing_grid("law.s", s)?;
        if gamma.len() != s.len() {
            return Err(invalid(
                "law.gamma",
                format!("expected {} samples, found {}", s.len(), gamma.len()),
            ));
        }
        let samples = gamma
            .iter()
            .enumerate()
            .map(|(k, rows)| square_matrix(&format!("law.gamma[{k}]"), rows, n))
            .collect::<Result<Vec<_>>>()?;
        let law = TransportLaw::tabulated(
            s.clone(),
            samples,
            raw.interpolation.unwrap_or(Interpolation::Linear),
        )
        .map_err(|e| invalid("law", e))?;
        if let Some(c) = curve {
            let (a, b) = (c.domain(), law.domain());
            if (a.min - b.min).abs() > 1e-12 || (a.max - b.max).abs() > 1e-12 {
                return Err(invalid(
                    "law.s",
                    format!(
                        "samples span [{}, {}] but the curve spans [{}, {}]",
                        b.min, b.max, a.min, a.max
                    ),
                ));
            }
        }
        return Ok(law);
    }

    let curve =
        curve.ok_or_else(|| invalid("curve", format!("required by law `{}`", kind.id())))?;
    let conn = metric.map_or_else(|| ConnectionField::flat(n), ConnectionField::levi_civita);
    let need_metric =
        || metric.ok_or_else(|| invalid("metric", format!("required by law `{}`", kind.id())));
    let engine = |e: pathtransport::Error| invalid("law.kind", e);
    let deformation: DeformationField = match kind {
        LawKind::Parallel => return parallel_law(curve, &conn).map_err(engine),
        LawKind::FermiWalker => fermi_walker_b(curve, need_metric()?).map_err(engine)?,
        LawKind::Fermi => fermi_b(curve, need_metric()?).map_err(engine)?,
        LawKind::Truesdell | LawKind::Jaumann => {
            let f = raw
                .field
                .as_ref()
                .ok_or_else(|| invalid("law.field", format!("required by law `{}`", kind.id())))?;
            let m = square_matrix("law.field.matrix", &f.matrix, n)?;
            let c = f.offset.clone().unwrap_or_else(|| vec![0.0; n]);
            check_len("law.field.offset", &c, n)?;
            let x = VectorField::affine(m, c).map_err(|e| invalid("law.field", e))?;
            if kind == LawKind::Truesdell {
                truesdell_b(curve, need_metric()?, &x).map_err(engine)?
            } else {
                jaumann_b(curve, need_metric()?, &x).map_err(engine)?
            }
        }
        LawKind::CustomGamma => unreachable!("handled above"),
    };
    law_with_deformation(curve, &conn, &deformation).map_err(engine)
}
