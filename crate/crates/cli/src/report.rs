//! Running a scenario: transport matrices, transported tensors, axiom
//! checks, holonomy of closed curves, and CSV traces.

use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use pathtransport::geometry::holonomy_angle;
use pathtransport::linalg::rotation_angle_2x2;
use pathtransport::{
    transport_matrix, transport_tensor, verify_axioms, AxiomReport, Matrix, ProbeSpec,
    TensorComponents,
};
use serde::Serialize;

use crate::scenario::{Scenario, SCHEMA_VERSION};

/// An engine failure with the scenario item that triggered it.
#[derive(Debug, thiserror::Error)]
#[error("{context}: {source}")]
pub struct RunError {
    pub context: String,
    #[source]
    pub source: pathtransport::Error,
}

fn annotate(context: impl Into<String>) -> impl FnOnce(pathtransport::Error) -> RunError {
    let context = context.into();
    move |source| RunError { context, source }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub scenario: ScenarioSummary,
    pub provenance: Provenance,
    pub pairs: Vec<PairReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub axioms: Option<AxiomReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holonomy: Option<HolonomyReport>,
    #[serde(skip)]
    pub trace: Option<Trace>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub dim: usize,
    pub manifold: String,
    pub curve: Option<String>,
    pub law: String,
    pub domain: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Provenance {
    pub scenario_sha256: String,
    pub step: f64,
    pub schema: u32,
    pub engine_version: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairReport {
    pub s: f64,
    pub t: f64,
    /// `H(t, s)`, row-major rows.
    pub h: Vec<Vec<f64>>,
    /// `max |H(t,s) H(s,t) - I|`
    pub inverse_residual: f64,
    pub determinant: f64,
    pub tensors: Vec<TensorComponents>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HolonomyReport {
    pub s_min: f64,
    pub s_max: f64,
    /// `H(s_max, s_min)`
    pub h: Vec<Vec<f64>>,
    /// `max |H - I|`
    pub deviation_from_identity: f64,
    /// Counterclockwise rotation of transported vectors in an orthonormal
    /// frame (n = 2 with a positive-definite or absent metric).
    pub rotation_angle: Option<f64>,
    /// Rotation of the frame relative to the transported vectors:
    /// `-rotation_angle`.
    pub frame_rotation_angle: Option<f64>,
}

/// One row per sampled `t`: `s, t`, the entries of `H(t, s)`, then the
/// entries of every transported tensor.
#[derive(Clone, Debug, PartialEq)]
pub struct Trace {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.as_slice()
        .chunks(m.dim().max(1))
        .map(<[f64]>::to_vec)
        .collect()
}

pub fn run_scenario(sc: &Scenario) -> Result<RunReport, RunError> {
    let domain = sc.domain();
    let pairs = sc
        .pairs
        .iter()
        .enumerate()
        .map(|(i, &(s, t))| {
            let tm = transport_matrix(&sc.law, s, t, sc.step)
                .map_err(annotate(format!("transport_pairs[{i}]")))?;
            let tensors = sc
                .tensors
                .iter()
                .enumerate()
                .map(|(k, t0)| transport_tensor(&tm, t0).map_err(annotate(format!("tensors[{k}]"))))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(PairReport {
                s,
                t,
                h: rows(&tm.h),
                inverse_residual: tm.inverse_residual(),
                determinant: tm.h.determinant(),
                tensors,
            })
        })
        .collect::<Result<Vec<_>, RunError>>()?;

    let axioms = sc.axiom_check.map(|a| {
        let probes = ProbeSpec::random(domain, sc.dim, a.probes, a.seed, sc.step);
        verify_axioms(&sc.law, &probes, a.tol)
    });

    let holonomy = if sc.closed { Some(holonomy(sc)?) } else { None };
    let trace = sc.trace_points.map(|k| trace(sc, k)).transpose()?;

    Ok(RunReport {
        scenario: ScenarioSummary {
            dim: sc.dim,
            manifold: sc.manifold_id(),
            curve: sc.curve_id.clone(),
            law: sc.law_kind.id().to_string(),
            domain: [domain.min, domain.max],
        },
        provenance: Provenance {
            scenario_sha256: sc.hash.clone(),
            step: sc.step,
            schema: SCHEMA_VERSION,
            engine_version: env!("CARGO_PKG_VERSION").to_string(),
        },
        pairs,
        axioms,
        holonomy,
        trace,
    })
}

fn holonomy(sc: &Scenario) -> Result<HolonomyReport, RunError> {
    let d = sc.domain();
    let tm = transport_matrix(&sc.law, d.min, d.max, sc.step).map_err(annotate("holonomy"))?;
    let h = tm.h;
    let rotation_angle = if sc.dim != 2 {
        None
    } else {
        match (&sc.metric, &sc.curve) {
            (Some(m), Some(c)) => holonomy_angle(&h, &m.g(&c.position(d.min))).ok(),
            (None, _) => rotation_angle_2x2(&h).ok(),
            (Some(_), None) => None,
        }
    };
    Ok(HolonomyReport {
        s_min: d.min,
        s_max: d.max,
        deviation_from_identity: h.max_diff(&Matrix::identity(sc.dim)),
        h: rows(&h),
        rotation_angle,
        frame_rotation_angle: rotation_angle.map(|a| -a),
    })
}

fn tensor_columns(k: usize, t: &TensorComponents) -> Vec<String> {
    let rank = t.rank();
    if rank == 0 {
        return vec![format!("T{k}")];
    }
    let n = t.dim();
    (0..t.values().len())
        .map(|flat| {
            let mut idx = vec![0; rank];
            let mut rest = flat;
            for slot in (0..rank).rev() {
                idx[slot] = rest % n;
                rest /= n;
            }
            let digits: Vec<String> = idx.iter().map(usize::to_string).collect();
            format!("T{k}_{}", digits.join("_"))
        })
        .collect()
}

fn trace(sc: &Scenario, k: usize) -> Result<Trace, RunError> {
    let n = sc.dim;
    let mut header = vec!["s".to_string(), "t".to_string()];
    for i in 0..n {
        for j in 0..n {
            header.push(format!("H_{i}_{j}"));
        }
    }
    for (i, t0) in sc.tensors.iter().enumerate() {
        header.extend(tensor_columns(i, t0));
    }
    let mut out = Vec::new();
    for (p, &(s, t)) in sc.pairs.iter().enumerate() {
        for j in 0..k {
            let tau = if j == k - 1 {
                t
            } else {
                s + (t - s) * j as f64 / (k - 1) as f64
            };
            let tm = transport_matrix(&sc.law, s, tau, sc.step)
                .map_err(annotate(format!("trace of transport_pairs[{p}]")))?;
            let mut row = vec![s, tau];
            row.extend_from_slice(tm.h.as_slice());
            for (i, t0) in sc.tensors.iter().enumerate() {
                let v = transport_tensor(&tm, t0).map_err(annotate(format!("tensors[{i}]")))?;
                row.extend_from_slice(v.values());
            }
            out.push(row);
        }
    }
    Ok(Trace { header, rows: out })
}

impl Trace {
    /// Comma-separated text, 17 significant digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for row in &self.rows {
            for (i, v) in row.iter().enumerate() {
                if i > 0 {
                    s.push(',');
                }
                write!(s, "{v:.16e}").expect("writing to a String");
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, thiserror::Error)]
pub enum TraceError {
    #[error("the report has no trace; set `output.trace_points` (at least 2)")]
    Missing,
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: io::Error },
}

pub fn write_trace(r: &RunReport, mut w: impl Write) -> io::Result<()> {
    let trace = r
        .trace
        .as_ref()
        .ok_or_else(|| io::Error::new(io::ErrorKind::InvalidInput, TraceError::Missing))?;
    w.write_all(trace.to_csv().as_bytes())
}

pub fn export_trace(r: &RunReport, path: impl AsRef<Path>) -> Result<(), TraceError> {
    let path = path.as_ref();
    let trace = r.trace.as_ref().ok_or(TraceError::Missing)?;
    std::fs::write(path, trace.to_csv()).map_err(|source| TraceError::Io {
        path: path.display().to_string(),
        source,
    })
}
