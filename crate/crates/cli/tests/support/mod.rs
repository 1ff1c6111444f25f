//! Fixtures shared by the schema and acceptance tests.
#![allow(dead_code)]

use std::path::{Path, PathBuf};

pub fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

/// `(replaced text, replacement, expected field path)`; every mutation of the
/// base file must be rejected with an error naming that field.
pub const MUTATIONS: &[(&str, &str, &str)] = &[
    ("schema = 1", "schema = 2", "schema"),
    (
        "manifold = \"sphere-2\"",
        "manifold = \"sphere-3\"",
        "manifold",
    ),
    ("dim = 2", "dim = 3", "dim"),
    (
        "id = \"latitude-circle\"",
        "id = \"latitude-circel\"",
        "curve.id",
    ),
    ("theta0 = 1.0471975511965976", "", "curve.theta0"),
    (
        "theta0 = 1.0471975511965976",
        "theta0 = 1.0471975511965976\nalpha = 2.0",
        "curve.alpha",
    ),
    ("kind = \"parallel\"", "kind = \"paralel\"", "law.kind"),
    (
        "kind = \"parallel\"",
        "kind = \"parallel\"\nsmoothing = 3",
        "law.smoothing",
    ),
    (
        "values = [1.0, 0.5, -0.5, 2.0]",
        "values = [1.0, 0.5, -0.5]",
        "tensors[1].values",
    ),
    ("p = 1\nq = 0", "p = -1\nq = 0", "tensors[0].p"),
    (
        "[[0.0, 3.0], [1.0, 6.0]]",
        "[[0.0, 3.0], [1.0, 7.0]]",
        "transport_pairs[1][1]",
    ),
    (
        "[[0.0, 3.0], [1.0, 6.0]]",
        "[[0.0], [1.0, 6.0]]",
        "transport_pairs[0]",
    ),
    ("step = 1e-3", "step = 0.0", "integrator.step"),
    ("tol = 1e-6", "tol = -1e-6", "axiom_check.tol"),
    ("probes = 3", "probes = 0", "axiom_check.probes"),
    ("enabled = true", "enabled = \"yes\"", "axiom_check.enabled"),
    (
        "trace_points = 5",
        "trace_points = 1",
        "output.trace_points",
    ),
    (
        "[curve]",
        "[metric]\ncatalog = \"polar-plane\"\n\n[curve]",
        "metric.catalog",
    ),
];

pub fn write_mutated(dir: &Path, k: usize, base: &str, from: &str, to: &str) -> PathBuf {
    assert!(base.contains(from), "mutation {k} does not apply: {from}");
    let path = dir.join(format!("mutated_{k:02}.toml"));
    std::fs::write(&path, base.replacen(from, to, 1)).unwrap();
    path
}
