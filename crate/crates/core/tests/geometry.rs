mod common;

use std::f64::consts::PI;

use common::*;
use pathtransport::geometry::{
    fermi_b, fermi_walker_b, holonomy_angle, jaumann_b, law_with_deformation, parallel_law,
    truesdell_b, ConnectionField, Curve, CurveSpec, DeformationField, ManifoldId, MetricField,
    VectorField,
};
use pathtransport::{transport_matrix, verify_axioms, Domain, Matrix, ProbeSpec, TransportLaw};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STEP: f64 = 1e-3;

fn unit() -> Domain {
    Domain::new(0.0, 1.0).unwrap()
}

fn levi_civita(m: ManifoldId) -> (MetricField, ConnectionField) {
    let metric = m.metric();
    let conn = ConnectionField::levi_civita(&metric);
    (metric, conn)
}

fn diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect()
}

/// Cartesian line `(1, s)` seen in polar coordinates.
fn polar_offset_line() -> Curve {
    Curve::new(
        2,
        Domain::new(-1.5, 2.0).unwrap(),
        |s| vec![(1.0 + s * s).sqrt(), s.atan()],
        |s| {
            let r2 = 1.0 + s * s;
            vec![s / r2.sqrt(), 1.0 / r2]
        },
    )
}

/// A wobbling loop on the sphere, away from the poles.
fn sphere_wobble() -> Curve {
    Curve::new(
        2,
        Domain::new(0.0, 2.0 * PI).unwrap(),
        |s| vec![1.0 + 0.3 * (3.0 * s).sin(), s + 0.2 * s.sin()],
        |s| vec![0.9 * (3.0 * s).cos(), 1.0 + 0.2 * s.cos()],
    )
}

fn max_pairing_drift(
    curve: &Curve,
    law: &TransportLaw,
    metric: &MetricField,
    rng: &mut ChaCha8Rng,
    pairs: usize,
) -> f64 {
    let d = curve.domain();
    let mut worst: f64 = 0.0;
    for _ in 0..pairs {
        let (s, t) = (rng.gen_range(d.min..d.max), rng.gen_range(d.min..d.max));
        let (v, w) = (random_vec(rng, 2), random_vec(rng, 2));
        let h = transport_matrix(law, s, t, STEP).unwrap().h;
        let before = metric.inner(&curve.position(s), &v, &w);
        let after = metric.inner(&curve.position(t), &h.mul_vec(&v), &h.mul_vec(&w));
        worst = worst.max((after - before).abs());
    }
    worst
}

#[test]
fn parallel_transport_preserves_the_metric() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (sphere, sphere_conn) = levi_civita(ManifoldId::Sphere2);
    let (polar, polar_conn) = levi_civita(ManifoldId::PolarPlane);
    let sphere_curves = [
        CurveSpec::LatitudeCircle { theta0: 0.7 }
            .build(ManifoldId::Sphere2)
            .unwrap(),
        sphere_wobble(),
    ];
    for c in &sphere_curves {
        let law = parallel_law(c, &sphere_conn).unwrap();
        assert!(max_pairing_drift(c, &law, &sphere, &mut rng, 20) < 1e-7);
    }
    let circle = Curve::new(
        2,
        Domain::new(0.0, 2.0 * PI).unwrap(),
        |s| vec![1.5, s],
        |_| vec![0.0, 1.0],
    );
    for c in &[polar_offset_line(), circle] {
        let law = parallel_law(c, &polar_conn).unwrap();
        assert!(max_pairing_drift(c, &law, &polar, &mut rng, 20) < 1e-7);
    }
}

#[test]
fn geodesics_transport_their_own_velocity() {
    let (_, sphere_conn) = levi_civita(ManifoldId::Sphere2);
    let equator = CurveSpec::GreatCircle.build(ManifoldId::Sphere2).unwrap();
    let law = parallel_law(&equator, &sphere_conn).unwrap();
    let h = transport_matrix(&law, 0.3, 5.9, STEP).unwrap().h;
    assert!(diff(&h.mul_vec(&equator.velocity(0.3)), &equator.velocity(5.9)) < 1e-7);

    let (_, polar_conn) = levi_civita(ManifoldId::PolarPlane);
    let line = polar_offset_line();
    let law = parallel_law(&line, &polar_conn).unwrap();
    for (s, t) in [(-1.5, 2.0), (0.5, -1.0), (1.7, 0.1)] {
        let h = transport_matrix(&law, s, t, STEP).unwrap().h;
        assert!(diff(&h.mul_vec(&line.velocity(s)), &line.velocity(t)) < 1e-7);
    }
}

#[test]
fn radial_line_in_polar_chart_matches_cartesian_transport() {
    let (_, conn) = levi_civita(ManifoldId::PolarPlane);
    let phi = 0.8;
    let spec = CurveSpec::Line {
        start: vec![0.5, phi],
        direction: vec![2.0, 0.0],
        domain: unit(),
    };
    let line = spec.build(ManifoldId::PolarPlane).unwrap();
    let law = parallel_law(&line, &conn).unwrap();
    // constant Cartesian vector (a, b) in the polar frame at radius r
    let (a, b) = (0.3, -1.1);
    let polar = |r: f64| {
        vec![
            a * phi.cos() + b * phi.sin(),
            (-a * phi.sin() + b * phi.cos()) / r,
        ]
    };
    for t in [0.25, 0.5, 1.0] {
        let h = transport_matrix(&law, 0.0, t, STEP).unwrap().h;
        assert!(diff(&h.mul_vec(&polar(0.5)), &polar(0.5 + 2.0 * t)) < 1e-10);
    }
}

#[test]
fn latitude_circle_holonomy() {
    let (metric, conn) = levi_civita(ManifoldId::Sphere2);
    for theta0 in [PI / 6.0, PI / 4.0, PI / 3.0] {
        let c = CurveSpec::LatitudeCircle { theta0 }
            .build(ManifoldId::Sphere2)
            .unwrap();
        let law = parallel_law(&c, &conn).unwrap();
        let h = transport_matrix(&law, 0.0, 2.0 * PI, STEP).unwrap().h;
        let angle = holonomy_angle(&h, &metric.g(&c.position(0.0))).unwrap();
        assert!(
            angle_distance(angle, latitude_holonomy(theta0)) < 1e-6,
            "{theta0}: {angle}"
        );
        // opposite orientation of the frame rotation
        assert!(angle_distance(-angle, 2.0 * PI * theta0.cos()) < 1e-6);
    }
}

#[test]
fn named_transports_reduce_to_parallel_on_geodesics() {
    let mink = ManifoldId::Minkowski(3);
    let (metric, conn) = levi_civita(mink);
    let inertial = CurveSpec::Line {
        start: vec![0.0, 1.0, 2.0],
        direction: vec![1.25, 0.75, 0.0],
        domain: unit(),
    }
    .build(mink)
    .unwrap();
    let parallel = parallel_law(&inertial, &conn).unwrap();
    for b in [
        fermi_walker_b(&inertial, &metric).unwrap(),
        fermi_b(&inertial, &metric).unwrap(),
    ] {
        let law = law_with_deformation(&inertial, &conn, &b).unwrap();
        for s in unit().linspace(11) {
            assert_eq!(law.coefficients(s).max_diff(&parallel.coefficients(s)), 0.0);
        }
    }
    let (sphere, sphere_conn) = levi_civita(ManifoldId::Sphere2);
    let equator = CurveSpec::GreatCircle.build(ManifoldId::Sphere2).unwrap();
    let b = fermi_walker_b(&equator, &sphere).unwrap();
    let law = law_with_deformation(&equator, &sphere_conn, &b).unwrap();
    let parallel = parallel_law(&equator, &sphere_conn).unwrap();
    for s in equator.domain().linspace(9) {
        assert!(law.coefficients(s).max_diff(&parallel.coefficients(s)) < 1e-15);
    }
}

#[test]
fn fermi_walker_carries_the_four_velocity() {
    let mink = ManifoldId::Minkowski(2);
    let (metric, conn) = levi_civita(mink);
    let c = CurveSpec::AcceleratedWorldline {
        alpha: 1.0,
        domain: unit(),
    }
    .build(mink)
    .unwrap();
    for b in [
        fermi_walker_b(&c, &metric).unwrap(),
        fermi_b(&c, &metric).unwrap(),
    ] {
        let law = law_with_deformation(&c, &conn, &b).unwrap();
        let h = transport_matrix(&law, 0.0, 1.0, STEP).unwrap().h;
        let u = h.mul_vec(&c.velocity(0.0));
        assert!(diff(&u, &c.velocity(1.0)) < 1e-8);
        assert!((metric.inner(&c.position(1.0), &u, &u) + 1.0).abs() < 1e-8);
        // the transport itself is the boost with rapidity 1
        assert!(h.max_diff(&boost(1.0)) < 1e-8);
    }
}

#[test]
fn fermi_walker_preserves_norms_on_circular_orbit() {
    let mink = ManifoldId::Minkowski(3);
    let (metric, conn) = levi_civita(mink);
    let c = CurveSpec::CircularWorldline {
        radius: 1.0,
        omega: 0.6,
    }
    .build(mink)
    .unwrap();
    let law = law_with_deformation(&c, &conn, &fermi_walker_b(&c, &metric).unwrap()).unwrap();
    let u0 = c.velocity(0.0);
    let v0 = vec![0.3, 1.0, 0.5]; // g(u0, v0) = -0.375 + 0.375 = 0
    assert!(metric.inner(&c.position(0.0), &u0, &v0).abs() < 1e-15);
    let g0 = |a: &[f64], b: &[f64]| metric.inner(&c.position(0.0), a, b);
    for t in c.domain().linspace(7).into_iter().skip(1) {
        let h = transport_matrix(&law, 0.0, t, STEP).unwrap().h;
        let (u, v) = (h.mul_vec(&u0), h.mul_vec(&v0));
        let g = |a: &[f64], b: &[f64]| metric.inner(&c.position(t), a, b);
        assert!((g(&u, &u) - g0(&u0, &u0)).abs() < 1e-7);
        assert!((g(&v, &v) - g0(&v0, &v0)).abs() < 1e-7);
        assert!(g(&u, &v).abs() < 1e-7);
        assert!(diff(&u, &c.velocity(t)) < 1e-7);
    }
}

#[test]
fn thomas_precession_per_orbit() {
    let mink = ManifoldId::Minkowski(3);
    let (metric, conn) = levi_civita(mink);
    let (radius, lorentz): (f64, f64) = (2.0, 1.25);
    let v = (1.0 - 1.0 / (lorentz * lorentz)).sqrt();
    let c = CurveSpec::CircularWorldline {
        radius,
        omega: v / radius,
    }
    .build(mink)
    .unwrap();
    let law = law_with_deformation(&c, &conn, &fermi_walker_b(&c, &metric).unwrap()).unwrap();
    let d = c.domain();
    let h = transport_matrix(&law, d.min, d.max, STEP).unwrap().h;
    // comoving frame at the start: radial and boosted tangential directions
    let e_r = vec![0.0, 1.0, 0.0];
    let e_phi = vec![v * lorentz, 0.0, lorentz];
    let x = c.position(d.min);
    let w = h.mul_vec(&e_r);
    let angle = metric
        .inner(&x, &w, &e_phi)
        .atan2(metric.inner(&x, &w, &e_r));
    assert!(
        angle_distance(angle, thomas_angle(lorentz)) < 1e-4,
        "{angle}"
    );
    assert!((angle.abs() - 2.0 * PI * (lorentz - 1.0)).abs() < 1e-4);
}

#[test]
fn fermi_transport_is_an_isometry_orthogonal_to_u() {
    let mink = ManifoldId::Minkowski(3);
    let (metric, conn) = levi_civita(mink);
    let c = CurveSpec::AcceleratedWorldline {
        alpha: 0.8,
        domain: Domain::new(0.0, 2.0).unwrap(),
    }
    .build(mink)
    .unwrap();
    let law = law_with_deformation(&c, &conn, &fermi_b(&c, &metric).unwrap()).unwrap();
    let (v, w) = (vec![0.0, 0.4, 1.0], vec![0.0, -2.0, 0.3]);
    let initial = metric.inner(&c.position(0.0), &v, &w);
    for t in [0.5, 1.0, 2.0] {
        let h = transport_matrix(&law, 0.0, t, STEP).unwrap().h;
        let now = metric.inner(&c.position(t), &h.mul_vec(&v), &h.mul_vec(&w));
        assert!((now - initial).abs() < 1e-8);
    }
}

#[test]
fn constant_deformation_in_flat_space_is_an_exponential() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let e3 = ManifoldId::Euclidean(3);
    let conn = ConnectionField::flat(3);
    let c = CurveSpec::Line {
        start: vec![0.0; 3],
        direction: vec![1.0, -1.0, 0.5],
        domain: unit(),
    }
    .build(e3)
    .unwrap();
    for _ in 0..5 {
        let b = random_matrix(&mut rng, 3, 1.0);
        let law = law_with_deformation(&c, &conn, &DeformationField::constant(b.clone(), unit()))
            .unwrap();
        let (s, t) = (rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0));
        assert!(
            transport_matrix(&law, s, t, STEP)
                .unwrap()
                .h
                .max_diff(&constant_law_transport(&b, s, t))
                < 1e-8
        );
    }
}

#[test]
fn truesdell_radial_field_scales_vectors() {
    let e2 = ManifoldId::Euclidean(2);
    let metric = e2.metric();
    let conn = ConnectionField::flat(2);
    let c = CurveSpec::Line {
        start: vec![1.0, 0.0],
        direction: vec![0.5, 2.0],
        domain: unit(),
    }
    .build(e2)
    .unwrap();
    let radial = VectorField::affine(Matrix::identity(2), vec![0.0, 0.0]).unwrap();
    let law = law_with_deformation(&c, &conn, &truesdell_b(&c, &metric, &radial).unwrap()).unwrap();
    for (s, t) in [(0.0, 1.0), (0.7, 0.2)] {
        let h = transport_matrix(&law, s, t, STEP).unwrap().h;
        let factor = (s - t).exp();
        assert!(h.max_diff(&Matrix::identity(2).scale(factor)) < 1e-10);
    }
}

#[test]
fn jaumann_rigid_rotation_counter_rotates_and_keeps_length() {
    let e2 = ManifoldId::Euclidean(2);
    let metric = e2.metric();
    let conn = ConnectionField::flat(2);
    let c = CurveSpec::Line {
        start: vec![0.2, 0.1],
        direction: vec![1.0, 1.0],
        domain: unit(),
    }
    .build(e2)
    .unwrap();
    let rigid = VectorField::affine(
        Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap(),
        vec![0.0, 0.0],
    )
    .unwrap();
    let law = law_with_deformation(&c, &conn, &jaumann_b(&c, &metric, &rigid).unwrap()).unwrap();
    let v = vec![0.6, -0.8];
    for t in [0.25, 0.5, 1.0] {
        let h = transport_matrix(&law, 0.0, t, STEP).unwrap().h;
        assert!(h.max_diff(&rotation(t)) < 1e-10);
        let w = h.mul_vec(&v);
        assert!((w[0].hypot(w[1]) - 1.0).abs() < 1e-8);
    }
}

#[test]
fn geometry_laws_pass_the_axiom_suite() {
    let (_, sphere_conn) = levi_civita(ManifoldId::Sphere2);
    let (_, polar_conn) = levi_civita(ManifoldId::PolarPlane);
    let mink3 = ManifoldId::Minkowski(3);
    let (mink, mink_conn) = levi_civita(mink3);
    let e2 = ManifoldId::Euclidean(2);
    let flat = ConnectionField::flat(2);
    let line = CurveSpec::Line {
        start: vec![1.0, 0.0],
        direction: vec![0.5, 2.0],
        domain: unit(),
    }
    .build(e2)
    .unwrap();
    let shear = VectorField::affine(
        Matrix::from_rows(&[[0.3, 1.0], [-0.5, 0.2]]).unwrap(),
        vec![0.1, 0.0],
    )
    .unwrap();
    let latitude = CurveSpec::LatitudeCircle { theta0: PI / 3.0 }
        .build(ManifoldId::Sphere2)
        .unwrap();
    let orbit = CurveSpec::CircularWorldline {
        radius: 1.0,
        omega: 0.6,
    }
    .build(mink3)
    .unwrap();
    let boosted = CurveSpec::AcceleratedWorldline {
        alpha: 1.0,
        domain: unit(),
    }
    .build(mink3)
    .unwrap();

    let laws: Vec<(&str, TransportLaw)> = vec![
        (
            "parallel sphere latitude",
            parallel_law(&latitude, &sphere_conn).unwrap(),
        ),
        (
            "parallel sphere wobble",
            parallel_law(&sphere_wobble(), &sphere_conn).unwrap(),
        ),
        (
            "parallel polar line",
            parallel_law(&polar_offset_line(), &polar_conn).unwrap(),
        ),
        (
            "fermi-walker orbit",
            law_with_deformation(&orbit, &mink_conn, &fermi_walker_b(&orbit, &mink).unwrap())
                .unwrap(),
        ),
        (
            "fermi boosted",
            law_with_deformation(&boosted, &mink_conn, &fermi_b(&boosted, &mink).unwrap()).unwrap(),
        ),
        (
            "truesdell shear",
            law_with_deformation(
                &line,
                &flat,
                &truesdell_b(&line, &e2.metric(), &shear).unwrap(),
            )
            .unwrap(),
        ),
        (
            "jaumann shear",
            law_with_deformation(
                &line,
                &flat,
                &jaumann_b(&line, &e2.metric(), &shear).unwrap(),
            )
            .unwrap(),
        ),
    ];
    for (seed, (name, law)) in laws.iter().enumerate() {
        let probes = ProbeSpec::random(law.domain(), law.dim(), 6, seed as u64, STEP);
        let report = verify_axioms(law, &probes, 1e-6);
        assert!(report.passed, "{name}: {report:?}");
    }
}
