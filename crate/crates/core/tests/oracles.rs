//! The reference computations reproduce values computed independently in
//! 40-digit arithmetic; these numbers are frozen here.

// frozen values are printed with round-trip precision
#![allow(clippy::excessive_precision)]

mod common;

use std::f64::consts::PI;

use common::*;
use pathtransport::{Matrix, TensorComponents};

#[test]
fn series_exponential_matches_frozen_values() {
    let z = Matrix::from_rows(&[[0.3, -0.7, 0.2], [0.5, 0.1, -0.4], [-0.6, 0.8, -0.2]]).unwrap();
    let frozen = Matrix::from_rows(&[
        [
            0.62279995169405851,
            0.52891784963498566,
            -0.054521207324824316,
        ],
        [
            -0.2490008929780943,
            0.68459198964249786,
            0.37806314772340611,
        ],
        [
            0.61435512063860706,
            -0.53073054611474515,
            1.0244882877680692,
        ],
    ])
    .unwrap();
    assert!(expm_series(&z.scale(-0.9)).max_diff(&frozen) < 1e-15);
    assert!(constant_law_transport(&z, 0.1, 1.0).max_diff(&frozen) < 1e-15);

    let defective = Matrix::from_rows(&[[1.0, -2.0], [0.25, -0.5]]).unwrap();
    let frozen = Matrix::from_rows(&[
        [1.9099828292364027, -1.8199656584728053],
        [0.22749570730910067, 0.54500858538179866],
    ])
    .unwrap();
    let d = expm_series(&defective.scale(0.75)).max_diff(&frozen);
    assert!(d < 1e-14, "{d:e}");
}

#[test]
fn series_exponential_closed_forms() {
    let j = Matrix::from_rows(&[[0.0, -1.0], [1.0, 0.0]]).unwrap();
    assert!(expm_series(&j.scale(PI / 2.0)).max_diff(&j) < 1e-15);
    assert!(expm_series(&j.scale(7.5)).max_diff(&rotation(7.5)) < 1e-13);
    let nil = Matrix::from_rows(&[[0.0, 1.0], [0.0, 0.0]]).unwrap();
    let e = expm_series(&nil.scale(-0.6));
    assert!(e.max_diff(&Matrix::from_rows(&[[1.0, -0.6], [0.0, 1.0]]).unwrap()) == 0.0);
    let k = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
    assert!(expm_series(&k.scale(0.8)).max_diff(&boost(0.8)) < 1e-15);
}

#[test]
fn brute_force_transport_on_hand_cases() {
    let h = Matrix::diag(&[2.0, 3.0]);
    let k = Matrix::diag(&[0.5, 1.0 / 3.0]);
    let v = transport_brute_force(&h, &k, &TensorComponents::vector(&[1.0, 1.0]));
    assert_eq!(v.values(), &[2.0, 3.0]);
    let w = transport_brute_force(&h, &k, &TensorComponents::covector(&[1.0, 1.0]));
    assert_eq!(w.values(), &[0.5, 1.0 / 3.0]);
    // the identity endomorphism is fixed: H I K = I
    let id = transport_brute_force(&h, &k, &TensorComponents::from_matrix(&Matrix::identity(2)));
    assert_eq!(id.values(), &[1.0, 0.0, 0.0, 1.0]);
    assert_eq!(
        transport_brute_force(&h, &k, &TensorComponents::scalar(7.0)).values(),
        &[7.0]
    );
}

#[test]
fn closed_form_angles() {
    assert!((thomas_angle(1.25) + PI / 2.0).abs() < 1e-15);
    for theta0 in [PI / 6.0, PI / 4.0, PI / 3.0] {
        let solid = 2.0 * PI * (1.0 - theta0.cos());
        assert!(angle_distance(latitude_holonomy(theta0), solid) < 1e-14);
        assert!(angle_distance(-latitude_holonomy(theta0), 2.0 * PI * theta0.cos()) < 1e-14);
    }
    assert!(angle_distance(0.1, 0.1 + 2.0 * PI) < 1e-15);
    assert!((angle_distance(PI, -PI)).abs() < 1e-15);
}
