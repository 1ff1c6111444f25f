//! Transport laws from metrics, connections and curve kinematics.

pub mod catalog;
pub mod connection;
pub mod curve;
pub mod holonomy;
pub mod laws;
pub mod metric;

pub use catalog::{CurveSpec, ManifoldId};
pub use connection::{sigma_of_x, ConnectionField, VectorField};
pub use curve::Curve;
pub use holonomy::{holonomy_angle, orthonormal_conjugate};
pub use laws::{
    covariant_acceleration, fermi_b, fermi_walker_b, jaumann_b, law_with_deformation, parallel_law,
    truesdell_b, vorticity, DeformationField,
};
pub use metric::{christoffels_from_metric, Array3, MetricField};
