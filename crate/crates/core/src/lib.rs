//! Linear transports of tensors along paths.
//!
//! A transport along a curve is fixed by its coefficient matrix `Γ(s)`
//! ([`TransportLaw`]). The two-point transport matrix `H(t, s)` solves the
//! fundamental-matrix equation `∂H/∂t = -Γ(t) H`, `H(s, s) = I`
//! ([`transport_matrix`]) and acts on arbitrary type-(p,q) tensors
//! ([`transport_tensor`]). The same `Γ` defines a derivation along the curve
//! ([`derivation_at`]) that annihilates every transported field.
//!
//! The [`geometry`] module builds laws from a metric or connection and curve
//! kinematics: parallel, Fermi-Walker, Fermi, Truesdell and Jaumann
//! transports.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod axioms;
pub mod basis;
pub mod error;
pub mod geometry;
pub mod interp;
pub mod law;
pub mod linalg;
pub mod ode;
pub mod tensor;
pub mod transport;

pub use axioms::{verify_axioms, AxiomReport, AxiomResidual, ProbeSpec};
pub use basis::{change_law_basis, change_tensor_basis, BasisChange, BasisChangeField};
pub use error::{Error, Result};
pub use interp::Interpolation;
pub use law::{Domain, TransportLaw};
pub use linalg::Matrix;
pub use ode::{solve_fundamental, solve_fundamental_on_mesh};
pub use tensor::{contract, tensor_product, TensorComponents};
pub use transport::{
    coefficients_from_derivation, coefficients_from_transport, default_step, derivation_at,
    derivation_of_transported, derivations_of_transported, transport_matrix, transport_tensor,
    TensorFieldAlongPath, TransportMatrix,
};
