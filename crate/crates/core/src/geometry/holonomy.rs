//! Rotation content of transport matrices on Riemannian 2-manifolds.

use crate::error::{Error, Result};
use crate::linalg::{rotation_angle_2x2, Matrix};

/// `Ĥ = Lᵀ H L⁻ᵀ` with `g = L Lᵀ`: the matrix of `H` in a `g`-orthonormal
/// frame at a point where start and end metrics agree (closed curves).
pub fn orthonormal_conjugate(h: &Matrix, g: &Matrix) -> Result<Matrix> {
    if h.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            expected: g.dim(),
            found: h.dim(),
        });
    }
    let l = g.cholesky()?;
    let lt = l.transpose();
    Ok(&(&lt * h) * &lt.inverse()?)
}

/// Counterclockwise rotation angle of transported vectors, measured in the
/// orthonormal frame obtained from the coordinate frame by Gram-Schmidt.
/// Result in `(-π, π]`.
pub fn holonomy_angle(h: &Matrix, g: &Matrix) -> Result<f64> {
    rotation_angle_2x2(&orthonormal_conjugate(h, g)?)
}
