//! Dense component storage for type-(p,q) tensors in one n-dimensional fiber.
//!
//! Components are stored row-major over `p + q` slots, all contravariant
//! slots first and then all covariant ones. A (1,1) tensor therefore has the
//! same layout as a [`Matrix`] whose row index is the upper index.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::Matrix;

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TensorComponents {
    p: usize,
    q: usize,
    dim: usize,
    values: Vec<f64>,
}

impl TensorComponents {
    pub fn new(p: usize, q: usize, dim: usize, values: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidParameter(
                "tensor dimension must be positive".into(),
            ));
        }
        let len = dim.pow((p + q) as u32);
        if values.len() != len {
            return Err(Error::DimensionMismatch {
                expected: len,
                found: values.len(),
            });
        }
        Ok(Self { p, q, dim, values })
    }

    pub fn zeros(p: usize, q: usize, dim: usize) -> Self {
        Self {
            p,
            q,
            dim,
            values: vec![0.0; dim.pow((p + q) as u32)],
        }
    }

    pub fn scalar(value: f64) -> Self {
        Self {
            p: 0,
            q: 0,
            dim: 1,
            values: vec![value],
        }
    }

    pub fn vector(components: &[f64]) -> Self {
        Self {
            p: 1,
            q: 0,
            dim: components.len(),
            values: components.to_vec(),
        }
    }

    pub fn covector(components: &[f64]) -> Self {
        Self {
            p: 0,
            q: 1,
            dim: components.len(),
            values: components.to_vec(),
        }
    }

    /// (1,1) tensor with the matrix's rows as the upper index.
    pub fn from_matrix(m: &Matrix) -> Self {
        Self {
            p: 1,
            q: 1,
            dim: m.dim(),
            values: m.as_slice().to_vec(),
        }
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if (self.p, self.q) != (1, 1) {
            return Err(Error::RankMismatch {
                expected: (1, 1),
                found: (self.p, self.q),
            });
        }
        Matrix::from_row_major(self.dim, self.values.clone())
    }

    #[inline]
    pub fn contravariant_rank(&self) -> usize {
        self.p
    }

    #[inline]
    pub fn covariant_rank(&self) -> usize {
        self.q
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.p + self.q
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_scalar(&self) -> bool {
        self.p == 0 && self.q == 0
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    /// Component at a full multi-index (upper indices first).
    pub fn get(&self, index: &[usize]) -> f64 {
        self.values[self.flat_index(index)]
    }

    pub fn flat_index(&self, index: &[usize]) -> usize {
        debug_assert_eq!(index.len(), self.rank());
        index.iter().fold(0, |acc, &i| acc * self.dim + i)
    }

    pub fn same_type(&self, other: &Self) -> bool {
        // Scalars are dimension-agnostic.
        self.p == other.p && self.q == other.q && (self.is_scalar() || self.dim == other.dim)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| v * k).collect(),
            ..self.clone()
        }
    }

    /// `a * self + b * other`
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        self.check_same_type(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Ok(Self {
            values,
            ..self.clone()
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn max_diff(&self, other: &Self) -> Result<f64> {
        self.check_same_type(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs())))
    }

    fn check_same_type(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim && !(self.is_scalar() && other.is_scalar()) {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        if (self.p, self.q) != (other.p, other.q) {
            return Err(Error::RankMismatch {
                expected: (self.p, self.q),
                found: (other.p, other.q),
            });
        }
        Ok(())
    }

    /// Applies `upper` to every contravariant slot and `lower` to every
    /// covariant slot: `T'^{..a..} = upper[a][b] T^{..b..}` and
    /// `T'_{..a..} = lower[a][b] T_{..b..}`.
    pub(crate) fn transform_slots(&self, upper: &Matrix, lower: &Matrix) -> Result<Self> {
        if self.is_scalar() {
            return Ok(self.clone());
        }
        for m in [upper, lower] {
            if m.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: m.dim(),
                });
            }
        }
        let mut out = self.clone();
        for slot in 0..self.rank() {
            let m = if slot < self.p { upper } else { lower };
            out = out.apply_to_slot(slot, m);
        }
        Ok(out)
    }

    pub(crate) fn apply_to_slot(&self, slot: usize, m: &Matrix) -> Self {
        let n = self.dim;
        let stride = n.pow((self.rank() - 1 - slot) as u32);
        let block = stride * n;
        let mut values = vec![0.0; self.values.len()];
        for outer in (0..self.values.len()).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for a in 0..n {
                    let mut acc = 0.0;
                    for b in 0..n {
                        acc += m[(a, b)] * self.values[base + b * stride];
                    }
                    values[base + a * stride] = acc;
                }
            }
        }
        Self {
            values,
            ..self.clone()
        }
    }
}

/// Outer product. Upper slots of `a` precede upper slots of `b`, likewise for
/// the lower slots.
pub fn tensor_product(a: &TensorComponents, b: &TensorComponents) -> Result<TensorComponents> {
    let dim = match (a.is_scalar(), b.is_scalar()) {
        (true, true) => 1,
        (true, false) => b.dim,
        (false, true) => a.dim,
        (false, false) => {
            if a.dim != b.dim {
                return Err(Error::DimensionMismatch {
                    expected: a.dim,
                    found: b.dim,
                });
            }
            a.dim
        }
    };
    let (p, q) = (a.p + b.p, a.q + b.q);
    let a_up = dim.pow(a.p as u32);
    let a_lo = dim.pow(a.q as u32);
    let b_up = dim.pow(b.p as u32);
    let b_lo = dim.pow(b.q as u32);
    let mut values = Vec::with_capacity(a.values.len() * b.values.len());
    // result index = (iu_a, iu_b, il_a, il_b)
    for iu_a in 0..a_up {
        for iu_b in 0..b_up {
            for il_a in 0..a_lo {
                for il_b in 0..b_lo {
                    values.push(a.values[iu_a * a_lo + il_a] * b.values[iu_b * b_lo + il_b]);
                }
            }
        }
    }
    Ok(TensorComponents { p, q, dim, values })
}

/// Contracts upper slot `upper_slot` (0-based among the contravariant slots)
/// with lower slot `lower_slot` (0-based among the covariant slots).
pub fn contract(
    t: &TensorComponents,
    upper_slot: usize,
    lower_slot: usize,
) -> Result<TensorComponents> {
    if t.p == 0 || t.q == 0 {
        return Err(Error::ContractionOnScalar);
    }
    if upper_slot >= t.p {
        return Err(Error::SlotOutOfRange {
            slot: upper_slot,
            rank: t.p,
        });
    }
    if lower_slot >= t.q {
        return Err(Error::SlotOutOfRange {
            slot: lower_slot,
            rank: t.q,
        });
    }
    let n = t.dim;
    let rank = t.rank();
    let up_pos = upper_slot;
    let lo_pos = t.p + lower_slot;
    let out_rank = rank - 2;
    let out_len = n.pow(out_rank as u32);
    let mut values = vec![0.0; out_len];
    let mut full = vec![0usize; rank];
    let mut reduced = vec![0usize; out_rank];
    for (flat, slot) in values.iter_mut().enumerate() {
        let mut rem = flat;
        for r in (0..out_rank).rev() {
            reduced[r] = rem % n;
            rem /= n;
        }
        let mut it = reduced.iter();
        for (pos, f) in full.iter_mut().enumerate() {
            if pos != up_pos && pos != lo_pos {
                *f = *it.next().unwrap_or(&0);
            }
        }
        let mut acc = 0.0;
        for k in 0..n {
            full[up_pos] = k;
            full[lo_pos] = k;
            acc += t.get(&full);
        }
        *slot = acc;
    }
    let dim = if out_rank == 0 { 1 } else { n };
    Ok(TensorComponents {
        p: t.p - 1,
        q: t.q - 1,
        dim,
        values,
    })
}
