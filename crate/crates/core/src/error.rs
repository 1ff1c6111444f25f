use alloc::string::String;
use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    DimensionMismatch {
        expected: usize,
        found: usize,
    },
    RankMismatch {
        expected: (usize, usize),
        found: (usize, usize),
    },
    SlotOutOfRange {
        slot: usize,
        rank: usize,
    },
    ContractionOnScalar,
    Singular,
    NotPositiveDefinite,
    OutOfDomain {
        s: f64,
        min: f64,
        max: f64,
    },
    DegenerateDomain,
    InvalidStep(f64),
    NonFinite {
        s: f64,
    },
    MissingDerivative,
    MissingAcceleration,
    NullVelocity {
        s: f64,
    },
    NotUnitTimelike {
        s: f64,
        norm: f64,
    },
    InvalidSamples(String),
    InvalidParameter(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DimensionMismatch { expected, found } => {
                write!(f, "dimension mismatch: expected {expected}, found {found}")
            }
            Error::RankMismatch { expected, found } => write!(
                f,
                "tensor type mismatch: expected ({}, {}), found ({}, {})",
                expected.0, expected.1, found.0, found.1
            ),
            Error::SlotOutOfRange { slot, rank } => {
                write!(f, "slot {slot} out of range for rank {rank}")
            }
            Error::ContractionOnScalar => {
                f.write_str("cannot contract a tensor without both an upper and a lower slot")
            }
            Error::Singular => f.write_str("singular matrix"),
            Error::NotPositiveDefinite => f.write_str("matrix is not positive definite"),
            Error::OutOfDomain { s, min, max } => {
                write!(f, "parameter {s} outside domain [{min}, {max}]")
            }
            Error::DegenerateDomain => f.write_str("domain has zero length"),
            Error::InvalidStep(h) => write!(f, "invalid integration step {h}"),
            Error::NonFinite { s } => write!(f, "non-finite values encountered at s = {s}"),
            Error::MissingDerivative => f.write_str("derivative data required but not supplied"),
            Error::MissingAcceleration => f.write_str("curve has no acceleration"),
            Error::NullVelocity { s } => write!(f, "null velocity at s = {s}"),
            Error::NotUnitTimelike { s, norm } => {
                write!(
                    f,
                    "velocity is not unit timelike at s = {s} (g(u,u) = {norm})"
                )
            }
            Error::InvalidSamples(msg) => write!(f, "invalid samples: {msg}"),
            Error::InvalidParameter(msg) => write!(f, "invalid parameter: {msg}"),
        }
    }
}

impl core::error::Error for Error {}
