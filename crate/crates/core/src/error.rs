use alloc::string::String;

/// Errors raised by the geometry, quadrature and verification routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("ambient dimension {0} is odd; a complex structure needs an even dimension")]
    OddDimension(usize),
    #[error("frame is not orthonormal (Gram deviation {0:e})")]
    NonOrthonormalFrame(f64),
    #[error("body kind `{0}` is not known to be convex")]
    NotConvex(&'static str),
    #[error("body is not a certified member of the required class: {0}")]
    NotCertified(String),
    #[error("density drops below 1 on the body (value {value} at a sampled point)")]
    DensityBelowOne { value: f64 },
    #[error("not invariant under the coordinate-pair rotations (max deviation {0:e})")]
    NotRthetaInvariant(f64),
    #[error("no sample landed inside the body; it looks unbounded or degenerate")]
    Unbounded,
}

pub type Result<T, E = Error> = core::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
