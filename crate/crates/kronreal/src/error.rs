//! Error signals shared by all modules.

use num_complex::Complex64;

/// Everything that can go wrong inside the calculus.
///
/// Each variant carries the numbers that triggered it so callers (and the
/// CLI's structured error output) can report exact values.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {details}")]
    DimMismatch { op: &'static str, details: String },

    #[error("matrix is singular to working precision (pivot {pivot:.3e}, threshold {threshold:.3e})")]
    Singular { pivot: f64, threshold: f64 },

    #[error("evaluation point z = {z} is a pole to working precision")]
    Pole { z: Complex64 },

    #[error("vector is not unit-norm (|w| = {norm:.17e})")]
    NotUnitNorm { norm: f64 },

    #[error("D block is not a scalar multiple of the identity (off-diagonal {off_diag:.3e}, diagonal spread {spread:.3e})")]
    NotScalarD { off_diag: f64, spread: f64 },

    #[error("eigenvalues are not pairwise distinct (smallest gap {min_gap:.3e})")]
    RepeatedEigenvalues { min_gap: f64 },

    #[error("no admissible projection pair among {pairs_tried} eigenvalue-subset pairs")]
    NoAdmissiblePair { pairs_tried: usize },

    #[error("precondition violated: {check} residual {residual:.3e} exceeds {limit:.3e}")]
    Precondition {
        check: &'static str,
        residual: f64,
        limit: f64,
    },

    #[error("iteration failed to converge in {what}")]
    NoConvergence { what: &'static str },

    #[error("non-finite value in {what}")]
    NonFinite { what: &'static str },

    #[error("invalid JSON input: {0}")]
    Json(String),
}

impl Error {
    /// Stable machine-readable tag, used by the CLI's error envelope.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DimMismatch { .. } => "dimension-mismatch",
            Error::Singular { .. } => "singular",
            Error::Pole { .. } => "pole",
            Error::NotUnitNorm { .. } => "not-unit-norm",
            Error::NotScalarD { .. } => "d-not-scalar",
            Error::RepeatedEigenvalues { .. } => "repeated-eigenvalues",
            Error::NoAdmissiblePair { .. } => "no-admissible-pair",
            Error::Precondition { .. } => "precondition-violation",
            Error::NoConvergence { .. } => "no-convergence",
            Error::NonFinite { .. } => "non-finite",
            Error::Json(_) => "json",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(op: &'static str, details: impl Into<String>) -> Error {
    Error::DimMismatch {
        op,
        details: details.into(),
    }
}
