use thiserror::Error;

use crate::fock::SpaceDescriptor;

pub type Result<T> = std::result::Result<T, HesError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HesError {
    #[error("invalid mode dimension {0}: modes need an even dimension >= 2")]
    InvalidModeDim(usize),

    #[error("space mismatch: {left} vs {right}")]
    SpaceMismatch {
        left: SpaceDescriptor,
        right: SpaceDescriptor,
    },

    #[error("amplitude vector has length {got}, space {space} needs {expected}")]
    AmplitudeLength {
        space: SpaceDescriptor,
        expected: usize,
        got: usize,
    },

    #[error(
        "truncation residual {residual:e} at dim {dim} exceeds tolerance {tol:e}; use a larger mode dimension"
    )]
    Truncation { residual: f64, tol: f64, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("factor index {index} out of range for space {space}")]
    FactorIndex {
        index: usize,
        space: SpaceDescriptor,
    },

    #[error("factor {index} of {space} is not a {expected}")]
    FactorKind {
        index: usize,
        space: SpaceDescriptor,
        expected: &'static str,
    },

    #[error("invalid bipartition: {0}")]
    InvalidCut(String),

    #[error("state is not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(f64),

    #[error("zero-norm vector cannot be normalized")]
    ZeroNorm,

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("state has weight {residual:e} outside the parity Bell span")]
    OutOfSpan { residual: f64 },

    #[error("expansion mismatch: {0}")]
    ExpansionMismatch(String),

    #[error("unknown label '{0}'")]
    UnknownLabel(String),
}
