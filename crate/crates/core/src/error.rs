//! Shared error type. Every fallible operation in the crate returns
//! [`Result`]; nothing panics on bad input or silently truncates.

use thiserror::Error;

use crate::automorphism::ValidationReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}x{expected}, got {got}x{got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("matrix is not invertible (determinant {det})")]
    NotInvertible { det: String },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("element cap exceeded: limit {limit}, reached {reached}")]
    ResourceLimit { limit: usize, reached: usize },

    #[error("automorphism validation failed: {}", .0.summary())]
    InvalidAutomorphism(Box<ValidationReport>),

    #[error("subset is not a subgroup: {0}")]
    NotASubgroup(String),

    #[error("subgroup is not normal: {0}")]
    NotNormal(String),

    #[error("subgroup is not invariant under the automorphism: {0}")]
    NotInvariant(String),

    #[error("character does not descend to the requested modulus: {0}")]
    NonDescending(String),

    #[error("element not found in group index")]
    ElementNotInGroup,

    #[error("construction self-check failed: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
