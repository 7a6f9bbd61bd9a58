//! Error types shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors produced by sensor placement, solvers, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix has zero rows or columns")]
    EmptyMatrix,

    #[error("non-finite value encountered in {context}")]
    NonFinite { context: String },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("max_pivots {requested} exceeds min(rows, cols) = {max}")]
    MaxPivotsTooLarge { requested: usize, max: usize },

    #[error("rank {requested} exceeds the largest computable rank {max}")]
    RankTooLarge { requested: usize, max: usize },

    #[error("{requested} basis modes requested but only {max} are available")]
    TooManyModes { requested: usize, max: usize },

    #[error("cost vector entries and weight must be finite and non-negative")]
    NegativeCost,

    #[error("sparsity budget {requested} exceeds min(rows, atoms) = {max}")]
    InfeasibleSparsity { requested: usize, max: usize },

    #[error("dictionary has no nonzero column")]
    ZeroDictionary,

    #[error("l1 penalty must be positive, got {alpha}")]
    NonPositiveAlpha { alpha: f64 },

    #[error("classification requires at least two classes")]
    SingleClass,

    #[error("classifier used before fit")]
    NotFitted,

    #[error("matrix is singular or not positive definite")]
    SingularMatrix,

    #[error("{what} = {value} is outside the valid range [{min}, {max}]")]
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },

    #[error("sparse solution is identically zero; try a smaller l1 penalty")]
    NoSensorsSelected,

    #[error("index {index} out of range for {n} candidates")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("file not found: {0}")]
    FileNotFound(PathBuf),

    #[error("parse error at line {line}: {message}")]
    ParseError { line: usize, message: String },

    #[error("line {line}: first column is not an integer label")]
    LabelColumnMissing { line: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn dim(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }
}
