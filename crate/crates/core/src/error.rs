use thiserror::Error;

/// Errors surfaced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("singular matrix")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix has non-real entry at ({row}, {col})")]
    NotRational { row: usize, col: usize },
    #[error("invalid shape: {0}")]
    InvalidShape(String),
    #[error("zero entry at row {row}, column {col}")]
    ZeroEntry { row: usize, col: usize },
    #[error("column {col} sums to {actual}, expected 1")]
    ColumnSumNotOne { col: usize, actual: String },
    #[error("columns are equal (rank < 2)")]
    ColumnsEqual,
    #[error("unsupported arrangement: {0}")]
    Unsupported(String),
    #[error("data matrix has zero total count")]
    EmptyData,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
}

impl Error {
    /// Stable variant name, used by the CLI when reporting violations.
    pub fn name(&self) -> &'static str {
        match self {
            Error::SingularMatrix => "SingularMatrix",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::NotRational { .. } => "NotRational",
            Error::InvalidShape(_) => "InvalidShape",
            Error::ZeroEntry { .. } => "ZeroEntry",
            Error::ColumnSumNotOne { .. } => "ColumnSumNotOne",
            Error::ColumnsEqual => "ColumnsEqual",
            Error::Unsupported(_) => "Unsupported",
            Error::EmptyData => "EmptyData",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::Parse(_) => "Parse",
            Error::InvariantViolation(_) => "InvariantViolation",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
