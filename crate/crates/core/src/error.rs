use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report. [`Error::code`] gives the stable
/// kebab-case identifier used in CLI messages and across the C ABI.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("dimension {dim} exceeds the configured maximum {max}")]
    DimTooLarge { dim: usize, max: usize },

    #[error("order {order} exceeds the maximum supported order {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("matrix data has length {len}, expected {expected}")]
    BadLength { len: usize, expected: usize },

    #[error("non-finite entry at index {index}")]
    NonFinite { index: usize },

    #[error("matrix is numerically singular")]
    Singular,

    #[error("core-nilpotent splitting is ill-conditioned (condition number {cond:.3e})")]
    IllConditionedSplitting { cond: f64 },

    #[error("generation failed for family `{family}` after {attempts} attempts")]
    GenerationFailed { family: String, attempts: usize },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimMismatch { .. } => "dim-mismatch",
            Error::DimTooLarge { .. } => "dim-too-large",
            Error::OrderTooLarge { .. } => "order-too-large",
            Error::BadLength { .. } => "bad-length",
            Error::NonFinite { .. } => "non-finite",
            Error::Singular => "singular",
            Error::IllConditionedSplitting { .. } => "ill-conditioned-splitting",
            Error::GenerationFailed { .. } => "generation-failed",
            Error::InvalidParam(_) => "invalid-param",
            Error::Parse(_) => "parse",
            Error::Io { .. } => "io",
        }
    }
}

impl Error {
    pub(crate) fn io(path: &std::path::Path, e: std::io::Error) -> Self {
        Error::Io { path: path.display().to_string(), message: e.to_string() }
    }
}

pub(crate) fn ensure_same_dim(left: usize, right: usize) -> Result<()> {
    if left == right {
        Ok(())
    } else {
        Err(Error::DimMismatch { left, right })
    }
}
