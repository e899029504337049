use thiserror::Error;

/// Errors raised by the library. Verdict-style outcomes (budget exhaustion,
/// failed conditions) are reported through result types, not through this enum.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed datum: {0}")]
    Malformed(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid field `{field}`: {message}")]
    Field { field: String, message: String },

    #[error("index {index} out of range for size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("simple root {index} is not odd isotropic (a_ii = {diagonal}, p = {parity})")]
    NotIsotropic {
        index: usize,
        diagonal: String,
        parity: u8,
    },

    #[error("size {size} exceeds the canonical-form limit of {limit}")]
    SizeExceeded { size: usize, limit: usize },

    #[error("not an even generalized Cartan matrix: {0}")]
    NotEvenGcm(String),

    #[error("budget must be positive: {0}")]
    InvalidBudget(String),

    #[error("matrix is elemental; nothing to decompose")]
    Elemental,

    #[error("{0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
