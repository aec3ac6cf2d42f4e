use thiserror::Error;

/// Errors raised by the exact arithmetic and operator layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid field configuration: {0}")]
    InvalidField(String),

    #[error("division by zero")]
    DivisionByZero,

    #[error("fields do not match: {0} vs {1}")]
    FieldMismatch(String, String),

    #[error("variable count mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("variable index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },

    /// `d_s` applied to a monomial whose image would leave the function space
    /// (some `t_j` exponent would become `q^{-1}`).
    #[error("d_s escapes the function space at monomial {0}")]
    MonomialEscape(String),

    #[error("no stabilized window in dimension sequence {0:?}")]
    NoStabilization(Vec<u64>),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
