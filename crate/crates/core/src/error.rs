use thiserror::Error;

/// Errors raised by the decision procedures.
///
/// Every variant describes a domain failure: the input was well-formed but
/// outside what the requested operation accepts.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("matrix is not unipotent: (M - I)^{dim} != 0")]
    NotUnipotent { dim: usize },

    #[error("matrix is not quasi-unipotent: characteristic polynomial has non-cyclotomic factor {witness}")]
    NotQuasiUnipotent { witness: String },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
