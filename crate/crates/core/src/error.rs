use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// The source description itself is malformed (as opposed to merely
    /// unnormalized).
    #[error("malformed source: {0}")]
    Structural(String),

    #[error("normalization failed: total squared mass {mass} differs from 1 by more than {tol:e}")]
    Normalization { mass: f64, tol: f64 },

    #[error("truncation {rows}x{cols} exceeds the element budget of {budget}")]
    Resource {
        rows: usize,
        cols: usize,
        budget: usize,
    },

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not nonnegative-definite (eigenvalue {eigenvalue:e})")]
    NegativeEigenvalue { eigenvalue: f64 },

    /// The minor route and the spectral route disagree. Indicates a bug.
    #[error("internal consistency check failed: {0}")]
    Consistency(String),

    #[error(transparent)]
    Parse(#[from] crate::format::ParseError),
}
