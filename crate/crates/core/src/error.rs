use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Operands live over different variable counts or have the wrong shape.
    #[error("structural error: {0}")]
    Structure(String),

    #[error("invalid action at row {row:?}, column {col:?}: {message}")]
    Validation {
        message: String,
        row: Option<usize>,
        col: Option<usize>,
    },

    #[error("form is not homogeneous: found weights {first} and {second}")]
    Inhomogeneous { first: String, second: String },

    #[error("route unsupported for this action: {0}")]
    UnsupportedRoute(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("resource guard: {0}")]
    Resource(String),

    /// An identity that must hold failed; this indicates a bug, not a mathematical outcome.
    #[error("engine inconsistency: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
