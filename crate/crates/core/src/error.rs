use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Operands live over different groups or modules.
    #[error("context mismatch: {0}")]
    Context(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    Dimension { expected: usize, found: usize },

    /// The operation is not available for this input class (e.g. enumerating
    /// an infinite group).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A precondition of the operation does not hold.
    #[error("rejected: {0}")]
    Rejected(String),

    /// Malformed definition (group, module, map, cocycle).
    #[error("invalid: {0}")]
    Invalid(String),

    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },

    /// An internal identity that must always hold failed. Always a defect.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn parse(column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            column,
            message: message.into(),
        }
    }
}
