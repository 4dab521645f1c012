use thiserror::Error;

/// Errors raised by the library.
///
/// The variants map onto the CLI exit codes: [`Error::Parse`] is a parse
/// failure, [`Error::Audit`] an audit failure, [`Error::Internal`] a bug, and
/// every other variant a violated precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("substitution denominator for `{0}` is the zero polynomial")]
    ZeroDenominator(String),

    #[error("unknown label `{0}`")]
    UnknownLabel(String),

    #[error("audit failure in {component}: {item}")]
    Audit { component: String, item: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn precondition<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Precondition(msg.into()))
}
