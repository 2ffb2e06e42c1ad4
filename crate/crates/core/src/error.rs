use thiserror::Error;

/// Errors raised by the library. Refusals (budgets, undecided classifications)
/// are kept apart from invalid input so callers can map them to distinct exit codes.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("width mismatch: expected {expected}, got {found}")]
    WidthMismatch { expected: usize, found: usize },

    #[error("variable index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },

    #[error("variable index {0} used twice")]
    IndexCollision(usize),

    #[error("arity {0} exceeds the supported maximum of 64")]
    ArityTooLarge(usize),

    #[error("malformed pairing: {0}")]
    MalformedPairing(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("signature is not EO: {0}")]
    NotEo(String),

    #[error("input not pure-up: {0}")]
    NotPureUp(String),

    #[error("refused: {0}")]
    Refused(String),

    #[error("walk cycled: {0}")]
    WalkCycled(String),

    #[error("internal invariant violation: {0}")]
    Internal(String),
}

impl Error {
    /// True for outcomes that are refusals rather than bad input or bugs.
    pub fn is_refusal(&self) -> bool {
        matches!(self, Error::Refused(_) | Error::WalkCycled(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
