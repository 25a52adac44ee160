use thiserror::Error;

/// Errors produced anywhere in the library.
///
/// Variants marked as self-checks indicate an arithmetic bug (or a
/// counterexample to a known theorem) rather than bad user input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("power series has zero constant term and cannot be inverted")]
    ZeroConstantTerm,

    #[error("division by zero")]
    DivisionByZero,

    #[error("conductor {from} does not divide target conductor {to}")]
    ConductorMismatch { from: u32, to: u32 },

    #[error("conductor {0} exceeds the supported maximum")]
    ConductorTooLarge(u64),

    #[error("gcd(q, s_1, ..., s_n) = {gcd}, expected 1")]
    GcdViolation { gcd: u64 },

    #[error("expected {expected} parameters for dimension {d}, got {got}")]
    LengthMismatch { d: u32, expected: usize, got: usize },

    #[error("not a lens space: {0}")]
    NotSpaceForm(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid group model: {0}")]
    InvalidGroup(String),

    /// Self-check failure inside a computation.
    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("incompatible truncation: need at least {needed} terms, got {got}")]
    IncompatibleTruncation { needed: usize, got: usize },

    #[error("no element of order {0} in the group")]
    OrderAbsent(u32),

    #[error("q = {0} does not have totient 6")]
    WrongTotient(u32),

    #[error("unsupported group order {0} (at most 7)")]
    UnsupportedOrder(u32),

    #[error("isospectral but non-conjugate classes: {0} and {1}")]
    RigidityViolation(String, String),

    /// Self-check failure while reconstructing a group roster.
    #[error("defining relation failed: {0}")]
    RelationCheckFailed(String),

    #[error("{k} does not divide {q}")]
    NonDivisor { k: u32, q: u32 },

    #[error("coefficient budget exceeded: need {needed}, cap {cap}")]
    BudgetExceeded { needed: u64, cap: u64 },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
