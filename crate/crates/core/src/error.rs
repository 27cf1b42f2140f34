use thiserror::Error;

/// Errors raised by the computational modules.
///
/// The variant name is always the first token of the rendered message so
/// that command-line output can be matched on it.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("OracleBoundExceeded: d*l = {dl} exceeds the tableau oracle bound {bound}")]
    OracleBoundExceeded { dl: u64, bound: u64 },

    #[error("InvalidPartition: {0}")]
    InvalidPartition(String),

    #[error("ExactRangeExceeded: N = {requested} exceeds the exact-arithmetic bound {bound}")]
    ExactRangeExceeded { requested: usize, bound: usize },

    #[error("FormatError: {0}")]
    FormatError(String),

    #[error("InvariantViolation({check}): {detail}")]
    InvariantViolation { check: &'static str, detail: String },

    #[error("OutOfRange: {0}")]
    OutOfRange(String),

    #[error("NotPositiveDefinite: form ({a},{b},{c})")]
    NotPositiveDefinite { a: i64, b: i64, c: i64 },

    #[error("InvalidDiscriminant: {0}")]
    InvalidDiscriminant(i64),

    #[error("NonFundamentalDiscriminant: {0}")]
    NonFundamentalDiscriminant(i64),

    #[error("HypothesisViolated: (d, l) = ({d}, {l}) requires l >= 2, d >= 1 and d*l > 4")]
    HypothesisViolated { d: u32, l: u32 },

    #[error("InsufficientSamples: need at least {needed}, got {got}")]
    InsufficientSamples { needed: usize, got: usize },

    #[error("Io: {0}")]
    Io(String),
}

impl Error {
    /// Bare variant name, e.g. `OutOfRange`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::OracleBoundExceeded { .. } => "OracleBoundExceeded",
            Error::InvalidPartition(_) => "InvalidPartition",
            Error::ExactRangeExceeded { .. } => "ExactRangeExceeded",
            Error::FormatError(_) => "FormatError",
            Error::InvariantViolation { .. } => "InvariantViolation",
            Error::OutOfRange(_) => "OutOfRange",
            Error::NotPositiveDefinite { .. } => "NotPositiveDefinite",
            Error::InvalidDiscriminant(_) => "InvalidDiscriminant",
            Error::NonFundamentalDiscriminant(_) => "NonFundamentalDiscriminant",
            Error::HypothesisViolated { .. } => "HypothesisViolated",
            Error::InsufficientSamples { .. } => "InsufficientSamples",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
