use thiserror::Error;

/// Errors raised by the number-theoretic engine.
///
/// `EffortExceeded` and `BoundExceeded` are per-instance signals: sweeps record
/// them as skipped rows instead of aborting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("factoring budget exhausted on {value}")]
    EffortExceeded { value: String },

    #[error("sequence index {index} exceeds cap {cap}")]
    CapExceeded { index: u64, cap: u64 },

    #[error("{what} {value} exceeds bound {bound}")]
    BoundExceeded {
        what: &'static str,
        value: String,
        bound: String,
    },

    #[error("field is Q(i), excluded from the family")]
    QiExcluded,

    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
