use thiserror::Error;

/// Errors produced by the combinatorial and operator layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An enumeration or evaluation was requested beyond its configured size guard.
    #[error("{what}: requested size {requested} exceeds the limit {limit}")]
    SizeLimit {
        what: &'static str,
        requested: usize,
        limit: usize,
    },

    /// Two matrices or operators with incompatible dimensions were combined.
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    /// A partition that fails the non-crossing test was used where a
    /// non-crossing one is required.
    #[error("partition has a crossing; non-crossing required")]
    CrossingPartition,

    /// A set of blocks does not form a partition of {1..n}.
    #[error("invalid partition of {{1..{n}}}: {reason}")]
    InvalidPartition { n: usize, reason: String },

    /// Operators over different Fock bases were mixed in one expression.
    #[error("operator basis mismatch: {0}")]
    BasisMismatch(String),

    /// A truncated-space computation would leak probability past the cutoff,
    /// so its result would not be exact.
    #[error(
        "truncation-unsound: product reaches level {degree} but the space is truncated at {depth}"
    )]
    TruncationUnsound { degree: usize, depth: usize },

    /// A variable index lies outside the covariance specification.
    #[error("variable index {index} out of range for {len} variables")]
    IndexOutOfRange { index: usize, len: usize },

    /// A covariance matrix failed validation.
    #[error("invalid covariance: {0}")]
    InvalidCovariance(String),

    /// A construction needs a nondegenerate parameter (e.g. a cycle of length >= 2).
    #[error("degenerate input: {0}")]
    Degenerate(&'static str),

    /// A scenario file violated the schema.
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
