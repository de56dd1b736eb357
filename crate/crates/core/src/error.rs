use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent user input (files, labels, indices).
    #[error("input error: {0}")]
    Input(String),

    #[error("unknown action {label:?} for player {player}")]
    UnknownAction { player: usize, label: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    /// A combinatorial enumeration would exceed its configured cap.
    #[error("{what}: {count} exceeds the cap of {cap}")]
    SizeCap { what: String, count: u128, cap: u128 },

    #[error("unsupported variant: {0}")]
    Unsupported(String),

    #[error("not zero-sum: {0}")]
    NotZeroSum(String),

    /// Two independent computations disagreed, or an LP that must be
    /// feasible was not.
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
