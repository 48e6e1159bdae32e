use thiserror::Error;

/// Errors produced by model validation and the limit algorithms.
#[derive(Debug, Error)]
pub enum Error {
    /// A transition row violates one of its structural invariants.
    #[error("invalid row: {0}")]
    InvalidRow(String),

    /// A gamble or mass function has the wrong number of entries.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// A state label is not part of the state space.
    #[error("unknown state `{0}`")]
    UnknownState(String),

    /// A gamble entry is NaN or infinite.
    #[error("non-finite value at index {0}")]
    NonFiniteValue(usize),

    /// A combinatorial guard tripped before the computation started.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// The given state set is not a maximal communication class.
    #[error("not a maximal communication class")]
    NotMaximalClass,

    /// An iterative limit computation ran out of budget.
    #[error("iteration budget {budget} exhausted (error bound still {error_bound:e})")]
    IterationBudgetExceeded { budget: usize, error_bound: f64 },

    /// The Hilbert seminorm increased along iterates that must contract.
    /// This cannot happen for a valid operator; it signals a corrupted model.
    #[error("seminorm increased at step {step}: {before:e} -> {after:e}")]
    ContractionViolated { step: usize, before: f64, after: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
