use thiserror::Error;

/// Errors shared by every module in this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A parameter is outside the domain an operation accepts.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// The prime table is too small for the requested index; rebuild with a
    /// larger limit instead of silently extending.
    #[error("prime table with limit {limit} has {have} primes, need index {needed}")]
    OutOfRange {
        limit: u64,
        have: usize,
        needed: usize,
    },

    /// An exact search ran out of its node budget. `lower` and `upper` bound
    /// the true optimum.
    #[error("search budget exhausted after {nodes} nodes (bounds: [{lower}, {upper}])")]
    BudgetExceeded { nodes: u64, lower: u64, upper: u64 },

    /// A claimed prime cover misses some element larger than 1.
    #[error("cover invalid: {element} has no divisor in the cover")]
    CoverInvalid { element: u64 },

    /// A construction's entry conditions do not hold for the given input.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Forced elements (or a forced escape) already exceed the clique bound.
    #[error("forced constraints are infeasible: {0}")]
    InfeasibleForced(String),
}

pub type Result<T> = std::result::Result<T, Error>;
