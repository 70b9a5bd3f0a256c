use thiserror::Error;

use crate::explain::Reason;
use crate::logic::Term;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} features, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("variable index {var} out of range 1..={max}")]
    VarOutOfRange { var: usize, max: usize },

    #[error("inconsistent term: variable x{0} occurs with both polarities")]
    InconsistentTerm(usize),

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("invalid forest: {0}")]
    InvalidForest(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("the oracle rejects the full instance term; no reason can be extracted")]
    OracleRejectsInstance,

    /// A solver call ran out of time. `partial` holds the best explanation
    /// known at that point, when there is one.
    #[error("time budget exhausted")]
    Timeout { partial: Option<Term> },

    /// An optimisation ran out of time before producing any model. The
    /// trivial reason (the full instance term) is carried along.
    #[error("time budget exhausted before any solution was found")]
    BudgetExhausted { fallback: Box<Reason> },

    #[error("hard clauses are unsatisfiable")]
    HardUnsat,

    #[error("instance has {n} variables, above the enumeration limit of {limit}")]
    VarLimitExceeded { n: usize, limit: usize },

    #[error("{format} parse error at line {line}: {message}")]
    Parse {
        format: &'static str,
        line: usize,
        message: String,
    },

    #[error("explanation failed post-hoc validation: {0}")]
    ValidationFailed(String),

    #[error("external solver: {0}")]
    External(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
