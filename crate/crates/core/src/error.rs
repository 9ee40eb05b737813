use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("invalid labeling: {0}")]
    InvalidLabeling(String),

    #[error("size mismatch: expected {expected}, found {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("parameter out of range: {0}")]
    Parameter(String),

    /// Exhaustive search would need `required` evaluations; `budget` allows fewer.
    #[error("enumeration budget exceeded: need {required} labelings, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u128 },

    #[error("degenerate objective: {0}")]
    DegenerateObjective(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("LP solver failure: {0}")]
    Lp(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
