use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// Number of index sets (or compound size) exceeds the configured limit.
    #[error("guardrail: {count} exceeds the limit of {limit}")]
    Guardrail { count: u128, limit: u128 },

    #[error("matrix is singular")]
    Singular,

    #[error("eigenvalue iteration failed to converge after {0} iterations")]
    NoConvergence(usize),

    #[error("matrix is not diagonalizable within tolerance (eigenvector condition number {0:e})")]
    Defective(f64),

    #[error("branch cut: eigenvalue {0} lies on the closed negative real axis")]
    BranchCut(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Integration produced a non-finite state; `t` is the last time with a finite state.
    #[error("non-finite state after t = {t}")]
    BlowUp { t: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
