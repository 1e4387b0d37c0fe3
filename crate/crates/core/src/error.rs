use thiserror::Error;

/// Errors produced by the numerical library.
///
/// The first three variants are input problems (bad shapes, bad values,
/// violated hypotheses); the rest signal that a mathematical property
/// required by an algorithm does not hold for the given data, or that a
/// numerical routine broke down.
#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("map is not completely positive (min Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCompletelyPositive { min_eigenvalue: f64 },

    #[error("not a CP-semigroup generator (projected Choi eigenvalue {min_eigenvalue:.3e})")]
    NotCpGenerator { min_eigenvalue: f64 },

    #[error("inconsistent generator: residual {residual:.3e} exceeds {threshold:.3e}")]
    InconsistentGenerator { residual: f64, threshold: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
