use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("operator is not self-adjoint (max deviation {0:e})")]
    NotSelfAdjoint(f64),

    #[error("argument outside the function domain: {0}")]
    Domain(String),

    #[error("unsupported Hamiltonian: {0}")]
    UnsupportedHamiltonian(String),

    #[error("maximizer reached the search interval boundary at {0}")]
    BoundaryHit(f64),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Monte Carlo estimator failed: {0}")]
    EstimatorFailure(String),

    #[error("invalid pairing values: {0}")]
    InvalidPairing(String),

    #[error("inconsistent diagram labels: {0}")]
    InconsistentLabels(String),

    #[error("test function support violates the positive-time condition: {0}")]
    InvalidSupport(String),
}

pub type Result<T> = std::result::Result<T, Error>;
