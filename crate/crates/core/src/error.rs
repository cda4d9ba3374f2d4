use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not positive semidefinite (smallest eigenvalue {lambda_min:e})")]
    NotPsd { lambda_min: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal norm {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("projection did not converge within {iterations} iterations (subspace residual {subspace_residual:e}, cone residual {cone_residual:e})")]
    ProjectionNoConvergence {
        iterations: usize,
        subspace_residual: f64,
        cone_residual: f64,
    },

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}
