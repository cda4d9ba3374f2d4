//! Numerical tolerances shared across the crate.

/// Relative tolerance for eigen-reconstructions, scaled by `1 + ‖A‖_F`.
pub const TOL_EIG: f64 = 1e-9;

/// Tolerance on isometry defects `‖V*V − I‖_F`.
pub const TOL_ISO: f64 = 1e-10;

/// Absolute tolerance on inequality margins, for inputs normalised to
/// operator norm at most one.
pub const TOL_CERT: f64 = 1e-8;

/// Singular values at or below this fraction of the largest are treated as zero.
pub const RANK_REL: f64 = 1e-12;

/// Jacobi stops once `off(A) ≤ JACOBI_REL · ‖A‖_F`.
pub const JACOBI_REL: f64 = 1e-13;

/// Sweep cap for the Jacobi solvers.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Default side-length cap for materialised dense matrices.
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "HERMBLOCK_MAX_DIM";

/// Current dense side-length cap, honouring `HERMBLOCK_MAX_DIM`.
pub fn dense_dim_cap() -> usize {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

/// `1 + x`, the usual relative-scaling factor.
#[inline]
pub fn rel(x: f64) -> f64 {
    1.0 + x
}
