//! Numerical certificates for the eigenvalue and norm inequalities satisfied
//! by PSD matrices with Hermitian blocks.
//!
//! Symmetric-norm comparisons are reported as Ky Fan prefix sums of
//! eigenvalues: `‖X‖ ≤ ‖Y‖` for every unitarily invariant norm exactly when
//! every prefix sum of `λ(X)` is bounded by the matching one of `λ(Y)`.
//! Indices in labels are 1-based for eigenvalues and prefixes, 0-based for
//! the step parameter `k`.

mod majorization;
mod rearrangement;
pub mod report;
mod separable;

pub use majorization::{
    check_block_norm_bound, check_determinant, check_determinant_blocks, check_eigen_averaged, check_eigen_step,
    check_hiroshima, check_trace_concave,
};
pub use rearrangement::{check_rearrangement, CommutingFamily, RearrangementMode};
pub use report::{digest_matrices, CertificateItem, CertificateReport, Hypothesis, ReportContext};
pub use separable::{check_nielsen_kempe, SeparableState, SeparableTerm};

use crate::error::{Error, Result};
use crate::linalg::Spectrum;
use crate::tol::TOL_CERT;
use report::ReportBuilder;

/// Tolerance and hypothesis policy shared by all checkers.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CheckOptions {
    /// Margin tolerance for inputs normalised to operator norm one.
    pub tol: f64,
    /// Run even when the precondition fails; the report is then labelled.
    pub force: bool,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol: TOL_CERT,
            force: false,
        }
    }
}

impl CheckOptions {
    pub fn forced() -> Self {
        Self {
            force: true,
            ..Self::default()
        }
    }

    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }
}

/// Maps a precondition outcome to a hypothesis label, refusing unless forced.
fn gate(holds: bool, opts: &CheckOptions, describe: impl FnOnce() -> String) -> Result<Hypothesis> {
    match (holds, opts.force) {
        (true, _) => Ok(Hypothesis::Satisfied),
        (false, true) => Ok(Hypothesis::ViolatedForced),
        (false, false) => Err(Error::HypothesisViolated(describe())),
    }
}

fn validate_tol(opts: &CheckOptions) -> Result<()> {
    if !(opts.tol.is_finite() && opts.tol >= 0.0) {
        return Err(Error::InvalidParameter(format!("tolerance must be finite and ≥ 0, got {}", opts.tol)));
    }
    Ok(())
}

/// Items `Σ_{i≤j} λ_i(lhs) ≤ Σ_{i≤j} λ_i(rhs)` for `j = 1..=len`.
fn push_prefix_items(b: &mut ReportBuilder, prefix: &str, lhs: &Spectrum, rhs: &Spectrum, len: usize) {
    let l = lhs.prefix_sums(len);
    let r = rhs.prefix_sums(len);
    for (j, (a, c)) in l.into_iter().zip(r).enumerate() {
        b.push(format!("{prefix}j={}", j + 1), a, c);
    }
}

/// Items `λ_{1+βk}(lhs) ≤ λ_{1+k}(rhs)` for `k = 0..steps`.
fn push_step_items(b: &mut ReportBuilder, prefix: &str, lhs: &Spectrum, rhs: &Spectrum, beta: usize, steps: usize) {
    for k in 0..steps {
        b.push(format!("{prefix}k={k}"), lhs.lambda(1 + beta * k), rhs.lambda(1 + k));
    }
}

/// `(1/β) Σ_i λ_{1+k_i}(rhs)`.
fn averaged_rhs(rhs: &Spectrum, splits: &[usize]) -> f64 {
    splits.iter().map(|&k| rhs.lambda(1 + k)).sum::<f64>() / splits.len() as f64
}
