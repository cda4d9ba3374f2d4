//! Constructive isometric decompositions.
//!
//! - [`pinch_decompose`]: `H = Σ_s V_s A_{s,s} V_s*` for any PSD block matrix.
//! - [`two_block_hermitian_decompose`]: `H = ½ Σ_{k=1,2} V_k (A+B) V_k*` for
//!   two-by-two partitions with Hermitian off-diagonal block.
//! - [`clifford_decompose`]: `⊕^m H = (1/β) Σ_k V_k (⊕^m Δ) V_k*`, `m = 2^β`,
//!   for dyadic `β` and Hermitian blocks.

mod clifford;
mod pinch;
mod structured;
mod two_block;

use serde::{Deserialize, Serialize};

pub use clifford::{
    clifford_decompose, clifford_generator, clifford_generator_signed, clifford_w, hadamard_reflection, omega,
    omega_antisymmetry_defect, rotate_omega, CliffordDecomposition, CliffordIsometries, SignedPermutation,
    StructuredDecomposition,
};
pub use pinch::pinch_decompose;
pub use structured::{Stage, StructuredOperator};
pub use two_block::{two_block_hermitian_decompose, two_block_unitary};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Isometry};
use crate::tol::{rel, TOL_EIG, TOL_ISO};

/// What each isometry conjugates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Summands {
    /// One matrix shared by every isometry.
    Common(HermitianMatrix),
    /// One matrix per isometry (pinch case).
    PerIsometry(Vec<HermitianMatrix>),
}

/// `target = weight · Σ_k V_k · M_k · V_k*`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightedIsometryDecomposition {
    pub target_dim: usize,
    pub weight: f64,
    pub isometries: Vec<Isometry>,
    pub summands: Summands,
}

impl WeightedIsometryDecomposition {
    pub fn summand(&self, k: usize) -> &HermitianMatrix {
        match &self.summands {
            Summands::Common(m) => m,
            Summands::PerIsometry(ms) => &ms[k],
        }
    }

    /// `weight · Σ_k V_k M_k V_k*`.
    pub fn reconstruct(&self) -> Result<ComplexMatrix> {
        let mut acc = ComplexMatrix::zeros(self.target_dim, self.target_dim);
        for (k, v) in self.isometries.iter().enumerate() {
            let term = v.as_matrix().matmul(self.summand(k).as_matrix())?.matmul_adjoint(v.as_matrix())?;
            acc.axpy(num_complex::Complex64::new(self.weight, 0.0), &term)?;
        }
        Ok(acc)
    }

    /// `‖target − reconstruction‖_F`.
    pub fn residual(&self, target: &ComplexMatrix) -> Result<f64> {
        self.reconstruct()?.dist_frobenius(target)
    }

    /// Largest `‖V_k*V_k − I‖_F`.
    pub fn max_isometry_defect(&self) -> f64 {
        self.isometries.iter().map(Isometry::defect).fold(0.0, f64::max)
    }

    /// Checks the reconstruction and isometry invariants against `target`.
    pub fn verify(&self, target: &ComplexMatrix) -> Result<()> {
        let res = self.residual(target)?;
        let bound = TOL_EIG * rel(target.frobenius_norm());
        if res > bound {
            return Err(Error::Internal(format!(
                "reconstruction residual {res:e} exceeds {bound:e}"
            )));
        }
        for (k, v) in self.isometries.iter().enumerate() {
            let d = v.defect();
            let limit = TOL_ISO * (v.cols() as f64).sqrt().max(1.0);
            if d > limit {
                return Err(Error::Internal(format!("isometry {k} has defect {d:e} > {limit:e}")));
            }
        }
        Ok(())
    }
}
