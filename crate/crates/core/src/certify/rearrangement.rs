use serde::{Deserialize, Serialize};

use super::report::{digest_matrices, CertificateReport, ReportBuilder};
use super::{gate, push_prefix_items, push_step_items, validate_tol, CheckOptions};
use crate::block::dyadic_ceiling;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::tol::{rel, TOL_EIG};

/// Hermitian matrices of a common side that are expected to commute.
///
/// Commutation is not enforced at construction; checkers test it and apply
/// the hypothesis policy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommutingFamily {
    members: Vec<HermitianMatrix>,
    /// Unitary whose columns diagonalise every member, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    witness_basis: Option<ComplexMatrix>,
}

impl CommutingFamily {
    pub fn new(members: Vec<HermitianMatrix>, witness_basis: Option<ComplexMatrix>) -> Result<Self> {
        let n = members
            .first()
            .ok_or_else(|| Error::InvalidParameter("commuting family needs at least one member".into()))?
            .dim();
        if members.iter().any(|s| s.dim() != n) {
            return Err(Error::DimensionMismatch("family members must share a side".into()));
        }
        if let Some(u) = &witness_basis {
            if u.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "witness basis must be {n}x{n}, got {}x{}",
                    u.rows(),
                    u.cols()
                )));
            }
        }
        Ok(Self { members, witness_basis })
    }

    pub fn members(&self) -> &[HermitianMatrix] {
        &self.members
    }

    pub fn witness_basis(&self) -> Option<&ComplexMatrix> {
        self.witness_basis.as_ref()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.members[0].dim()
    }

    /// Largest `‖S_iS_j − S_jS_i‖_F / (1 + ‖S_i‖_F‖S_j‖_F)` over pairs.
    pub fn commutator_defect(&self) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for (i, a) in self.members.iter().enumerate() {
            for b in &self.members[i + 1..] {
                let (a, b) = (a.as_matrix(), b.as_matrix());
                let c = a.matmul(b)?.try_sub(&b.matmul(a)?)?;
                worst = worst.max(c.frobenius_norm() / rel(a.frobenius_norm() * b.frobenius_norm()));
            }
        }
        Ok(worst)
    }

    pub fn is_commuting(&self) -> Result<bool> {
        Ok(self.commutator_defect()? <= TOL_EIG)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RearrangementMode {
    /// Ky Fan prefix sums, i.e. all symmetric norms.
    Norms,
    /// `λ_{1+βk}(Σ S_iT²S_i) ≤ λ_{1+k}(Σ TS_i²T)`.
    Eigensteps,
}

/// Compares `L = Σ S_i T² S_i` with `R = Σ T S_i² T` for a commuting family
/// and a PSD `T`.
pub fn check_rearrangement(
    family: &CommutingFamily,
    t: &HermitianMatrix,
    mode: RearrangementMode,
    opts: &CheckOptions,
) -> Result<CertificateReport> {
    validate_tol(opts)?;
    let n = family.dim();
    if t.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "T has side {}, family members have side {n}",
            t.dim()
        )));
    }
    t.ensure_psd()?;
    let defect = family.commutator_defect()?;
    let hyp = gate(defect <= TOL_EIG, opts, || {
        format!("family does not commute (relative commutator {defect:e})")
    })?;

    let tm = t.as_matrix();
    let mut l = ComplexMatrix::zeros(n, n);
    let mut r = ComplexMatrix::zeros(n, n);
    for s in family.members() {
        let sm = s.as_matrix();
        let st = sm.matmul(tm)?;
        l = l.try_add(&st.matmul_adjoint(&st)?)?;
        let ts = tm.matmul(sm)?;
        r = r.try_add(&ts.matmul_adjoint(&ts)?)?;
    }
    let (l, r) = (HermitianMatrix::new(l)?, HermitianMatrix::new(r)?);
    let (ls, rs) = (l.spectrum()?, r.spectrum()?);

    let mut inputs: Vec<&ComplexMatrix> = family.members().iter().map(HermitianMatrix::as_matrix).collect();
    inputs.push(tm);
    let scale = ls.max().abs().max(rs.max().abs());
    let name = match mode {
        RearrangementMode::Norms => "rearrangement_norms",
        RearrangementMode::Eigensteps => "rearrangement_eigensteps",
    };
    let mut b = ReportBuilder::new(name, opts.tol, scale, digest_matrices(&inputs)).hypothesis(hyp);
    match mode {
        RearrangementMode::Norms => push_prefix_items(&mut b, "", &ls, &rs, n),
        RearrangementMode::Eigensteps => push_step_items(&mut b, "", &ls, &rs, dyadic_ceiling(family.len()), n),
    }
    Ok(b.finish())
}
