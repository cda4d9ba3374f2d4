use serde::{Deserialize, Serialize};

use super::report::{digest_matrices, CertificateReport, ReportBuilder};
use super::{averaged_rhs, push_prefix_items, push_step_items, validate_tol, CheckOptions};
use crate::block::{dyadic_ceiling, partition, BlockMatrix};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};
use crate::tol::{rel, TOL_EIG};

/// One product term `A ⊗ B`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeparableTerm {
    /// Real symmetric PSD factor on the first space.
    pub a: ComplexMatrix,
    /// Hermitian PSD factor on the second space.
    pub b: ComplexMatrix,
}

/// `Z = Σ_j A_j ⊗ B_j` with real symmetric PSD `A_j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawState")]
pub struct SeparableState {
    terms: Vec<SeparableTerm>,
    /// `true` when `Tr Z = 1`.
    normalized: bool,
}

#[derive(Deserialize)]
struct RawState {
    terms: Vec<SeparableTerm>,
    #[serde(default)]
    normalized: bool,
}

impl TryFrom<RawState> for SeparableState {
    type Error = Error;

    fn try_from(raw: RawState) -> Result<Self> {
        Self::new(raw.terms, raw.normalized)
    }
}

impl SeparableState {
    /// Validates the terms. A factor `A_j` that is not real symmetric is a
    /// hypothesis violation; non-PSD factors are rejected as [`Error::NotPsd`].
    /// With `normalized`, `Tr Z` must equal one within `tol_eig`.
    pub fn new(terms: Vec<SeparableTerm>, normalized: bool) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidParameter("separable state needs at least one term".into()))?;
        let (nh, nf) = (first.a.rows(), first.b.rows());
        for (j, t) in terms.iter().enumerate() {
            if t.a.shape() != (nh, nh) || t.b.shape() != (nf, nf) {
                return Err(Error::DimensionMismatch(format!(
                    "term {j}: factors must be {nh}x{nh} and {nf}x{nf}"
                )));
            }
            let scale = TOL_EIG * rel(t.a.frobenius_norm());
            if !t.a.is_real() || t.a.hermitian_defect() > scale {
                return Err(Error::HypothesisViolated(format!("term {j}: first factor is not real symmetric")));
            }
            if t.b.hermitian_defect() > TOL_EIG * rel(t.b.frobenius_norm()) {
                return Err(Error::InvalidParameter(format!("term {j}: second factor is not Hermitian")));
            }
            HermitianMatrix::new(t.a.clone())?.ensure_psd()?;
            HermitianMatrix::new(t.b.clone())?.ensure_psd()?;
        }
        let state = Self { terms, normalized };
        if normalized {
            let tr = state.trace();
            if (tr - 1.0).abs() > TOL_EIG {
                return Err(Error::InvalidParameter(format!("normalized state has trace {tr}")));
            }
        }
        Ok(state)
    }

    pub fn terms(&self) -> &[SeparableTerm] {
        &self.terms
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    /// Side of the first factor.
    pub fn n_h(&self) -> usize {
        self.terms[0].a.rows()
    }

    /// Side of the second factor.
    pub fn n_f(&self) -> usize {
        self.terms[0].b.rows()
    }

    /// `Tr Z = Σ_j Tr A_j · Tr B_j`.
    pub fn trace(&self) -> f64 {
        self.terms.iter().map(|t| t.a.trace().re * t.b.trace().re).sum()
    }

    /// Divides every second factor by `Tr Z`.
    pub fn normalize(self) -> Result<Self> {
        let tr = self.trace();
        if tr <= 0.0 {
            return Err(Error::InvalidParameter("cannot normalise a state with zero trace".into()));
        }
        let terms = self
            .terms
            .into_iter()
            .map(|t| SeparableTerm { a: t.a, b: t.b.scale(1.0 / tr) })
            .collect();
        Self::new(terms, true)
    }

    /// `Z` as a dense matrix.
    pub fn assemble(&self) -> ComplexMatrix {
        let mut z = ComplexMatrix::zeros(self.n_h() * self.n_f(), self.n_h() * self.n_f());
        for t in &self.terms {
            z = &z + &t.a.kron(&t.b);
        }
        z
    }

    /// `Z` partitioned over the first factor: `β = n_H`, block side `n_F`.
    pub fn to_block_matrix(&self) -> Result<BlockMatrix> {
        partition(&HermitianMatrix::new(self.assemble())?, self.n_h(), self.n_f())
    }

    /// `Tr_H Z = Σ_j Tr(A_j) B_j`.
    pub fn partial_trace(&self) -> Result<HermitianMatrix> {
        let mut acc = ComplexMatrix::zeros(self.n_f(), self.n_f());
        for t in &self.terms {
            acc = &acc + &t.b.scale(t.a.trace().re);
        }
        HermitianMatrix::new(acc)
    }
}

/// `‖Z‖ ≤ ‖Tr_H Z‖` for every symmetric norm, plus eigenvalue steps.
///
/// Items: Ky Fan prefixes `kf:j=…` over the side of `Z`; steps
/// `step:k=…` with `λ_{1+βk}(Z) ≤ λ_{1+k}(Tr_H Z)`, `β` the dyadic ceiling of
/// `n_H`; averaged steps `avg:k=…` with the split `(βk, 0, …, 0)`.
pub fn check_nielsen_kempe(z: &SeparableState, opts: &CheckOptions) -> Result<CertificateReport> {
    validate_tol(opts)?;
    let h = z.to_block_matrix()?;
    if !h.hermitian_blocks() {
        return Err(Error::Internal("real-factor state produced non-Hermitian blocks".into()));
    }
    let delta = z.partial_trace()?.spectrum()?;
    let zs = h.spectrum();
    let beta = dyadic_ceiling(z.n_h());
    let nf = z.n_f();

    let mut b = ReportBuilder::new(
        "nielsen_kempe",
        opts.tol,
        h.operator_norm(),
        digest_matrices(&[h.matrix().as_matrix()]),
    );
    push_prefix_items(&mut b, "kf:", zs, &delta, h.dim());
    push_step_items(&mut b, "step:", zs, &delta, beta, nf);
    for k in 0..nf {
        let mut splits = vec![0; beta];
        splits[0] = beta * k;
        b.push(format!("avg:k={k}"), zs.lambda(1 + beta * k), averaged_rhs(&delta, &splits));
    }
    Ok(b.finish())
}
