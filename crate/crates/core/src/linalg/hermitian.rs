use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::eig::{hermitian_eig, hermitian_eigenvalues};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol::{rel, TOL_EIG, TOL_ISO};

/// Square matrix equal to its conjugate transpose.
///
/// Construction replaces the input by `(A + A*) / 2`, so the stored carrier
/// is Hermitian to the last bit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct HermitianMatrix(ComplexMatrix);

impl TryFrom<ComplexMatrix> for HermitianMatrix {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<HermitianMatrix> for ComplexMatrix {
    fn from(h: HermitianMatrix) -> Self {
        h.0
    }
}

impl HermitianMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Hermitian matrix must be square, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self(m.hermitian_part()))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    pub fn zeros(n: usize) -> Self {
        Self(ComplexMatrix::zeros(n, n))
    }

    pub fn diag(values: &[f64]) -> Self {
        Self(ComplexMatrix::diag_real(values))
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_rows(rows))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    #[inline]
    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.scale(s))
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self(self.0.try_add(&rhs.0)?))
    }

    /// Eigenvalues in descending order.
    pub fn spectrum(&self) -> Result<Spectrum> {
        hermitian_eigenvalues(self)
    }

    /// Eigenvalues (descending) and the unitary whose columns are the
    /// matching eigenvectors.
    pub fn eig(&self) -> Result<(Spectrum, ComplexMatrix)> {
        hermitian_eig(self)
    }

    /// Largest absolute eigenvalue.
    pub fn operator_norm(&self) -> Result<f64> {
        let s = self.spectrum()?;
        Ok(s.max().abs().max(s.min().abs()))
    }

    /// Tolerance below which a negative eigenvalue still counts as zero.
    pub fn psd_tolerance(&self) -> f64 {
        TOL_EIG * rel(self.frobenius_norm())
    }

    /// Fails with [`Error::NotPsd`] when `λ_min < −tol_eig·(1 + ‖A‖_F)`.
    pub fn ensure_psd(&self) -> Result<Spectrum> {
        let s = self.spectrum()?;
        if self.dim() > 0 && s.min() < -self.psd_tolerance() {
            return Err(Error::NotPsd { lambda_min: s.min() });
        }
        Ok(s)
    }

    /// `V · self · V*` for any conformable `V`.
    pub fn congruence(&self, v: &ComplexMatrix) -> Result<Self> {
        Self::new(v.matmul(&self.0)?.matmul_adjoint(v)?)
    }
}

impl AsRef<ComplexMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &ComplexMatrix {
        &self.0
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts the values in descending order (stable).
    pub fn new(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.total_cmp(a));
        Self { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `λ_i` with 1-based `i`; zero for `i` past the dimension.
    pub fn lambda(&self, i: usize) -> f64 {
        assert!(i >= 1, "eigenvalue indices are 1-based");
        self.values.get(i - 1).copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    /// Partial sums `Σ_{i ≤ j} λ_i` for `j = 1..=len`, padded with zeros.
    pub fn prefix_sums(&self, len: usize) -> Vec<f64> {
        let mut acc = 0.0;
        (1..=len)
            .map(|j| {
                acc += self.lambda(j);
                acc
            })
            .collect()
    }

    pub fn sum(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Tall matrix with orthonormal columns.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ComplexMatrix", into = "ComplexMatrix")]
pub struct Isometry(ComplexMatrix);

impl TryFrom<ComplexMatrix> for Isometry {
    type Error = Error;

    fn try_from(m: ComplexMatrix) -> Result<Self> {
        Self::new(m)
    }
}

impl From<Isometry> for ComplexMatrix {
    fn from(v: Isometry) -> Self {
        v.0
    }
}

impl Isometry {
    /// Checks `p ≥ q` and `‖V*V − I_q‖_F ≤ tol_iso·√q`.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if m.rows() < m.cols() {
            return Err(Error::DimensionMismatch(format!(
                "isometry must be tall, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = isometry_defect(&m);
        let bound = TOL_ISO * (m.cols() as f64).sqrt().max(1.0);
        if defect > bound {
            return Err(Error::InvalidParameter(format!(
                "not an isometry: ‖V*V − I‖_F = {defect:e} > {bound:e}"
            )));
        }
        Ok(Self(m))
    }

    pub(crate) fn new_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn as_matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `‖V*V − I‖_F`.
    pub fn defect(&self) -> f64 {
        isometry_defect(&self.0)
    }

    /// `true` when some entry has a nonzero imaginary part.
    pub fn has_complex_entries(&self) -> bool {
        self.0.data().iter().any(|z| z.im.abs() > 1e-12)
    }
}

pub(crate) fn isometry_defect(m: &ComplexMatrix) -> f64 {
    let gram = m.adjoint_matmul(m).expect("square gram");
    let mut s = 0.0;
    for i in 0..gram.rows() {
        for j in 0..gram.cols() {
            let target = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
            s += (gram[(i, j)] - target).norm_sqr();
        }
    }
    s.sqrt()
}
