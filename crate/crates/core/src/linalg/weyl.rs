use super::hermitian::HermitianMatrix;
use crate::certify::report::{digest_matrices, ReportBuilder};
use crate::certify::CertificateReport;
use crate::error::{Error, Result};
use crate::tol::TOL_CERT;

/// Weyl's inequality `λ_{r+s+1}(Y+Z) ≤ λ_{r+1}(Y) + λ_{s+1}(Z)` for 0-based
/// offsets `r`, `s`.
///
/// Indices past the dimension are only meaningful for PSD inputs, where the
/// missing eigenvalues are read as zero.
pub fn weyl_bound(y: &HermitianMatrix, z: &HermitianMatrix, r: usize, s: usize) -> Result<CertificateReport> {
    if y.dim() != z.dim() {
        return Err(Error::DimensionMismatch(format!(
            "Weyl bound needs equal dimensions, got {} and {}",
            y.dim(),
            z.dim()
        )));
    }
    let d = y.dim();
    let sum = y.try_add(z)?;
    let (ly, lz, lsum) = (y.spectrum()?, z.spectrum()?, sum.spectrum()?);
    if r + s + 1 > d {
        let psd = |sp: &crate::linalg::Spectrum, m: &HermitianMatrix| sp.min() >= -m.psd_tolerance();
        if !(psd(&ly, y) && psd(&lz, z)) {
            return Err(Error::InvalidParameter(format!(
                "index {} exceeds dimension {d} and the inputs are not PSD",
                r + s + 1
            )));
        }
    }
    let scale = ly.max().abs().max(ly.min().abs()) + lz.max().abs().max(lz.min().abs());
    let mut b = ReportBuilder::new(
        "weyl",
        TOL_CERT,
        scale,
        digest_matrices(&[y.as_matrix(), z.as_matrix()]),
    );
    b.push(
        format!("r={r},s={s}"),
        lsum.lambda(r + s + 1),
        ly.lambda(r + 1) + lz.lambda(s + 1),
    );
    Ok(b.finish())
}
