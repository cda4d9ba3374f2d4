use super::matrix::ComplexMatrix;
use super::svd::singular_values;
use crate::error::{Error, Result};

/// Schatten `p`-norm `(Σ σ_i^p)^{1/p}`; `p = ∞` gives the operator norm.
pub fn schatten_norm(a: &ComplexMatrix, p: f64) -> Result<f64> {
    if p.is_nan() || p < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Schatten exponent must be ≥ 1 or ∞, got {p}"
        )));
    }
    let sigma = singular_values(a)?;
    Ok(schatten_from_singular_values(&sigma, p))
}

/// Schatten norm from an already computed list of singular values.
pub fn schatten_from_singular_values(sigma: &[f64], p: f64) -> f64 {
    if p.is_infinite() {
        return sigma.iter().copied().fold(0.0, f64::max);
    }
    let smax = sigma.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return 0.0;
    }
    // scale to avoid overflow for large p
    let s: f64 = sigma.iter().map(|&x| (x / smax).powf(p)).sum();
    smax * s.powf(1.0 / p)
}

/// Ky Fan `k`-norm: sum of the `k` largest singular values.
pub fn ky_fan_norm(a: &ComplexMatrix, k: usize) -> Result<f64> {
    let limit = a.rows().min(a.cols());
    if k == 0 || k > limit {
        return Err(Error::InvalidParameter(format!(
            "Ky Fan index must lie in 1..={limit}, got {k}"
        )));
    }
    Ok(singular_values(a)?.iter().take(k).sum())
}
