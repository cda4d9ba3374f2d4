//! Cyclic Jacobi eigensolver for complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary and then applies the classical real plane rotation, so the
//! combined 2×2 unitary is
//!
//! ```text
//! G = [ c        s      ]
//!     [ -s·ē    c·ē     ]      e = a_pq / |a_pq|
//! ```
//!
//! and `A ← G* A G`. Sweeps stop once `off(A) ≤ 1e-13·‖A‖_F`.

use num_complex::Complex64;

use super::hermitian::{HermitianMatrix, Spectrum};
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::tol::{JACOBI_MAX_SWEEPS, JACOBI_REL};

/// Eigenvalues (descending) and unitary eigenvector matrix `U`, with
/// `A = U diag(λ) U*`.
pub fn hermitian_eig(a: &HermitianMatrix) -> Result<(Spectrum, ComplexMatrix)> {
    let (values, vectors) = jacobi(a.as_matrix(), true)?;
    let vectors = vectors.expect("vectors requested");
    let n = values.len();

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));

    let sorted: Vec<f64> = order.iter().map(|&i| values[i]).collect();
    let u = ComplexMatrix::from_fn(n, n, |r, c| vectors[r * n + order[c]]);
    Ok((Spectrum::new(sorted), u))
}

/// Eigenvalues only (no eigenvector accumulation).
pub fn hermitian_eigenvalues(a: &HermitianMatrix) -> Result<Spectrum> {
    let (values, _) = jacobi(a.as_matrix(), false)?;
    Ok(Spectrum::new(values))
}

/// Real-valued 2×2 Jacobi parameters `(t, c, s)` for the symmetric matrix
/// `[[a, r], [r, b]]` with `r > 0`.
#[inline]
pub(crate) fn rotation(a: f64, b: f64, r: f64) -> (f64, f64, f64) {
    let theta = (b - a) / (2.0 * r);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (t, c, t * c)
}

fn off_norm(a: &[Complex64], n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i * n + j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

fn jacobi(m: &ComplexMatrix, want_vectors: bool) -> Result<(Vec<f64>, Option<Vec<Complex64>>)> {
    let n = m.rows();
    let mut a = m.data().to_vec();
    let mut v = want_vectors.then(|| ComplexMatrix::identity(n).into_data());

    let norm = m.frobenius_norm();
    let threshold = JACOBI_REL * norm;

    let mut sweeps = 0;
    loop {
        let off = off_norm(&a, n);
        if off <= threshold || norm == 0.0 {
            break;
        }
        if sweeps == JACOBI_MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                residual: off,
            });
        }
        sweeps += 1;

        for p in 0..n {
            for q in (p + 1)..n {
                let z = a[p * n + q];
                let r = z.norm();
                if r == 0.0 {
                    continue;
                }
                let app = a[p * n + p].re;
                let aqq = a[q * n + q].re;
                // skip pivots that are negligible against both diagonal entries
                if r < f64::EPSILON * 1e-3 * (app.abs().min(aqq.abs())) {
                    a[p * n + q] = Complex64::new(0.0, 0.0);
                    a[q * n + p] = Complex64::new(0.0, 0.0);
                    continue;
                }
                let e = z / r;
                let (t, c, s) = rotation(app, aqq, r);
                let ec = e.conj();

                // A ← A G (columns p, q)
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * ec * s;
                    a[k * n + q] = akp * s + akq * ec * c;
                }
                // A ← G* A (rows p, q)
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * e * s;
                    a[q * n + k] = apk * s + aqk * e * c;
                }
                a[p * n + p] = Complex64::new(app - t * r, 0.0);
                a[q * n + q] = Complex64::new(aqq + t * r, 0.0);
                a[p * n + q] = Complex64::new(0.0, 0.0);
                a[q * n + p] = Complex64::new(0.0, 0.0);

                if let Some(v) = v.as_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = vkp * c - vkq * ec * s;
                        v[k * n + q] = vkp * s + vkq * ec * c;
                    }
                }
            }
        }
    }

    let values = (0..n).map(|i| a[i * n + i].re).collect();
    Ok((values, v))
}
