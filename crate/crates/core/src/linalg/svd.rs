//! One-sided (Hestenes) Jacobi SVD and the polar factorisation built on it.

use num_complex::Complex64;

use super::eig::rotation;
use super::hermitian::{HermitianMatrix, Isometry};
use super::matrix::{inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};
use crate::tol::{JACOBI_MAX_SWEEPS, RANK_REL};

/// Thin SVD of a `p × q` matrix with `p ≥ q`: `C·W = [σ_1 u_1, …, σ_q u_q]`.
#[derive(Clone, Debug)]
pub struct ThinSvd {
    /// Singular values, descending.
    pub sigma: Vec<f64>,
    /// `p × q`; column `i` is `C w_i`, i.e. `σ_i u_i` (unnormalised).
    pub scaled_left: ComplexMatrix,
    /// `q × q` unitary of right singular vectors.
    pub right: ComplexMatrix,
}

/// One-sided Jacobi SVD for `p ≥ q`.
pub fn thin_svd(c: &ComplexMatrix) -> Result<ThinSvd> {
    let (p, q) = c.shape();
    if p < q {
        return Err(Error::DimensionMismatch(format!(
            "thin SVD needs rows ≥ cols, got {p}x{q}"
        )));
    }
    // column-major working copies
    let mut cols: Vec<Vec<Complex64>> = (0..q).map(|j| c.col_vec(j)).collect();
    let mut w: Vec<Vec<Complex64>> = (0..q)
        .map(|j| {
            let mut e = vec![Complex64::new(0.0, 0.0); q];
            e[j] = Complex64::new(1.0, 0.0);
            e
        })
        .collect();

    let eps = 1e-15;
    let mut converged = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..q {
            for j in (i + 1)..q {
                let alpha = cols[i].iter().map(|z| z.norm_sqr()).sum::<f64>();
                let beta = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>();
                let gamma = inner(&cols[i], &cols[j]);
                let r = gamma.norm();
                if r == 0.0 || r <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / r;
                let ec = e.conj();
                let (_, cs, sn) = rotation(alpha, beta, r);
                let (left, right) = cols.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = xi * cs - yj * ec * sn;
                    *y = xi * sn + yj * ec * cs;
                }
                let (left, right) = w.split_at_mut(j);
                for (x, y) in left[i].iter_mut().zip(right[0].iter_mut()) {
                    let (xi, yj) = (*x, *y);
                    *x = xi * cs - yj * ec * sn;
                    *y = xi * sn + yj * ec * cs;
                }
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            sweeps: JACOBI_MAX_SWEEPS,
            residual: f64::NAN,
        });
    }

    let norms: Vec<f64> = cols.iter().map(|c| vec_norm(c)).collect();
    let mut order: Vec<usize> = (0..q).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));

    let sigma = order.iter().map(|&k| norms[k]).collect();
    let scaled_left = ComplexMatrix::from_fn(p, q, |r, k| cols[order[k]][r]);
    // w holds columns of W
    let right = ComplexMatrix::from_fn(q, q, |r, k| w[order[k]][r]);
    Ok(ThinSvd {
        sigma,
        scaled_left,
        right,
    })
}

/// Singular values in descending order for any shape.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    if a.rows() >= a.cols() {
        Ok(thin_svd(a)?.sigma)
    } else {
        Ok(thin_svd(&a.adjoint())?.sigma)
    }
}

/// Polar factorisation `C = V·P` of a `p × q` matrix with `p ≥ q`.
///
/// `P = (C*C)^{1/2}`. Directions where `σ ≤ 1e-12·σ_max` are completed with
/// orthonormal vectors from the orthogonal complement of `range(C)`, so that
/// `V*V = I_q` also for rank-deficient input.
pub fn polar_isometry_factor(c: &ComplexMatrix) -> Result<(Isometry, HermitianMatrix)> {
    let (p, q) = c.shape();
    if p < q {
        return Err(Error::DimensionMismatch(format!(
            "polar isometry factor needs rows ≥ cols, got {p}x{q}"
        )));
    }
    let svd = thin_svd(c)?;
    let smax = svd.sigma.first().copied().unwrap_or(0.0);
    let cutoff = RANK_REL * smax;

    let mut basis: Vec<Vec<Complex64>> = Vec::with_capacity(q);
    let mut missing = Vec::new();
    for (k, &s) in svd.sigma.iter().enumerate() {
        if s > cutoff && s > 0.0 {
            let u: Vec<Complex64> = svd.scaled_left.col_vec(k).iter().map(|z| z / s).collect();
            basis.push(u);
        } else {
            missing.push(k);
        }
    }
    let completion = orthonormal_complement(&basis, p, missing.len());

    // U has columns ordered like sigma; rank-deficient slots filled by completion
    let mut u = ComplexMatrix::zeros(p, q);
    for (k, col) in basis.iter().enumerate() {
        u.set_col(k, col);
    }
    for (slot, vec) in missing.iter().zip(&completion) {
        u.set_col(*slot, vec);
    }

    let v = u.matmul_adjoint(&svd.right)?;
    let sig = ComplexMatrix::diag_real(&svd.sigma);
    let pm = svd.right.matmul(&sig)?.matmul_adjoint(&svd.right)?;
    Ok((Isometry::new_unchecked(v), HermitianMatrix::new(pm)?))
}

/// `count` orthonormal vectors of length `dim` orthogonal to the given
/// orthonormal set, chosen greedily from coordinate vectors by largest residual.
pub(crate) fn orthonormal_complement(
    basis: &[Vec<Complex64>],
    dim: usize,
    count: usize,
) -> Vec<Vec<Complex64>> {
    let mut current: Vec<Vec<Complex64>> = basis.to_vec();
    let mut out = Vec::with_capacity(count);
    let mut used = vec![false; dim];
    for _ in 0..count {
        let mut best: Option<(usize, Vec<Complex64>, f64)> = None;
        for i in 0..dim {
            if used[i] {
                continue;
            }
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[i] = Complex64::new(1.0, 0.0);
            let r = project_out(&e, &current);
            let nr = vec_norm(&r);
            if best.as_ref().is_none_or(|(_, _, bn)| nr > *bn) {
                best = Some((i, r, nr));
            }
        }
        let (i, r, _) = best.expect("complement exists when count ≤ dim − rank");
        used[i] = true;
        // second pass for numerical orthogonality
        let r = project_out(&r, &current);
        let nr = vec_norm(&r);
        let unit: Vec<Complex64> = r.iter().map(|z| z / nr).collect();
        current.push(unit.clone());
        out.push(unit);
    }
    out
}

fn project_out(v: &[Complex64], basis: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut r = v.to_vec();
    for b in basis {
        let coef = inner(b, &r);
        for (x, y) in r.iter_mut().zip(b) {
            *x -= coef * y;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::hermitian::isometry_defect;

    #[test]
    fn svd_of_diagonal() {
        let a = ComplexMatrix::diag_real(&[3.0, -1.0, 2.0]);
        let s = singular_values(&a).unwrap();
        assert!((s[0] - 3.0).abs() < 1e-15 && (s[1] - 2.0).abs() < 1e-15 && (s[2] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polar_of_injection() {
        let c = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 1.0], &[0.0, 0.0]]);
        let (v, p) = polar_isometry_factor(&c).unwrap();
        assert!(v.as_matrix().max_abs_diff(&c).unwrap() < 1e-15);
        assert!(p.as_matrix().max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-15);
    }

    #[test]
    fn polar_of_normalized_column() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let c = ComplexMatrix::from_real_rows(&[&[h], &[h]]);
        let (v, p) = polar_isometry_factor(&c).unwrap();
        assert!(v.as_matrix().max_abs_diff(&c).unwrap() < 1e-15);
        assert!((p.as_matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polar_of_zero_is_completed() {
        let c = ComplexMatrix::zeros(4, 2);
        let (v, p) = polar_isometry_factor(&c).unwrap();
        assert_eq!(p.frobenius_norm(), 0.0);
        assert!(isometry_defect(v.as_matrix()) < 1e-14);
    }

    #[test]
    fn polar_rank_deficient() {
        // rank one 3x2
        let c = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[2.0, 4.0], &[0.0, 0.0]]);
        let (v, p) = polar_isometry_factor(&c).unwrap();
        assert!(isometry_defect(v.as_matrix()) < 1e-13);
        let recon = v.as_matrix().matmul(p.as_matrix()).unwrap();
        assert!(recon.dist_frobenius(&c).unwrap() < 1e-13);
    }
}
