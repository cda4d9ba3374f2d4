use num_complex::Complex64;

use super::pinch::pinch_decompose;
use super::{Summands, WeightedIsometryDecomposition};
use crate::block::{partition, BlockMatrix};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Isometry};

/// `(1/√2) [[I, iI], [iI, I]]`.
pub fn two_block_unitary(n: usize) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let one = Complex64::new(h, 0.0);
    let im = Complex64::new(0.0, h);
    let mut u = ComplexMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        u[(i, i)] = one;
        u[(i, n + i)] = im;
        u[(n + i, i)] = im;
        u[(n + i, n + i)] = one;
    }
    u
}

/// `H = ½ {V_1 (A+B) V_1* + V_2 (A+B) V_2*}` with complex isometries of shape
/// `2n × n`, for `H = [[A, X], [X, B]]` with `X` Hermitian.
///
/// Conjugating by `U = (1/√2)[[I, iI], [iI, I]]` gives
/// `U H U* = ½ [[A+B, Y], [Y*, A+B]]` with `Y = 2X + i(B−A)`. Pinching that
/// matrix and undoing `U` yields the isometries `V_k = U* W_k`.
pub fn two_block_hermitian_decompose(h: &BlockMatrix) -> Result<WeightedIsometryDecomposition> {
    if h.beta() != 2 {
        return Err(Error::InvalidParameter(format!(
            "two-block decomposition needs beta = 2, got {}",
            h.beta()
        )));
    }
    if !h.hermitian_blocks() {
        return Err(Error::HypothesisViolated(format!(
            "off-diagonal block is not Hermitian (defect {:e})",
            h.hermitian_block_defect()
        )));
    }
    let n = h.n();
    let u = two_block_unitary(n);
    let rotated = h.matrix().congruence(&u)?;
    let pinched = pinch_decompose(&partition(&rotated, 2, n)?)?;

    let isometries = pinched
        .isometries
        .iter()
        .map(|w| Ok(Isometry::new_unchecked(u.adjoint_matmul(w.as_matrix())?)))
        .collect::<Result<Vec<_>>>()?;
    let sum = HermitianMatrix::new(&h.block(0, 0) + &h.block(1, 1))?;
    Ok(WeightedIsometryDecomposition {
        target_dim: 2 * n,
        weight: 0.5,
        isometries,
        summands: Summands::Common(sum),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotated_blocks_have_expected_form() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 0.5], &[0.5, 1.0]]);
        let b = ComplexMatrix::from_real_rows(&[&[1.5, -0.2], &[-0.2, 2.0]]);
        let x = ComplexMatrix::from_real_rows(&[&[0.3, 0.1], &[0.1, -0.4]]);
        let m = crate::block::assemble(&[vec![a.clone(), x.clone()], vec![x.clone(), b.clone()]]).unwrap();
        let h = HermitianMatrix::new(m).unwrap();
        let k = h.congruence(&two_block_unitary(2)).unwrap();
        let half_sum = (&a + &b).scale(0.5);
        assert!(k.as_matrix().submatrix(0, 0, 2, 2).max_abs_diff(&half_sum).unwrap() < 1e-15);
        assert!(k.as_matrix().submatrix(2, 2, 2, 2).max_abs_diff(&half_sum).unwrap() < 1e-15);
        let y = &x.scale(2.0) + &(&b - &a).scale_complex(Complex64::new(0.0, 1.0));
        assert!(k.as_matrix().submatrix(0, 2, 2, 2).max_abs_diff(&y.scale(0.5)).unwrap() < 1e-15);
    }

    #[test]
    fn scalar_all_ones() {
        let m = HermitianMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let d = two_block_hermitian_decompose(&partition(&m, 2, 1).unwrap()).unwrap();
        assert_eq!(d.weight, 0.5);
        assert!(d.residual(m.as_matrix()).unwrap() < 1e-14);
        assert!(d.max_isometry_defect() < 1e-14);
    }

    #[test]
    fn scalar_negative_off_diagonal() {
        let m = HermitianMatrix::from_real_rows(&[&[1.0, -1.0], &[-1.0, 1.0]]).unwrap();
        let d = two_block_hermitian_decompose(&partition(&m, 2, 1).unwrap()).unwrap();
        assert!(d.residual(m.as_matrix()).unwrap() <= 1e-12);
        for v in &d.isometries {
            assert!((v.as_matrix().frobenius_norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn identity_input() {
        let m = HermitianMatrix::identity(4);
        let d = two_block_hermitian_decompose(&partition(&m, 2, 2).unwrap()).unwrap();
        assert!(d.residual(m.as_matrix()).unwrap() <= 1e-10);
    }

    #[test]
    fn rejects_wrong_shape_and_hypothesis() {
        let m = HermitianMatrix::identity(3);
        assert!(matches!(
            two_block_hermitian_decompose(&partition(&m, 3, 1).unwrap()),
            Err(Error::InvalidParameter(_))
        ));
        let x = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0], &[1.0]]);
        let r1 = HermitianMatrix::new(x.matmul_adjoint(&x).unwrap()).unwrap();
        assert!(matches!(
            two_block_hermitian_decompose(&partition(&r1, 2, 2).unwrap()),
            Err(Error::HypothesisViolated(_))
        ));
    }
}
