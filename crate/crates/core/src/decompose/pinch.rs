use super::{Summands, WeightedIsometryDecomposition};
use crate::block::BlockMatrix;
use crate::error::Result;
use crate::linalg::{polar_isometry_factor, psd_sqrt};

/// `H = Σ_s V_s A_{s,s} V_s*` with isometries `V_s` of shape `βn × n`.
///
/// With `S = H^{1/2}` and `C_s` its `s`-th block column, `C_s*C_s = A_{s,s}`,
/// so the polar factor `C_s = V_s A_{s,s}^{1/2}` gives
/// `H = S S* = Σ_s C_s C_s* = Σ_s V_s A_{s,s} V_s*`.
/// Hermitian blocks are not required.
pub fn pinch_decompose(h: &BlockMatrix) -> Result<WeightedIsometryDecomposition> {
    let (beta, n) = (h.beta(), h.n());
    let root = psd_sqrt(h.matrix())?;
    let mut isometries = Vec::with_capacity(beta);
    let mut summands = Vec::with_capacity(beta);
    for s in 0..beta {
        let column = root.as_matrix().submatrix(0, s * n, beta * n, n);
        let (v, _) = polar_isometry_factor(&column)?;
        isometries.push(v);
        summands.push(h.diagonal_block(s));
    }
    Ok(WeightedIsometryDecomposition {
        target_dim: h.dim(),
        weight: 1.0,
        isometries,
        summands: Summands::PerIsometry(summands),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::partition;
    use crate::linalg::{ComplexMatrix, HermitianMatrix};

    #[test]
    fn block_diagonal_input_gives_injections() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let b = ComplexMatrix::diag_real(&[1.0, 3.0]);
        let m = HermitianMatrix::new(ComplexMatrix::block_diagonal(&[a, b])).unwrap();
        let h = partition(&m, 2, 2).unwrap();
        let d = pinch_decompose(&h).unwrap();
        assert!(d.residual(m.as_matrix()).unwrap() < 1e-14);
        let top = d.isometries[0].as_matrix().submatrix(0, 0, 2, 2);
        assert!(top.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-14);
        let bottom = d.isometries[1].as_matrix().submatrix(2, 0, 2, 2);
        assert!(bottom.max_abs_diff(&ComplexMatrix::identity(2)).unwrap() < 1e-14);
    }

    #[test]
    fn all_ones_scalar_blocks() {
        let m = HermitianMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap();
        let d = pinch_decompose(&partition(&m, 2, 1).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = ComplexMatrix::from_real_rows(&[&[h], &[h]]);
        for v in &d.isometries {
            assert!(v.as_matrix().max_abs_diff(&expected).unwrap() < 1e-15);
        }
        assert!(d.residual(m.as_matrix()).unwrap() < 1e-15);
    }

    #[test]
    fn zero_diagonal_block() {
        let m = HermitianMatrix::diag(&[0.0, 0.0, 1.0, 2.0]);
        let d = pinch_decompose(&partition(&m, 2, 2).unwrap()).unwrap();
        assert!(d.residual(m.as_matrix()).unwrap() < 1e-15);
        assert!(d.max_isometry_defect() < 1e-14);
        d.verify(m.as_matrix()).unwrap();
    }
}
