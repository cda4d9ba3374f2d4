//! Block-partitioned positive matrices.
//!
//! Block `(s, t)` (0-based) of a matrix partitioned with block side `n`
//! occupies rows `s·n..(s+1)·n` and columns `t·n..(t+1)·n`. Reports and
//! documentation use 1-based block indices.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix, Spectrum};
use crate::tol::{dense_dim_cap, rel, TOL_EIG};

/// Positive semidefinite matrix of side `beta·n` with its `beta × beta`
/// partition into `n × n` blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    beta: usize,
    n: usize,
    carrier: HermitianMatrix,
    hermitian_blocks: bool,
    spectrum: Spectrum,
}

impl BlockMatrix {
    #[inline]
    pub fn beta(&self) -> usize {
        self.beta
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.beta * self.n
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.carrier
    }

    /// `true` when every block `A_{s,t}` is Hermitian within tolerance.
    pub fn hermitian_blocks(&self) -> bool {
        self.hermitian_blocks
    }

    /// Eigenvalues of the whole matrix, computed once at construction.
    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `‖H‖_∞` (the largest eigenvalue, since `H` is PSD).
    pub fn operator_norm(&self) -> f64 {
        self.spectrum.max().max(0.0)
    }

    /// Block `(s, t)`, 0-based.
    pub fn block(&self, s: usize, t: usize) -> ComplexMatrix {
        assert!(s < self.beta && t < self.beta, "block index out of range");
        self.carrier.as_matrix().submatrix(s * self.n, t * self.n, self.n, self.n)
    }

    /// Diagonal block `A_{s,s}`, 0-based.
    pub fn diagonal_block(&self, s: usize) -> HermitianMatrix {
        HermitianMatrix::new(self.block(s, s)).expect("diagonal blocks are square")
    }

    /// Largest `‖A_{s,t} − A_{s,t}*‖_F` over all blocks.
    pub fn hermitian_block_defect(&self) -> f64 {
        block_defect(self.carrier.as_matrix(), self.beta, self.n)
    }

    /// Hermitian-block tolerance `tol_eig·(1 + ‖H‖_F)`.
    pub fn block_tolerance(&self) -> f64 {
        TOL_EIG * rel(self.carrier.frobenius_norm())
    }
}

fn block_defect(m: &ComplexMatrix, beta: usize, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for s in 0..beta {
        for t in 0..beta {
            let b = m.submatrix(s * n, t * n, n, n);
            worst = worst.max(b.hermitian_defect());
        }
    }
    worst
}

/// Partitions a PSD matrix of side `beta·n` into `n × n` blocks and records
/// whether all blocks are Hermitian.
pub fn partition(m: &HermitianMatrix, beta: usize, n: usize) -> Result<BlockMatrix> {
    if beta == 0 || n == 0 || m.dim() != beta * n {
        return Err(Error::DimensionMismatch(format!(
            "cannot partition a matrix of side {} into {beta}x{beta} blocks of side {n}",
            m.dim()
        )));
    }
    let spectrum = m.ensure_psd()?;
    let tol = TOL_EIG * rel(m.frobenius_norm());
    let hermitian_blocks = block_defect(m.as_matrix(), beta, n) <= tol;
    Ok(BlockMatrix {
        beta,
        n,
        carrier: m.clone(),
        hermitian_blocks,
        spectrum,
    })
}

/// Assembles a block matrix from `blocks[s][t]`.
pub fn assemble(blocks: &[Vec<ComplexMatrix>]) -> Result<ComplexMatrix> {
    let beta = blocks.len();
    let n = blocks.first().and_then(|r| r.first()).map_or(0, |b| b.rows());
    let mut out = ComplexMatrix::zeros(beta * n, beta * n);
    for (s, row) in blocks.iter().enumerate() {
        if row.len() != beta {
            return Err(Error::DimensionMismatch("block rows must have equal length".into()));
        }
        for (t, b) in row.iter().enumerate() {
            if b.shape() != (n, n) {
                return Err(Error::DimensionMismatch(format!(
                    "block ({s}, {t}) is {}x{}, expected {n}x{n}",
                    b.rows(),
                    b.cols()
                )));
            }
            out.set_submatrix(s * n, t * n, b);
        }
    }
    Ok(out)
}

/// Partial trace `Δ = Σ_s A_{s,s}`.
pub fn partial_trace(h: &BlockMatrix) -> HermitianMatrix {
    let mut acc = ComplexMatrix::zeros(h.n, h.n);
    for s in 0..h.beta {
        acc.axpy(num_complex::Complex64::new(1.0, 0.0), &h.block(s, s))
            .expect("blocks share a shape");
    }
    HermitianMatrix::new(acc).expect("square")
}

/// Smallest power of two `≥ alpha`.
pub fn dyadic_ceiling(alpha: usize) -> usize {
    alpha.max(1).next_power_of_two()
}

pub fn is_dyadic(beta: usize) -> bool {
    beta.is_power_of_two()
}

/// Appends zero block rows and columns up to the next power-of-two block count.
pub fn pad_to_dyadic(h: &BlockMatrix) -> BlockMatrix {
    let beta = dyadic_ceiling(h.beta);
    if beta == h.beta {
        return h.clone();
    }
    let side = beta * h.n;
    let mut m = ComplexMatrix::zeros(side, side);
    m.set_submatrix(0, 0, h.carrier.as_matrix());
    let mut values = h.spectrum.values().to_vec();
    values.resize(side, 0.0);
    BlockMatrix {
        beta,
        n: h.n,
        carrier: HermitianMatrix::new(m).expect("square"),
        hermitian_blocks: h.hermitian_blocks,
        spectrum: Spectrum::new(values),
    }
}

fn check_cap(side: usize, what: &str) -> Result<()> {
    let cap = dense_dim_cap();
    if side > cap {
        return Err(Error::ResourceCap(format!(
            "{what} would have side {side}, above the dense cap {cap}"
        )));
    }
    Ok(())
}

/// `⊕^m A`: block diagonal with `m` copies of `A`.
pub fn direct_sum_copies(a: &HermitianMatrix, m: usize) -> Result<HermitianMatrix> {
    if m == 0 {
        return Err(Error::InvalidParameter("direct sum needs at least one copy".into()));
    }
    check_cap(m * a.dim(), "direct sum")?;
    let blocks = vec![a.as_matrix().clone(); m];
    HermitianMatrix::new(ComplexMatrix::block_diagonal(&blocks))
}

/// Returns `(λ_{1+j}(⊕^m A), λ_{⌈(1+j)/m⌉}(A))`, both zero past the dimension.
///
/// The first value is read off the materialised direct sum, the second off
/// the spectrum of `A` alone.
pub fn eigen_index_map(a: &HermitianMatrix, m: usize, j: usize) -> Result<(f64, f64)> {
    if m == 0 {
        return Err(Error::InvalidParameter("m must be positive".into()));
    }
    a.ensure_psd()?;
    let big = direct_sum_copies(a, m)?.spectrum()?;
    let small = a.spectrum()?;
    Ok((big.lambda(1 + j), small.lambda((1 + j).div_ceil(m))))
}

/// Kronecker product, with block `(s, t)` equal to `a[s, t]·B`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_cap(a.rows() * b.rows(), "tensor product")?;
    check_cap(a.cols() * b.cols(), "tensor product")?;
    Ok(a.kron(b))
}

/// Bijection on `{0, …, size−1}`; as a matrix it sends `e_i` to `e_{image[i]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Permutation {
    image: Vec<usize>,
}

impl Permutation {
    pub fn new(image: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; image.len()];
        for &i in &image {
            if i >= image.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidParameter("permutation image is not a bijection".into()));
            }
        }
        Ok(Self { image })
    }

    pub fn identity(size: usize) -> Self {
        Self {
            image: (0..size).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.image.len()
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.image.len()];
        for (i, &j) in self.image.iter().enumerate() {
            inv[j] = i;
        }
        Self { image: inv }
    }

    /// `P·v`.
    pub fn apply<T: Copy + Default>(&self, v: &[T]) -> Vec<T> {
        let mut out = vec![T::default(); v.len()];
        for (i, &j) in self.image.iter().enumerate() {
            out[j] = v[i];
        }
        out
    }

    /// `Pᵀ·v`.
    pub fn apply_transpose<T: Copy>(&self, v: &[T]) -> Vec<T> {
        self.image.iter().map(|&j| v[j]).collect()
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.size();
        let mut m = ComplexMatrix::zeros(n, n);
        for (i, &j) in self.image.iter().enumerate() {
            m[(j, i)] = num_complex::Complex64::new(1.0, 0.0);
        }
        m
    }

    /// `P·M·Pᵀ` by index relabelling (no arithmetic).
    pub fn conjugate(&self, m: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.size();
        if m.shape() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "permutation of size {n} cannot act on {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let mut out = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(self.image[i], self.image[j])] = m[(i, j)];
            }
        }
        Ok(out)
    }
}

/// Relabels block-major indices `(s, c, i)` (block `s < beta`, copy `c < m`,
/// inner `i < n`) to copy-major `(c, s, i)`, so that
/// `P·[I_m ⊗ A_{s,t}]·Pᵀ = ⊕^m H`.
pub fn shuffle_permutation(m: usize, beta: usize, n: usize) -> Result<Permutation> {
    if m == 0 || beta == 0 || n == 0 {
        return Err(Error::InvalidParameter("shuffle sizes must be positive".into()));
    }
    let mut image = Vec::with_capacity(m * beta * n);
    for s in 0..beta {
        for c in 0..m {
            for i in 0..n {
                image.push(c * beta * n + s * n + i);
            }
        }
    }
    Ok(Permutation { image })
}

/// `G = [I_m ⊗ A_{s,t}]`: every block repeated `m` times along its diagonal.
pub fn copy_blocks(h: &BlockMatrix, m: usize) -> Result<ComplexMatrix> {
    check_cap(m * h.dim(), "block-wise direct sum")?;
    let eye = ComplexMatrix::identity(m);
    let blocks: Vec<Vec<ComplexMatrix>> = (0..h.beta)
        .map(|s| (0..h.beta).map(|t| eye.kron(&h.block(s, t))).collect())
        .collect();
    assemble(&blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn rank_one_control() -> HermitianMatrix {
        let x = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0], &[1.0]]);
        HermitianMatrix::new(x.matmul_adjoint(&x).unwrap()).unwrap()
    }

    #[test]
    fn partition_identity() {
        let h = partition(&HermitianMatrix::identity(4), 2, 2).unwrap();
        assert!(h.hermitian_blocks());
        assert_eq!(h.block(0, 0), ComplexMatrix::identity(2));
        assert_eq!(h.block(0, 1), ComplexMatrix::zeros(2, 2));
    }

    #[test]
    fn partition_rank_one_has_non_hermitian_block() {
        let h = partition(&rank_one_control(), 2, 2).unwrap();
        assert!(!h.hermitian_blocks());
        assert_eq!(h.block(0, 1), ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]));
    }

    #[test]
    fn partition_scalar_blocks() {
        let m = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 3.0]]).unwrap();
        let h = partition(&m, 2, 1).unwrap();
        assert!(h.hermitian_blocks());
        assert_eq!(partial_trace(&h).as_matrix()[(0, 0)].re, 5.0);
    }

    #[test]
    fn partition_errors() {
        assert!(matches!(
            partition(&HermitianMatrix::identity(4), 3, 1),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            partition(&HermitianMatrix::diag(&[1.0, -1.0]), 2, 1),
            Err(Error::NotPsd { .. })
        ));
    }

    #[test]
    fn partial_trace_examples() {
        let h = partition(&HermitianMatrix::identity(4), 2, 2).unwrap();
        assert_eq!(partial_trace(&h).as_matrix(), &ComplexMatrix::identity(2).scale(2.0));

        let a = ComplexMatrix::diag_real(&[1.0, 2.0]);
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]);
        let z = HermitianMatrix::new(tensor_product(&a, &b).unwrap()).unwrap();
        let d = partial_trace(&partition(&z, 2, 2).unwrap());
        assert_eq!(d.as_matrix(), &b.scale(3.0));
    }

    #[test]
    fn padding() {
        let h = partition(&HermitianMatrix::diag(&[1.0, 2.0, 3.0]), 3, 1).unwrap();
        let p = pad_to_dyadic(&h);
        assert_eq!(p.beta(), 4);
        assert_eq!(p.dim(), 4);
        assert_eq!(p.spectrum().values(), &[3.0, 2.0, 1.0, 0.0]);
        assert_eq!(partial_trace(&p), partial_trace(&h));
        assert_eq!(p.matrix().spectrum().unwrap().values(), &[3.0, 2.0, 1.0, 0.0]);

        let q = partition(&HermitianMatrix::identity(4), 4, 1).unwrap();
        assert_eq!(pad_to_dyadic(&q), q);
        assert_eq!(dyadic_ceiling(1), 1);
        assert_eq!(dyadic_ceiling(5), 8);
    }

    #[test]
    fn direct_sums() {
        let a = HermitianMatrix::diag(&[3.0, 1.0]);
        assert_eq!(direct_sum_copies(&a, 1).unwrap(), a);
        let s = direct_sum_copies(&a, 2).unwrap().spectrum().unwrap();
        assert_eq!(s.values(), &[3.0, 3.0, 1.0, 1.0]);
        assert_eq!(direct_sum_copies(&HermitianMatrix::zeros(2), 3).unwrap(), HermitianMatrix::zeros(6));
        assert!(direct_sum_copies(&a, 0).is_err());
    }

    #[test]
    fn index_map_examples() {
        let a = HermitianMatrix::diag(&[3.0, 1.0]);
        assert_eq!(eigen_index_map(&a, 2, 2).unwrap(), (1.0, 1.0));
        assert_eq!(eigen_index_map(&a, 3, 0).unwrap(), (3.0, 3.0));
        assert_eq!(eigen_index_map(&HermitianMatrix::diag(&[5.0]), 4, 3).unwrap(), (5.0, 5.0));
        assert_eq!(eigen_index_map(&a, 2, 7).unwrap(), (0.0, 0.0));
    }

    #[test]
    fn shuffle_examples() {
        assert!(shuffle_permutation(1, 3, 2).unwrap().is_identity());
        assert_eq!(shuffle_permutation(2, 2, 1).unwrap().image(), &[0, 2, 1, 3]);
        assert!(Permutation::new(vec![0, 0]).is_err());
        let p = Permutation::new(vec![2, 0, 1]).unwrap();
        let v = [10, 20, 30];
        assert_eq!(p.apply_transpose(&p.apply(&v)), v.to_vec());
        assert_eq!(p.inverse().apply(&p.apply(&v)), v.to_vec());
    }

    #[test]
    fn shuffle_maps_copies_to_direct_sum_exactly() {
        let m = HermitianMatrix::new(ComplexMatrix::new(
            4,
            4,
            vec![
                Complex64::new(2.0, 0.0), Complex64::new(0.3, 0.0), Complex64::new(0.7, 0.1), Complex64::new(0.2, 0.0),
                Complex64::new(0.3, 0.0), Complex64::new(1.5, 0.0), Complex64::new(0.1, 0.0), Complex64::new(0.4, -0.2),
                Complex64::new(0.7, -0.1), Complex64::new(0.1, 0.0), Complex64::new(2.5, 0.0), Complex64::new(0.0, 0.0),
                Complex64::new(0.2, 0.0), Complex64::new(0.4, 0.2), Complex64::new(0.0, 0.0), Complex64::new(1.8, 0.0),
            ],
        ).unwrap()).unwrap();
        for beta in [2usize, 4] {
            let n = 4 / beta;
            let h = partition(&m, beta, n).unwrap();
            for copies in [1usize, 2, 3] {
                let g = copy_blocks(&h, copies).unwrap();
                let p = shuffle_permutation(copies, beta, n).unwrap();
                let lhs = p.conjugate(&g).unwrap();
                let rhs = direct_sum_copies(h.matrix(), copies).unwrap();
                assert_eq!(&lhs, rhs.as_matrix());
                let via_matrix = p.to_matrix().matmul(&g).unwrap().matmul(&p.to_matrix().transpose()).unwrap();
                assert_eq!(via_matrix, lhs);
            }
        }
    }

    #[test]
    fn tensor_product_examples() {
        let b = ComplexMatrix::from_real_rows(&[&[1.0, 2.0], &[3.0, 4.0]]);
        let t = tensor_product(&ComplexMatrix::identity(2), &b).unwrap();
        assert_eq!(t, ComplexMatrix::block_diagonal(&[b.clone(), b]));
        let t = tensor_product(&ComplexMatrix::diag_real(&[1.0, 2.0]), &ComplexMatrix::identity(2)).unwrap();
        assert_eq!(t, ComplexMatrix::diag_real(&[1.0, 1.0, 2.0, 2.0]));
    }
}
