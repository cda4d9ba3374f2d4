//! Decomposition of `⊕^m H`, `m = 2^β`, into `β` isometric congruences of
//! `⊕^m Δ` for dyadic `β`.
//!
//! Pipeline, with `G = [I_m ⊗ A_{s,t}]` in block-major order `(s, c, i)`:
//!
//! 1. `Ω = W G W*` with `W = ⊕_j (Q_j ⊗ I_n)`; block `(s, t)` of `Ω` is
//!    `Q_s Q_t ⊗ A_{s,t}`, so anticommutation of the generators and Hermitian
//!    blocks give `Ω_{s,t} = −Ω_{t,s}` for `s ≠ t`.
//! 2. `M = R_p Ω R_p*` with `R_p = J_p ⊗ I_m ⊗ I_n`. Every diagonal block of
//!    `M` equals `D = (1/β) ⊕^m Δ`.
//! 3. Pinch `M = Σ_k U_k D U_k*` and pull back: `V_k = P W R_p* U_k`, where
//!    `P` is the copy shuffle with `P G Pᵀ = ⊕^m H`.
//!
//! The structured path never forms `M`. Since `M = X (⊕^m H) X*` with
//! `X = R_p W Pᵀ`, one has `M^{1/2} = X (⊕^m H^{1/2}) X*` and hence
//! `V_k = (⊕^m H^{1/2}) · P · W · (J_p e_k ⊗ I_{mn}) · D^{+1/2}`, completed on
//! `ker D` by vectors of `ker(⊕^m H)`.

use num_complex::Complex64;

use super::pinch::pinch_decompose;
use super::structured::{Stage, StructuredOperator};
use super::{Summands, WeightedIsometryDecomposition};
use crate::block::{copy_blocks, direct_sum_copies, is_dyadic, partial_trace, partition, shuffle_permutation, BlockMatrix};
use crate::error::{Error, Result};
use crate::linalg::{psd_sqrt, ComplexMatrix, HermitianMatrix, Isometry};
use crate::tol::{dense_dim_cap, rel, RANK_REL, TOL_EIG};

/// Largest block count accepted on the materialised path.
pub const MAX_MATERIALIZED_BETA: usize = 4;
/// Largest block count accepted at all.
pub const MAX_STRUCTURED_BETA: usize = 8;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn pauli_z() -> ComplexMatrix {
    ComplexMatrix::diag_real(&[1.0, -1.0])
}

fn pauli_x() -> ComplexMatrix {
    ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]])
}

/// Generator factors `[Z, …, Z, X, I, …, I]` with `X` in slot `j` (1-based).
fn generator_factors(j: usize, beta: usize) -> Vec<ComplexMatrix> {
    (1..=beta)
        .map(|k| match k.cmp(&j) {
            std::cmp::Ordering::Less => pauli_z(),
            std::cmp::Ordering::Equal => pauli_x(),
            std::cmp::Ordering::Greater => ComplexMatrix::identity(2),
        })
        .collect()
}

fn check_generator_index(j: usize, beta: usize) -> Result<()> {
    if beta == 0 || j == 0 || j > beta {
        return Err(Error::InvalidParameter(format!(
            "generator index must satisfy 1 ≤ j ≤ beta, got j={j}, beta={beta}"
        )));
    }
    Ok(())
}

/// `Q_j = [⊗^{j−1} diag(1,−1)] ⊗ [[0,1],[1,0]] ⊗ [⊗^{β−j} I_2]` as a dense
/// `2^β × 2^β` matrix, `1 ≤ j ≤ β`.
pub fn clifford_generator(j: usize, beta: usize) -> Result<ComplexMatrix> {
    check_generator_index(j, beta)?;
    let side = 1usize.checked_shl(beta as u32).unwrap_or(usize::MAX);
    if side > dense_dim_cap() {
        return Err(Error::ResourceCap(format!("generator of side 2^{beta} exceeds the dense cap")));
    }
    Ok(generator_factors(j, beta)
        .iter()
        .fold(ComplexMatrix::identity(1), |acc, f| acc.kron(f)))
}

/// Matrix with exactly one `±1` per column: `Q e_x = sign[x] · e_{target[x]}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedPermutation {
    target: Vec<usize>,
    sign: Vec<i8>,
}

impl SignedPermutation {
    pub fn size(&self) -> usize {
        self.target.len()
    }

    pub fn target(&self) -> &[usize] {
        &self.target
    }

    pub fn sign(&self) -> &[i8] {
        &self.sign
    }

    /// `self · rhs`.
    pub fn compose(&self, rhs: &Self) -> Self {
        let (target, sign) = rhs
            .target
            .iter()
            .zip(&rhs.sign)
            .map(|(&t, &s)| (self.target[t], self.sign[t] * s))
            .unzip();
        Self { target, sign }
    }

    /// Entrywise sum with `rhs` as an integer matrix, row-major.
    pub fn add_integer(&self, rhs: &Self) -> Vec<i64> {
        let mut m = self.to_integer_matrix();
        let n = self.size();
        for (x, (&t, &s)) in rhs.target.iter().zip(&rhs.sign).enumerate() {
            m[t * n + x] += i64::from(s);
        }
        m
    }

    pub fn is_identity(&self) -> bool {
        self.target.iter().enumerate().all(|(x, &t)| t == x) && self.sign.iter().all(|&s| s == 1)
    }

    /// Dense integer matrix, row-major.
    pub fn to_integer_matrix(&self) -> Vec<i64> {
        let n = self.size();
        let mut m = vec![0i64; n * n];
        for (x, (&t, &s)) in self.target.iter().zip(&self.sign).enumerate() {
            m[t * n + x] = i64::from(s);
        }
        m
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        let n = self.size();
        let mut m = ComplexMatrix::zeros(n, n);
        for (x, (&t, &s)) in self.target.iter().zip(&self.sign).enumerate() {
            m[(t, x)] = c(f64::from(s));
        }
        m
    }
}

/// `Q_j` as a signed permutation (exact integer representation).
///
/// Basis index bits are read most significant first, matching the Kronecker
/// ordering: `Q_j e_x = (−1)^{x_1+…+x_{j−1}} e_{x ⊕ bit_j}`.
pub fn clifford_generator_signed(j: usize, beta: usize) -> Result<SignedPermutation> {
    check_generator_index(j, beta)?;
    if beta >= usize::BITS as usize - 1 {
        return Err(Error::ResourceCap(format!("beta = {beta} is too large")));
    }
    let side = 1usize << beta;
    let flip = 1usize << (beta - j);
    let high_mask = !((flip << 1) - 1) & (side - 1);
    let (target, sign) = (0..side)
        .map(|x| {
            let parity = (x & high_mask).count_ones() % 2;
            (x ^ flip, if parity == 0 { 1 } else { -1 })
        })
        .unzip();
    Ok(SignedPermutation { target, sign })
}

/// `W = ⊕_{j=1}^{β} (Q_j ⊗ I_n)` as a block-diagonal stack of Kronecker stages.
pub fn clifford_w(beta: usize, n: usize) -> Result<StructuredOperator> {
    if beta == 0 || n == 0 {
        return Err(Error::InvalidParameter("beta and n must be positive".into()));
    }
    if beta > MAX_STRUCTURED_BETA {
        return Err(Error::ResourceCap(format!(
            "beta = {beta} exceeds the supported maximum {MAX_STRUCTURED_BETA}"
        )));
    }
    let blocks = (1..=beta)
        .map(|j| {
            let mut factors = generator_factors(j, beta);
            factors.push(ComplexMatrix::identity(n));
            StructuredOperator::single(Stage::Kronecker { factors })
        })
        .collect::<Result<Vec<_>>>()?;
    StructuredOperator::single(Stage::BlockDiagonal { blocks })
}

/// `J_p = ⊗^p (1/√2)[[1, 1], [1, −1]]`; `J_0 = [1]`.
pub fn hadamard_reflection(p: usize) -> ComplexMatrix {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let j1 = ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]);
    (0..p).fold(ComplexMatrix::identity(1), |acc, _| acc.kron(&j1))
}

fn log2_dyadic(beta: usize) -> usize {
    beta.trailing_zeros() as usize
}

fn check_clifford_input(h: &BlockMatrix) -> Result<()> {
    if !h.hermitian_blocks() {
        return Err(Error::HypothesisViolated(format!(
            "blocks are not Hermitian (defect {:e})",
            h.hermitian_block_defect()
        )));
    }
    if !is_dyadic(h.beta()) {
        return Err(Error::InvalidParameter(format!(
            "block count {} is not a power of two; pad the input first",
            h.beta()
        )));
    }
    if h.beta() > MAX_STRUCTURED_BETA {
        return Err(Error::ResourceCap(format!(
            "beta = {} needs 2^{} direct-sum copies; the maximum supported is {MAX_STRUCTURED_BETA}",
            h.beta(),
            h.beta()
        )));
    }
    Ok(())
}

fn check_materialized(h: &BlockMatrix) -> Result<usize> {
    if h.beta() > MAX_MATERIALIZED_BETA {
        return Err(Error::ResourceCap(format!(
            "beta = {} requires the structured path",
            h.beta()
        )));
    }
    let m = 1usize << h.beta();
    let side = m * h.dim();
    let cap = dense_dim_cap();
    if side > cap {
        return Err(Error::ResourceCap(format!(
            "materialised side {side} exceeds the dense cap {cap}"
        )));
    }
    Ok(m)
}

/// `Ω = W G W*` for dyadic `β` and Hermitian blocks, materialised.
pub fn omega(h: &BlockMatrix) -> Result<HermitianMatrix> {
    check_clifford_input(h)?;
    let m = check_materialized(h)?;
    let g = copy_blocks(h, m)?;
    let w = clifford_w(h.beta(), h.n())?.materialize()?;
    HermitianMatrix::new(w.matmul(&g)?.matmul_adjoint(&w)?)
}

/// `max_{s<t} ‖Ω_{s,t} + Ω_{t,s}‖_F` for a `beta × beta` partition.
pub fn omega_antisymmetry_defect(omega: &HermitianMatrix, beta: usize) -> f64 {
    let b = omega.dim() / beta;
    let o = omega.as_matrix();
    let mut worst: f64 = 0.0;
    for s in 0..beta {
        for t in (s + 1)..beta {
            let sum = &o.submatrix(s * b, t * b, b, b) + &o.submatrix(t * b, s * b, b, b);
            worst = worst.max(sum.frobenius_norm());
        }
    }
    worst
}

/// `R_p Ω R_p*` with `R_p = J_p ⊗ I`, for a `beta × beta` partition, `β = 2^p`.
pub fn rotate_omega(omega: &HermitianMatrix, beta: usize) -> Result<HermitianMatrix> {
    if !is_dyadic(beta) || !omega.dim().is_multiple_of(beta) {
        return Err(Error::InvalidParameter(format!(
            "cannot rotate a matrix of side {} with beta = {beta}",
            omega.dim()
        )));
    }
    let r = hadamard_reflection(log2_dyadic(beta)).kron(&ComplexMatrix::identity(omega.dim() / beta));
    omega.congruence(&r)
}

/// Isometries of a Clifford decomposition, dense or lazily applied.
#[derive(Clone, Debug)]
pub enum CliffordIsometries {
    Dense(WeightedIsometryDecomposition),
    Structured(StructuredDecomposition),
}

/// `⊕^m H = weight · Σ_k V_k (⊕^m Δ) V_k*` with operator-valued `V_k`.
#[derive(Clone, Debug)]
pub struct StructuredDecomposition {
    pub weight: f64,
    pub m: usize,
    /// `Δ`; the summand is `⊕^m Δ`.
    pub partial_trace: HermitianMatrix,
    pub isometries: Vec<StructuredOperator>,
}

impl StructuredDecomposition {
    /// `v* (weight Σ_k V_k (⊕^m Δ) V_k*) v`.
    pub fn quadratic_form(&self, v: &[Complex64]) -> Result<f64> {
        let mut total = 0.0;
        for vk in &self.isometries {
            let y = vk.apply_adjoint(v)?;
            total += direct_sum_quadratic_form(&self.partial_trace, &y)?;
        }
        Ok(self.weight * total)
    }

    /// `weight Σ_k V_k (⊕^m Δ) V_k* v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut acc = vec![Complex64::new(0.0, 0.0); v.len()];
        for vk in &self.isometries {
            let y = vk.apply_adjoint(v)?;
            let z = direct_sum_apply(&self.partial_trace, &y)?;
            let w = vk.apply(&z)?;
            acc.iter_mut().zip(&w).for_each(|(a, b)| *a += self.weight * b);
        }
        Ok(acc)
    }

    /// Dense form; subject to the dense cap.
    pub fn materialize(&self) -> Result<WeightedIsometryDecomposition> {
        let isometries = self
            .isometries
            .iter()
            .map(|v| Ok(Isometry::new_unchecked(v.materialize()?)))
            .collect::<Result<Vec<_>>>()?;
        let target_dim = isometries.first().map_or(0, |v| v.rows());
        Ok(WeightedIsometryDecomposition {
            target_dim,
            weight: self.weight,
            isometries,
            summands: Summands::Common(direct_sum_copies(&self.partial_trace, self.m)?),
        })
    }
}

/// `v* (⊕^m A) v` without forming the direct sum.
pub(crate) fn direct_sum_quadratic_form(a: &HermitianMatrix, v: &[Complex64]) -> Result<f64> {
    let d = a.dim();
    if d == 0 || !v.len().is_multiple_of(d) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} is not a multiple of {d}",
            v.len()
        )));
    }
    let mut total = 0.0;
    for chunk in v.chunks(d) {
        let av = a.as_matrix().matvec(chunk)?;
        total += crate::linalg::inner(chunk, &av).re;
    }
    Ok(total)
}

pub(crate) fn direct_sum_apply(a: &HermitianMatrix, v: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = a.dim();
    if d == 0 || !v.len().is_multiple_of(d) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} is not a multiple of {d}",
            v.len()
        )));
    }
    let mut out = Vec::with_capacity(v.len());
    for chunk in v.chunks(d) {
        out.extend(a.as_matrix().matvec(chunk)?);
    }
    Ok(out)
}

/// Output of [`clifford_decompose`] with the intermediate checks.
#[derive(Clone, Debug)]
pub struct CliffordDecomposition {
    pub beta: usize,
    pub n: usize,
    /// Number of direct-sum copies, `2^β`.
    pub m: usize,
    pub partial_trace: HermitianMatrix,
    /// `Ω`, on the materialised path.
    pub omega: Option<HermitianMatrix>,
    /// `R_p Ω R_p*`, on the materialised path.
    pub rotated: Option<HermitianMatrix>,
    /// `max_{s<t} ‖Ω_{s,t} + Ω_{t,s}‖_F`, on the materialised path.
    pub omega_antisymmetry: Option<f64>,
    /// `max_k ‖(R_p Ω R_p*)_{k,k} − D‖_F`.
    pub diagonal_block_deviation: f64,
    pub isometries: CliffordIsometries,
}

impl CliffordDecomposition {
    pub fn weight(&self) -> f64 {
        1.0 / self.beta as f64
    }

    /// Side of `⊕^m H`.
    pub fn target_dim(&self) -> usize {
        self.m * self.beta * self.n
    }

    /// `|v*(⊕^m H)v − v*(reconstruction)v|` for a probe vector.
    pub fn quadratic_form_gap(&self, h: &BlockMatrix, v: &[Complex64]) -> Result<f64> {
        let lhs = direct_sum_quadratic_form(h.matrix(), v)?;
        let rhs = match &self.isometries {
            CliffordIsometries::Structured(s) => s.quadratic_form(v)?,
            CliffordIsometries::Dense(d) => {
                let r = d.reconstruct()?;
                crate::linalg::inner(v, &r.matvec(v)?).re
            }
        };
        Ok((lhs - rhs).abs())
    }
}

/// Diagonal blocks of `R_p Ω R_p*` computed from signed-permutation
/// generators, without forming `Ω`: block `k` is
/// `Σ_{s,t} (J_p)_{k,s} (J_p)_{k,t} (Q_s Q_t ⊗ A_{s,t})`.
fn rotated_diagonal_blocks(h: &BlockMatrix, m: usize) -> Result<Vec<ComplexMatrix>> {
    let (beta, n) = (h.beta(), h.n());
    let j = hadamard_reflection(log2_dyadic(beta));
    let gens = (1..=beta)
        .map(|k| clifford_generator_signed(k, beta))
        .collect::<Result<Vec<_>>>()?;
    let blocks: Vec<Vec<ComplexMatrix>> = (0..beta)
        .map(|s| (0..beta).map(|t| h.block(s, t)).collect())
        .collect();
    let mut out = Vec::with_capacity(beta);
    for k in 0..beta {
        let mut acc = ComplexMatrix::zeros(m * n, m * n);
        for s in 0..beta {
            for t in 0..beta {
                let coef = j[(k, s)].re * j[(k, t)].re;
                let q = gens[s].compose(&gens[t]);
                let a = &blocks[s][t];
                for x in 0..m {
                    let y = q.target()[x];
                    let f = coef * f64::from(q.sign()[x]);
                    for r in 0..n {
                        for cc in 0..n {
                            acc[(y * n + r, x * n + cc)] += a[(r, cc)] * f;
                        }
                    }
                }
            }
        }
        out.push(acc);
    }
    Ok(out)
}

/// Constructs `⊕^m H = (1/β) Σ_k V_k (⊕^m Δ) V_k*`, `m = 2^β`, for a block
/// matrix with Hermitian blocks and dyadic `β`.
///
/// With `materialize` the isometries are dense `mβn × mn` matrices and `Ω`,
/// `R_p Ω R_p*` are returned as well (`β ≤ 4`). Otherwise the isometries are
/// [`StructuredOperator`]s (`β ≤ 8`). Non-dyadic input is refused; use
/// [`crate::block::pad_to_dyadic`] first.
pub fn clifford_decompose(h: &BlockMatrix, materialize: bool) -> Result<CliffordDecomposition> {
    check_clifford_input(h)?;
    if materialize {
        clifford_dense(h)
    } else {
        clifford_structured(h)
    }
}

fn diagonal_target(delta: &HermitianMatrix, beta: usize, m: usize) -> Result<ComplexMatrix> {
    Ok(direct_sum_copies(delta, m)?.scale(1.0 / beta as f64).into_matrix())
}

fn check_diagonal_blocks(blocks: &[ComplexMatrix], d: &ComplexMatrix, h: &BlockMatrix) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for b in blocks {
        worst = worst.max(b.dist_frobenius(d)?);
    }
    let bound = TOL_EIG * rel(h.matrix().frobenius_norm());
    if worst > bound {
        return Err(Error::Internal(format!(
            "diagonal blocks of the rotated matrix differ from D by {worst:e} (bound {bound:e})"
        )));
    }
    Ok(worst)
}

fn clifford_dense(h: &BlockMatrix) -> Result<CliffordDecomposition> {
    let m = check_materialized(h)?;
    let (beta, n) = (h.beta(), h.n());
    let delta = partial_trace(h);

    let om = omega(h)?;
    let antisym = omega_antisymmetry_defect(&om, beta);
    let rotated = rotate_omega(&om, beta)?;

    let side = m * n;
    let d = diagonal_target(&delta, beta, m)?;
    let diag_blocks: Vec<ComplexMatrix> = (0..beta)
        .map(|k| rotated.as_matrix().submatrix(k * side, k * side, side, side))
        .collect();
    let deviation = check_diagonal_blocks(&diag_blocks, &d, h)?;

    let pinched = pinch_decompose(&partition(&rotated, beta, side)?)?;

    // V_k = P W R_p* U_k
    let w = clifford_w(beta, n)?.materialize()?;
    let r = hadamard_reflection(log2_dyadic(beta)).kron(&ComplexMatrix::identity(side));
    let wr = w.matmul_adjoint(&r)?;
    let shuffle = shuffle_permutation(m, beta, n)?;
    let isometries = pinched
        .isometries
        .iter()
        .map(|u| {
            let y = wr.matmul(u.as_matrix())?;
            let mut out = ComplexMatrix::zeros(y.rows(), y.cols());
            for (i, &j) in shuffle.image().iter().enumerate() {
                for col in 0..y.cols() {
                    out[(j, col)] = y[(i, col)];
                }
            }
            Ok(Isometry::new_unchecked(out))
        })
        .collect::<Result<Vec<_>>>()?;

    let decomposition = WeightedIsometryDecomposition {
        target_dim: m * beta * n,
        weight: 1.0 / beta as f64,
        isometries,
        summands: Summands::Common(direct_sum_copies(&delta, m)?),
    };
    Ok(CliffordDecomposition {
        beta,
        n,
        m,
        partial_trace: delta,
        omega: Some(om),
        rotated: Some(rotated),
        omega_antisymmetry: Some(antisym),
        diagonal_block_deviation: deviation,
        isometries: CliffordIsometries::Dense(decomposition),
    })
}

fn clifford_structured(h: &BlockMatrix) -> Result<CliffordDecomposition> {
    let (beta, n) = (h.beta(), h.n());
    let m = 1usize << beta;
    let delta = partial_trace(h);

    let diag_blocks = rotated_diagonal_blocks(h, m)?;
    let d = diagonal_target(&delta, beta, m)?;
    let deviation = check_diagonal_blocks(&diag_blocks, &d, h)?;

    // D^{+1/2} = √β ⊕^m Δ^{+1/2}, and the projector onto ker Δ
    let (spec, u) = delta.eig()?;
    let smax = spec.max().max(0.0).sqrt();
    let mut inv_root = vec![0.0; n];
    let mut kernel = vec![0.0; n];
    for (i, &l) in spec.values().iter().enumerate() {
        let s = l.max(0.0).sqrt();
        if s > RANK_REL * smax && s > 0.0 {
            inv_root[i] = (beta as f64).sqrt() / s;
        } else {
            kernel[i] = 1.0;
        }
    }
    let spectral = |vals: &[f64]| -> Result<ComplexMatrix> {
        u.matmul(&ComplexMatrix::diag_real(vals))?.matmul_adjoint(&u)
    };
    let scaled_inv_root = spectral(&inv_root)?;
    let has_kernel = kernel.iter().any(|&k| k > 0.0);

    let root = psd_sqrt(h.matrix())?;
    let shuffle = shuffle_permutation(m, beta, n)?;
    let w_stage = clifford_w(beta, n)?.stages()[0].clone();
    let i2 = ComplexMatrix::identity(2);
    let copies = |inner: ComplexMatrix| -> Stage {
        let mut factors = vec![i2.clone(); beta];
        factors.push(inner);
        Stage::Kronecker { factors }
    };
    let hf = std::f64::consts::FRAC_1_SQRT_2;
    let j1_cols = [
        ComplexMatrix::from_real_rows(&[&[hf], &[hf]]),
        ComplexMatrix::from_real_rows(&[&[hf], &[-hf]]),
    ];
    let p = log2_dyadic(beta);

    let kernel_op = if has_kernel {
        let mut k0 = ComplexMatrix::zeros(beta * n, n);
        k0.set_submatrix(0, 0, &spectral(&kernel)?);
        Some(StructuredOperator::single(copies(k0))?)
    } else {
        None
    };

    let mut isometries = Vec::with_capacity(beta);
    for k in 0..beta {
        // (J_p e_k) ⊗ I_m ⊗ I_n, with J_p e_k = ⊗ over the bits of k of J_1 columns
        let mut factors: Vec<ComplexMatrix> = (0..p).map(|b| j1_cols[(k >> (p - 1 - b)) & 1].clone()).collect();
        factors.extend(std::iter::repeat_n(i2.clone(), beta));
        factors.push(ComplexMatrix::identity(n));
        let range_op = StructuredOperator::new(vec![
            copies(root.as_matrix().clone()),
            Stage::Permutation {
                permutation: shuffle.clone(),
            },
            w_stage.clone(),
            Stage::Kronecker { factors },
            copies(scaled_inv_root.clone()),
        ])?;
        let vk = match &kernel_op {
            Some(kop) => StructuredOperator::single(Stage::Sum {
                terms: vec![range_op, kop.clone()],
            })?,
            None => range_op,
        };
        isometries.push(vk);
    }

    Ok(CliffordDecomposition {
        beta,
        n,
        m,
        partial_trace: delta.clone(),
        omega: None,
        rotated: None,
        omega_antisymmetry: None,
        diagonal_block_deviation: deviation,
        isometries: CliffordIsometries::Structured(StructuredDecomposition {
            weight: 1.0 / beta as f64,
            m,
            partial_trace: delta,
            isometries,
        }),
    })
}
