//! Lazily applied linear operators built from permutations, Kronecker
//! products, block-diagonal stacks and dense factors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::block::Permutation;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::tol::dense_dim_cap;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One factor of a [`StructuredOperator`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Stage {
    Permutation { permutation: Permutation },
    /// `A_1 ⊗ A_2 ⊗ … ⊗ A_r`; identity factors are skipped when applied.
    Kronecker { factors: Vec<ComplexMatrix> },
    BlockDiagonal { blocks: Vec<StructuredOperator> },
    Dense { matrix: ComplexMatrix },
    /// Sum of operators of equal shape.
    Sum { terms: Vec<StructuredOperator> },
}

impl Stage {
    pub fn shape(&self) -> (usize, usize) {
        match self {
            Stage::Permutation { permutation } => (permutation.size(), permutation.size()),
            Stage::Kronecker { factors } => factors
                .iter()
                .fold((1, 1), |(r, c), f| (r * f.rows(), c * f.cols())),
            Stage::BlockDiagonal { blocks } => blocks
                .iter()
                .fold((0, 0), |(r, c), b| (r + b.rows(), c + b.cols())),
            Stage::Dense { matrix } => matrix.shape(),
            Stage::Sum { terms } => terms.first().map_or((0, 0), |t| (t.rows(), t.cols())),
        }
    }

    fn apply(&self, v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
        match self {
            Stage::Permutation { permutation } => {
                if adjoint {
                    permutation.apply_transpose(v)
                } else {
                    permutation.apply(v)
                }
            }
            Stage::Kronecker { factors } => kron_apply(factors, v, adjoint),
            Stage::BlockDiagonal { blocks } => {
                let mut out = Vec::new();
                let mut offset = 0;
                for b in blocks {
                    let width = if adjoint { b.rows() } else { b.cols() };
                    let piece = &v[offset..offset + width];
                    out.extend(if adjoint { b.apply_adjoint_unchecked(piece) } else { b.apply_unchecked(piece) });
                    offset += width;
                }
                out
            }
            Stage::Dense { matrix } => {
                if adjoint {
                    matrix.adjoint_matvec(v).expect("shape checked")
                } else {
                    matrix.matvec(v).expect("shape checked")
                }
            }
            Stage::Sum { terms } => {
                let mut acc: Option<Vec<Complex64>> = None;
                for t in terms {
                    let y = if adjoint { t.apply_adjoint_unchecked(v) } else { t.apply_unchecked(v) };
                    match acc.as_mut() {
                        None => acc = Some(y),
                        Some(a) => a.iter_mut().zip(&y).for_each(|(x, y)| *x += y),
                    }
                }
                acc.unwrap_or_default()
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            Stage::BlockDiagonal { blocks } => blocks.iter().try_for_each(|b| b.validate()),
            Stage::Sum { terms } => {
                let shape = self.shape();
                for t in terms {
                    t.validate()?;
                    if (t.rows(), t.cols()) != shape {
                        return Err(Error::DimensionMismatch("sum terms must share a shape".into()));
                    }
                }
                if terms.is_empty() {
                    return Err(Error::InvalidParameter("empty sum stage".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

fn is_identity(m: &ComplexMatrix) -> bool {
    m.is_square()
        && (0..m.rows()).all(|i| {
            m.row(i)
                .iter()
                .enumerate()
                .all(|(j, z)| *z == if i == j { Complex64::new(1.0, 0.0) } else { ZERO })
        })
}

/// Mode-by-mode application of a Kronecker product to a row-major tensor.
fn kron_apply(factors: &[ComplexMatrix], v: &[Complex64], adjoint: bool) -> Vec<Complex64> {
    // current tensor dims, starting from the input side
    let mut dims: Vec<usize> = factors
        .iter()
        .map(|f| if adjoint { f.rows() } else { f.cols() })
        .collect();
    let mut x = v.to_vec();
    for (k, f) in factors.iter().enumerate() {
        let (out_dim, in_dim) = if adjoint { (f.cols(), f.rows()) } else { (f.rows(), f.cols()) };
        if is_identity(f) {
            continue;
        }
        let left: usize = dims[..k].iter().product();
        let right: usize = dims[k + 1..].iter().product();
        let mut y = vec![ZERO; left * out_dim * right];
        for l in 0..left {
            for a in 0..out_dim {
                let dst = &mut y[(l * out_dim + a) * right..(l * out_dim + a + 1) * right];
                for b in 0..in_dim {
                    let coef = if adjoint { f[(b, a)].conj() } else { f[(a, b)] };
                    if coef == ZERO {
                        continue;
                    }
                    let src = &x[(l * in_dim + b) * right..(l * in_dim + b + 1) * right];
                    for (d, s) in dst.iter_mut().zip(src) {
                        *d += coef * s;
                    }
                }
            }
        }
        dims[k] = out_dim;
        x = y;
    }
    x
}

/// Product `stages[0] · stages[1] · … · stages[last]`, applied right to left.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StructuredOperator {
    stages: Vec<Stage>,
    rows: usize,
    cols: usize,
}

impl StructuredOperator {
    pub fn new(stages: Vec<Stage>) -> Result<Self> {
        let first = stages
            .first()
            .ok_or_else(|| Error::InvalidParameter("operator needs at least one stage".into()))?;
        let rows = first.shape().0;
        let mut inner = first.shape().1;
        first.validate()?;
        for s in &stages[1..] {
            s.validate()?;
            let (r, c) = s.shape();
            if r != inner {
                return Err(Error::DimensionMismatch(format!(
                    "stage with {r} rows cannot follow a stage with {inner} columns"
                )));
            }
            inner = c;
        }
        Ok(Self {
            stages,
            rows,
            cols: inner,
        })
    }

    pub fn single(stage: Stage) -> Result<Self> {
        Self::new(vec![stage])
    }

    pub fn dense(m: ComplexMatrix) -> Self {
        let (rows, cols) = m.shape();
        Self {
            stages: vec![Stage::Dense { matrix: m }],
            rows,
            cols,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn stages(&self) -> &[Stage] {
        &self.stages
    }

    fn validate(&self) -> Result<()> {
        self.stages.iter().try_for_each(Stage::validate)
    }

    /// `A·v`.
    pub fn apply(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "operator with {} columns applied to vector of length {}",
                self.cols,
                v.len()
            )));
        }
        Ok(self.apply_unchecked(v))
    }

    /// `A*·v`.
    pub fn apply_adjoint(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        if v.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "adjoint of operator with {} rows applied to vector of length {}",
                self.rows,
                v.len()
            )));
        }
        Ok(self.apply_adjoint_unchecked(v))
    }

    fn apply_unchecked(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut x = v.to_vec();
        for s in self.stages.iter().rev() {
            x = s.apply(&x, false);
        }
        x
    }

    fn apply_adjoint_unchecked(&self, v: &[Complex64]) -> Vec<Complex64> {
        let mut x = v.to_vec();
        for s in &self.stages {
            x = s.apply(&x, true);
        }
        x
    }

    /// Dense matrix, column by column. Subject to the dense size cap.
    pub fn materialize(&self) -> Result<ComplexMatrix> {
        let cap = dense_dim_cap();
        if self.rows > cap || self.cols > cap {
            return Err(Error::ResourceCap(format!(
                "materialising a {}x{} operator exceeds the dense cap {cap}",
                self.rows, self.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, self.cols);
        let mut e = vec![ZERO; self.cols];
        for j in 0..self.cols {
            e[j] = Complex64::new(1.0, 0.0);
            out.set_col(j, &self.apply_unchecked(&e));
            e[j] = ZERO;
        }
        Ok(out)
    }
}
