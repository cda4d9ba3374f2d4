use std::fs;
use std::path::Path;

use hermblock::block::{partition, BlockMatrix};
use hermblock::tol::{dense_dim_cap, rel, TOL_EIG};
use hermblock::{ComplexMatrix, Error, HermitianMatrix};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::{CliResult, Failure};

/// Block form of a matrix file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlockFile {
    pub beta: usize,
    pub n: usize,
    pub matrix: ComplexMatrix,
}

/// A matrix file: a bare `{rows, cols, data}` object or the block form.
#[derive(Clone, Debug, PartialEq)]
pub enum MatrixFile {
    Plain(ComplexMatrix),
    Block(BlockFile),
}

impl MatrixFile {
    pub fn from_value(v: Value) -> CliResult<Self> {
        if v.get("beta").is_some() {
            let b: BlockFile = serde_json::from_value(v)?;
            let side = b.beta * b.n;
            if b.beta == 0 || b.n == 0 || b.matrix.rows() != side || b.matrix.cols() != side {
                return Err(Failure::invalid(format!(
                    "block form needs a {side}x{side} matrix for beta={}, n={}, got {}x{}",
                    b.beta,
                    b.n,
                    b.matrix.rows(),
                    b.matrix.cols()
                )));
            }
            Ok(Self::Block(b))
        } else {
            Ok(Self::Plain(serde_json::from_value(v)?))
        }
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        Self::from_value(read_json(path)?)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        match self {
            Self::Plain(m) => m,
            Self::Block(b) => &b.matrix,
        }
    }

    pub fn to_value(&self) -> Value {
        match self {
            Self::Plain(m) => serde_json::to_value(m),
            Self::Block(b) => serde_json::to_value(b),
        }
        .expect("matrices always serialize")
    }

    /// Resolves the partition, with `beta` taken from the file or the flag.
    pub fn into_block_matrix(self, beta_flag: Option<usize>) -> CliResult<BlockMatrix> {
        let (m, beta) = match self {
            Self::Block(b) => {
                if let Some(f) = beta_flag.filter(|&f| f != b.beta) {
                    return Err(Failure::invalid(format!("--beta {f} contradicts beta={} in the file", b.beta)));
                }
                (b.matrix, b.beta)
            }
            Self::Plain(m) => {
                let beta = beta_flag.ok_or_else(|| Failure::invalid("plain matrix file needs --beta"))?;
                (m, beta)
            }
        };
        let h = hermitian_input(m)?;
        if beta == 0 || h.dim() % beta != 0 || h.dim() == 0 {
            return Err(Failure::invalid(format!("side {} is not divisible into {beta} blocks", h.dim())));
        }
        Ok(partition(&h, beta, h.dim() / beta)?)
    }
}

/// Accepts a square matrix that is Hermitian up to rounding.
pub fn hermitian_input(m: ComplexMatrix) -> CliResult<HermitianMatrix> {
    if !m.is_square() {
        return Err(Failure::invalid(format!("expected a square matrix, got {}x{}", m.rows(), m.cols())));
    }
    let cap = dense_dim_cap();
    if m.rows() > cap {
        return Err(Error::ResourceCap(format!("side {} exceeds the dense cap {cap}", m.rows())).into());
    }
    let defect = m.hermitian_defect();
    let bound = TOL_EIG * rel(m.frobenius_norm());
    if defect > bound {
        return Err(Failure::invalid(format!("matrix is not Hermitian: ‖M − M*‖ = {defect:e}")));
    }
    Ok(HermitianMatrix::new(m)?)
}

pub fn read_block_matrix(path: &Path, beta: Option<usize>) -> CliResult<BlockMatrix> {
    MatrixFile::read(path)?.into_block_matrix(beta)
}

pub fn read_json(path: &Path) -> CliResult<Value> {
    let text = fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(v: Value, what: &str) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Failure::invalid(format!("{what}: {e}")))
}

pub fn write_json(path: &Path, v: &impl Serialize) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(v)?;
    text.push('\n');
    fs::write(path, text).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Hex SHA-256 of a file's bytes.
pub fn file_digest(path: &Path) -> CliResult<String> {
    use sha2::{Digest, Sha256};
    let bytes = fs::read(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    Ok(Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use hermblock::Complex64;

    #[test]
    fn plain_and_block_forms_parse() {
        let plain = serde_json::json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [2.0, 0.0]]});
        let f = MatrixFile::from_value(plain.clone()).unwrap();
        assert!(matches!(f, MatrixFile::Plain(_)));
        let h = f.into_block_matrix(Some(2)).unwrap();
        assert_eq!(h.n(), 1);

        let block = serde_json::json!({"beta": 2, "n": 1, "matrix": plain});
        let h2 = MatrixFile::from_value(block).unwrap().into_block_matrix(None).unwrap();
        assert_eq!(h, h2);
    }

    #[test]
    fn shape_and_symmetry_errors_are_invalid_input() {
        let bad = serde_json::json!({"beta": 3, "n": 1, "matrix": {"rows": 2, "cols": 2, "data": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0], [1.0, 0.0]]}});
        assert_eq!(MatrixFile::from_value(bad).unwrap_err().code, crate::EXIT_INVALID);

        let m = ComplexMatrix::new(2, 2, vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert_eq!(hermitian_input(m).unwrap_err().code, crate::EXIT_INVALID);

        let short = serde_json::json!({"rows": 2, "cols": 2, "data": [[1.0, 0.0]]});
        assert!(MatrixFile::from_value(short).is_err());
        let missing = serde_json::json!({"rows": 1, "cols": 1, "data": [[1.0, 0.0]]});
        assert!(MatrixFile::from_value(missing).unwrap().into_block_matrix(None).is_err());
    }
}
