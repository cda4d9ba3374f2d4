use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::hermitian::HermitianMatrix;
use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Closed catalog of functions that are concave on `[0, ∞)` with `f(0) ≥ 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum ConcaveFunctionSpec {
    Sqrt,
    Log1p,
    /// `t^q`, `0 < q ≤ 1`.
    Power { q: f64 },
    /// `t / (1 + t)`.
    Rational,
    /// `min(t, c)`, `c > 0`.
    Clamp { c: f64 },
    /// `a + b·t`, `a ≥ 0`.
    Affine { a: f64, b: f64 },
}

impl ConcaveFunctionSpec {
    /// Rejects parameters outside the catalog's concavity conditions.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        match *self {
            Self::Power { q } if !(q > 0.0 && q <= 1.0) => bad(format!("power exponent must lie in (0, 1], got {q}")),
            Self::Clamp { c } if !(c > 0.0 && c.is_finite()) => bad(format!("clamp level must be positive, got {c}")),
            Self::Affine { a, b } if !(a >= 0.0 && a.is_finite() && b.is_finite()) => {
                bad(format!("affine needs a ≥ 0 and finite b, got a={a}, b={b}"))
            }
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match *self {
            Self::Sqrt => t.sqrt(),
            Self::Log1p => t.ln_1p(),
            Self::Power { q } => t.powf(q),
            Self::Rational => t / (1.0 + t),
            Self::Clamp { c } => t.min(c),
            Self::Affine { a, b } => a + b * t,
        }
    }

    pub fn at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    /// Every catalog entry, with representative parameters.
    pub fn catalog() -> Vec<Self> {
        vec![
            Self::Sqrt,
            Self::Log1p,
            Self::Power { q: 0.3 },
            Self::Rational,
            Self::Clamp { c: 0.5 },
            Self::Affine { a: 0.0, b: 1.0 },
        ]
    }
}

impl fmt::Display for ConcaveFunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Sqrt => write!(f, "sqrt"),
            Self::Log1p => write!(f, "log1p"),
            Self::Power { q } => write!(f, "power:{q}"),
            Self::Rational => write!(f, "rational"),
            Self::Clamp { c } => write!(f, "clamp:{c}"),
            Self::Affine { a, b } => write!(f, "affine:{a},{b}"),
        }
    }
}

/// Parses `sqrt`, `log1p`, `power:q`, `rational`, `clamp:c` (or `min:c`),
/// `affine:a,b` and the shorthand `identity` for `affine:0,1`.
impl FromStr for ConcaveFunctionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (name, args) = match s.split_once(':') {
            Some((n, a)) => (n.trim(), Some(a)),
            None => (s.trim(), None),
        };
        let nums = |a: Option<&str>| -> Result<Vec<f64>> {
            a.unwrap_or("")
                .split(',')
                .filter(|x| !x.trim().is_empty())
                .map(|x| {
                    x.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::InvalidParameter(format!("bad number '{x}' in '{s}'")))
                })
                .collect()
        };
        let p = nums(args)?;
        let arity = |k: usize| -> Result<()> {
            if p.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("'{name}' takes {k} parameter(s), got {}", p.len())))
            }
        };
        let spec = match name {
            "sqrt" => {
                arity(0)?;
                Self::Sqrt
            }
            "log1p" => {
                arity(0)?;
                Self::Log1p
            }
            "rational" => {
                arity(0)?;
                Self::Rational
            }
            "identity" => {
                arity(0)?;
                Self::Affine { a: 0.0, b: 1.0 }
            }
            "power" => {
                arity(1)?;
                Self::Power { q: p[0] }
            }
            "clamp" | "min" => {
                arity(1)?;
                Self::Clamp { c: p[0] }
            }
            "affine" => {
                arity(2)?;
                Self::Affine { a: p[0], b: p[1] }
            }
            other => return Err(Error::InvalidParameter(format!("unknown concave function '{other}'"))),
        };
        spec.validate()?;
        Ok(spec)
    }
}

/// `U g(diag λ) U*` for PSD `A`, after clamping eigenvalues in
/// `[−tol, 0)` to zero.
pub(crate) fn psd_spectral_apply(a: &HermitianMatrix, g: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    let (s, u) = a.eig()?;
    if a.dim() > 0 && s.min() < -a.psd_tolerance() {
        return Err(Error::NotPsd { lambda_min: s.min() });
    }
    let mapped: Vec<f64> = s.values().iter().map(|&l| g(l.max(0.0))).collect();
    let d = ComplexMatrix::diag_real(&mapped);
    HermitianMatrix::new(u.matmul(&d)?.matmul_adjoint(&u)?)
}

/// Spectral calculus `f(A)` for a PSD matrix and a catalog function.
pub fn matrix_function(a: &HermitianMatrix, f: &ConcaveFunctionSpec) -> Result<HermitianMatrix> {
    f.validate()?;
    psd_spectral_apply(a, |t| f.eval(t))
}

/// Principal square root of a PSD matrix.
pub fn psd_sqrt(a: &HermitianMatrix) -> Result<HermitianMatrix> {
    psd_spectral_apply(a, f64::sqrt)
}

/// `Tr f(A)` through the eigenvalues, with the same clamping as [`matrix_function`].
pub fn trace_function(a: &HermitianMatrix, f: &ConcaveFunctionSpec) -> Result<f64> {
    f.validate()?;
    let s = a.ensure_psd()?;
    Ok(s.values().iter().map(|&l| f.eval(l.max(0.0))).sum())
}
