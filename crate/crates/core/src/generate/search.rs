use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;

use super::{complex_gaussian, normal, random_psd, random_unitary, GeneratorConfig, STREAM_SEARCH};
use crate::block::{assemble, partial_trace, partition, BlockMatrix};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, ComplexMatrix, HermitianMatrix, Spectrum};
use crate::tol::TOL_CERT;

/// Hill-climbing moves per restart.
const CLIMB_STEPS: usize = 4;
/// Standard deviation of the phase rotations applied to the spectrum of `X`.
const PHASE_STEP: f64 = 0.3;
/// Size of the perturbation applied to the eigenbasis of `X`.
const BASIS_STEP: f64 = 0.1;

/// Result of [`search_counterexample_normal_blocks`].
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    /// Number of restarts evaluated.
    pub evaluated: usize,
    /// Largest `‖H‖_∞ − ‖A+B‖_∞` observed, if anything was evaluated.
    pub best_margin: Option<f64>,
    /// Best instance when its margin is positive beyond tolerance.
    pub candidate: Option<(BlockMatrix, f64)>,
}

/// `‖H‖_∞ − ‖A+B‖_∞` for a two-block PSD matrix; positive values violate
/// the operator-norm comparison with the partial trace.
pub fn normal_block_margin(h: &BlockMatrix) -> Result<f64> {
    if h.beta() != 2 {
        return Err(Error::InvalidParameter(format!("expected 2 blocks, got {}", h.beta())));
    }
    Ok(h.operator_norm() - partial_trace(h).operator_norm()?)
}

/// Margin of the rank-one instance `xx*`, `x = (1, 0, 0, 1)`: `λ_max = 2`
/// while `A + B = I_2`, so the value is `+1`.
pub fn evaluator_self_test() -> Result<f64> {
    let x = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0], &[1.0]]);
    let h = partition(&HermitianMatrix::new(x.matmul_adjoint(&x)?)?, 2, 2)?;
    normal_block_margin(&h)
}

/// `[[A, X], [X*, B]]` with normal `X = U diag(z) U*`.
#[derive(Clone)]
struct Candidate {
    a: HermitianMatrix,
    b: HermitianMatrix,
    u: ComplexMatrix,
    z: Vec<Complex64>,
}

impl Candidate {
    fn draw(rng: &mut ChaCha8Rng, n: usize, hermitian_only: bool) -> Self {
        let a = random_psd(rng, n, n, false);
        let b = random_psd(rng, n, n, false);
        let u = random_unitary(rng, n);
        let z = (0..n)
            .map(|_| {
                let re = normal(rng);
                if hermitian_only {
                    Complex64::new(re, 0.0)
                } else {
                    Complex64::new(re, normal(rng))
                }
            })
            .collect();
        Self { a, b, u, z }
    }

    fn perturb(&self, rng: &mut ChaCha8Rng, hermitian_only: bool) -> Self {
        let n = self.z.len();
        let z = self
            .z
            .iter()
            .map(|&w| {
                if hermitian_only {
                    w + PHASE_STEP * normal(rng)
                } else {
                    w * Complex64::from_polar(1.0, PHASE_STEP * normal(rng))
                }
            })
            .collect();
        let g = complex_gaussian(rng, n, n).scale(BASIS_STEP);
        let u = orthonormalize(&(&self.u + &g));
        Self {
            a: self.a.clone(),
            b: self.b.clone(),
            u,
            z,
        }
    }

    /// Unshifted matrix, its spectrum and the shift `c ≥ 0` added to both
    /// diagonal blocks.
    fn assemble(&self) -> Result<(HermitianMatrix, Spectrum, f64)> {
        let d = ComplexMatrix::from_fn(self.z.len(), self.z.len(), |i, j| {
            if i == j {
                self.z[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let x = self.u.matmul(&d)?.matmul_adjoint(&self.u)?;
        let h = HermitianMatrix::new(assemble(&[
            vec![self.a.as_matrix().clone(), x.clone()],
            vec![x.adjoint(), self.b.as_matrix().clone()],
        ])?)?;
        let spec = hermitian_eigenvalues(&h)?;
        let c = (-spec.min()).max(0.0);
        Ok((h, spec, c))
    }

    /// Margin after the PSD-restoring shift `A, B ← A + cI, B + cI`, which
    /// moves `λ_max(H)` by `c` and `λ_max(A+B)` by `2c`.
    fn margin(&self) -> Result<f64> {
        let (_, spec, c) = self.assemble()?;
        let lmax = spec.max();
        let sum = hermitian_eigenvalues(&self.a.try_add(&self.b)?)?.max();
        Ok(lmax - c - sum)
    }

    fn into_block_matrix(self) -> Result<BlockMatrix> {
        let (h, _, c) = self.assemble()?;
        let shifted = h.try_add(&HermitianMatrix::identity(h.dim()).scale(c))?;
        partition(&shifted, 2, self.z.len())
    }
}

fn orthonormalize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.cols();
    let mut out = ComplexMatrix::zeros(m.rows(), n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = m.col_vec(j);
        for _ in 0..2 {
            for q in &cols {
                let c = crate::linalg::inner(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = crate::linalg::vec_norm(&v);
        let v: Vec<Complex64> = v.into_iter().map(|x| x / nv).collect();
        out.set_col(j, &v);
        cols.push(v);
    }
    out
}

/// Random restarts with a short hill climb over PSD matrices
/// `[[A, X], [X*, B]]` whose off-diagonal block `X` is normal, looking for
/// `‖H‖_∞ > ‖A+B‖_∞`. Requires `beta = 2`; `budget` is the number of
/// restarts. With `hermitian_only`, `X` has a real spectrum.
pub fn search_counterexample_normal_blocks(cfg: &GeneratorConfig) -> Result<SearchOutcome> {
    cfg.require_dims()?;
    if cfg.beta != 2 {
        return Err(Error::InvalidParameter(format!(
            "the search works on 2 blocks, got beta = {}",
            cfg.beta
        )));
    }
    let mut rng = cfg.rng(STREAM_SEARCH);
    let mut best: Option<(Candidate, f64)> = None;
    for _ in 0..cfg.budget {
        let mut cur = Candidate::draw(&mut rng, cfg.n, cfg.hermitian_only);
        let mut cur_margin = cur.margin()?;
        for _ in 0..CLIMB_STEPS {
            let next = cur.perturb(&mut rng, cfg.hermitian_only);
            let m = next.margin()?;
            if m > cur_margin {
                cur = next;
                cur_margin = m;
            }
        }
        if best.as_ref().is_none_or(|(_, b)| cur_margin > *b) {
            best = Some((cur, cur_margin));
        }
    }
    let best_margin = best.as_ref().map(|(_, m)| *m);
    let candidate = match best {
        Some((c, m)) => {
            let h = c.into_block_matrix()?;
            let threshold = TOL_CERT * h.operator_norm().max(1.0);
            if m > threshold {
                Some((h, m))
            } else {
                None
            }
        }
        None => None,
    };
    Ok(SearchOutcome {
        evaluated: cfg.budget,
        best_margin,
        candidate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::Method;

    #[test]
    fn self_test_margin_is_one() {
        assert!((evaluator_self_test().unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_budget_finds_nothing() {
        let cfg = GeneratorConfig::new(Method::Separable, 1, 2, 3).with_budget(0);
        let out = search_counterexample_normal_blocks(&cfg).unwrap();
        assert_eq!(out.evaluated, 0);
        assert!(out.best_margin.is_none() && out.candidate.is_none());
    }

    #[test]
    fn hermitian_blocks_never_violate() {
        let cfg = GeneratorConfig::new(Method::Separable, 11, 2, 3)
            .with_budget(200)
            .hermitian_only(true);
        let out = search_counterexample_normal_blocks(&cfg).unwrap();
        assert!(out.best_margin.unwrap() <= 1e-10);
        assert!(out.candidate.is_none());
    }

    #[test]
    fn search_is_deterministic() {
        let cfg = GeneratorConfig::new(Method::Separable, 5, 2, 3).with_budget(20);
        let a = search_counterexample_normal_blocks(&cfg).unwrap();
        let b = search_counterexample_normal_blocks(&cfg).unwrap();
        assert_eq!(a.best_margin, b.best_margin);
    }

    #[test]
    fn margin_matches_shifted_instance() {
        let mut rng = GeneratorConfig::new(Method::Separable, 3, 2, 3).rng(0);
        let c = Candidate::draw(&mut rng, 3, false);
        let m = c.margin().unwrap();
        let h = c.into_block_matrix().unwrap();
        assert!((normal_block_margin(&h).unwrap() - m).abs() < 1e-10);
    }
}
