//! Seeded instance generators and a randomized counterexample search.
//!
//! Every generator draws from a ChaCha8 stream seeded by
//! [`GeneratorConfig::seed`], with a fixed stream id per generator, so that
//! identical configurations give bit-identical output.

mod instances;
mod search;

pub use instances::{gen_commuting_family, gen_hermitian_block_psd, gen_psd, gen_separable_real_factor, project_block_hermitian};
pub use search::{evaluator_self_test, normal_block_margin, search_counterexample_normal_blocks, SearchOutcome};

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{inner, vec_norm, ComplexMatrix, HermitianMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// `Σ_j A_j ⊗ B_j`, real symmetric PSD `A_j`, Hermitian PSD `B_j`.
    Separable,
    /// Blocks `T S_s S_t T` from a commuting family and a PSD `T`.
    Gram,
    /// Dykstra projection of a random PSD matrix onto the Hermitian-block PSD set.
    Projected,
    /// Commuting Hermitian family sharing a random eigenbasis.
    Commuting,
    /// Separable state with real first factors.
    SeparableState,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Separable => "separable",
            Method::Gram => "gram",
            Method::Projected => "projected",
            Method::Commuting => "commuting",
            Method::SeparableState => "separable-state",
        })
    }
}

fn default_k() -> usize {
    2
}

fn default_cap() -> usize {
    10_000
}

fn default_budget() -> usize {
    100
}

/// Generator input. `beta` is the block count (or family size, or side of
/// the real factor); `n` is the block side (or the side of the second factor).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub seed: u64,
    pub method: Method,
    #[serde(alias = "alpha")]
    pub beta: usize,
    pub n: usize,
    /// Number of product terms.
    #[serde(default = "default_k")]
    pub k: usize,
    /// Iteration cap of the projection method.
    #[serde(default = "default_cap")]
    pub cap: usize,
    /// Scale separable states to unit trace.
    #[serde(default)]
    pub normalized: bool,
    /// Number of random restarts of the counterexample search.
    #[serde(default = "default_budget")]
    pub budget: usize,
    /// Restrict the search to Hermitian off-diagonal blocks.
    #[serde(default)]
    pub hermitian_only: bool,
}

impl GeneratorConfig {
    pub fn new(method: Method, seed: u64, beta: usize, n: usize) -> Self {
        Self {
            seed,
            method,
            beta,
            n,
            k: default_k(),
            cap: default_cap(),
            normalized: false,
            budget: default_budget(),
            hermitian_only: false,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_budget(mut self, budget: usize) -> Self {
        self.budget = budget;
        self
    }

    pub fn normalized(mut self, yes: bool) -> Self {
        self.normalized = yes;
        self
    }

    pub fn hermitian_only(mut self, yes: bool) -> Self {
        self.hermitian_only = yes;
        self
    }

    fn require_dims(&self) -> Result<()> {
        if self.beta == 0 || self.n == 0 {
            return Err(Error::InvalidParameter(format!(
                "beta and n must be positive, got beta={}, n={}",
                self.beta, self.n
            )));
        }
        Ok(())
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

// Stream ids, one per generator.
const STREAM_SEPARABLE: u64 = 1;
const STREAM_GRAM: u64 = 2;
const STREAM_PROJECTED: u64 = 3;
const STREAM_COMMUTING: u64 = 4;
const STREAM_STATE: u64 = 5;
const STREAM_SEARCH: u64 = 6;
const STREAM_PSD: u64 = 7;

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

fn real_gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| Complex64::new(normal(rng), 0.0))
}

fn complex_gaussian(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re = normal(rng);
        Complex64::new(re, normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
    })
}

/// `G G* / n` with `G` of shape `n × rank`, real or complex.
fn random_psd(rng: &mut ChaCha8Rng, n: usize, rank: usize, real: bool) -> HermitianMatrix {
    let g = if real {
        real_gaussian(rng, n, rank)
    } else {
        complex_gaussian(rng, n, rank)
    };
    let m = g.matmul_adjoint(&g).expect("conformable").scale(1.0 / n as f64);
    HermitianMatrix::new(m).expect("square")
}

/// Rank drawn uniformly from `1..=n`.
fn random_rank(rng: &mut ChaCha8Rng, n: usize) -> usize {
    use rand::Rng;
    rng.random_range(1..=n)
}

/// Unitary from Gram–Schmidt (applied twice) on a complex Gaussian matrix.
fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> ComplexMatrix {
    let g = complex_gaussian(rng, n, n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for j in 0..n {
        let mut v = g.col_vec(j);
        for _ in 0..2 {
            for q in &cols {
                let c = inner(q, &v);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
        }
        let nv = vec_norm(&v);
        cols.push(v.into_iter().map(|z| z / nv).collect());
    }
    let mut u = ComplexMatrix::zeros(n, n);
    for (j, c) in cols.iter().enumerate() {
        u.set_col(j, c);
    }
    u
}
