use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "hermblock", version, about = "Isometric decompositions and eigenvalue certificates for PSD block matrices")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// Print the run report as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON run report to this file.
    #[arg(long, global = true, value_name = "FILE")]
    pub report: Option<PathBuf>,
    /// Leave the wall time out of the report (for byte-identical reruns).
    #[arg(long, global = true)]
    pub no_timing: bool,
    /// Margin tolerance for inputs normalised to operator norm one.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose a block matrix into isometric congruences.
    Decompose(DecomposeArgs),
    /// Check an inequality and print per-item margins.
    Verify(VerifyArgs),
    /// Write a seeded random instance.
    Generate(GenerateArgs),
    /// Randomized search for operator-norm violations with normal off-diagonal blocks.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DecomposeKind {
    Pinch,
    TwoBlock,
    Clifford,
}

#[derive(Debug, Args)]
pub struct DecomposeArgs {
    #[arg(long, value_enum)]
    pub kind: DecomposeKind,
    /// Matrix file (block form, or plain with --beta).
    pub input: PathBuf,
    /// Block count for a plain matrix file.
    #[arg(long)]
    pub beta: Option<usize>,
    /// Pad to a power-of-two block count with zero blocks (clifford).
    #[arg(long)]
    pub pad: bool,
    /// Emit lazily applied isometries instead of dense ones (clifford).
    #[arg(long)]
    pub structured: bool,
    /// Where to write the decomposition JSON.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Check {
    Hiroshima,
    EigenStep,
    EigenAvg,
    Rearrange,
    TraceConcave,
    Determinant,
    NielsenKempe,
    NormBound,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Norms,
    Eigensteps,
    Both,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub check: Check,
    /// Input file; its schema depends on the check.
    pub input: PathBuf,
    /// Block count for a plain matrix file.
    #[arg(long)]
    pub beta: Option<usize>,
    /// Run even if the hypothesis fails; the report is labelled.
    #[arg(long)]
    pub force: bool,
    /// Concave function: sqrt, log1p, power:q, rational, clamp:c, affine:a,b.
    #[arg(long = "f", default_value = "sqrt")]
    pub f: String,
    /// Schatten exponent for norm-bound (`inf` for the operator norm).
    #[arg(long = "p", default_value = "inf")]
    pub p: f64,
    /// Step index for eigen-avg.
    #[arg(long = "k", default_value_t = 0)]
    pub k: usize,
    /// Comma-separated split k_1,…,k_β for eigen-avg (default: all equal to k).
    #[arg(long, value_delimiter = ',')]
    pub splits: Option<Vec<usize>>,
    /// Comparison mode for rearrange.
    #[arg(long, value_enum, default_value = "both")]
    pub mode: ModeArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Separable,
    Gram,
    Projected,
    Commuting,
    SeparableState,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_enum, required_unless_present = "config")]
    pub method: Option<MethodArg>,
    /// Generator configuration as JSON; replaces the other generator flags.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Block count, family size, or side of the real factor.
    #[arg(long, alias = "alpha", default_value_t = 2)]
    pub beta: usize,
    /// Block side, or side of the second factor.
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    /// Number of product terms.
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Iteration cap of the projection method.
    #[arg(long, default_value_t = 10_000)]
    pub cap: usize,
    /// Scale separable states to unit trace.
    #[arg(long)]
    pub normalized: bool,
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Number of random restarts.
    #[arg(long, default_value_t = 1000)]
    pub budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Block side.
    #[arg(long, default_value_t = 3)]
    pub n: usize,
    /// Restrict to Hermitian off-diagonal blocks.
    #[arg(long)]
    pub hermitian_only: bool,
    /// Only evaluate the rank-one reference instance.
    #[arg(long)]
    pub self_test: bool,
    /// Where to write the best instance when its margin is positive.
    #[arg(long, short)]
    pub out: Option<PathBuf>,
}
