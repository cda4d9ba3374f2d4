use hermblock::block::{direct_sum_copies, is_dyadic, pad_to_dyadic, BlockMatrix};
use hermblock::decompose::{
    clifford_decompose, pinch_decompose, two_block_hermitian_decompose, CliffordIsometries, StructuredDecomposition,
    StructuredOperator, WeightedIsometryDecomposition,
};
use hermblock::linalg::vec_norm;
use hermblock::{Complex64, ComplexMatrix, Error, HermitianMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::args::{DecomposeArgs, DecomposeKind};
use crate::files::{read_block_matrix, write_json};
use crate::report::{DecompositionSummary, RunReport};
use crate::{CliResult, Failure, EXIT_INVALID, EXIT_PASS};

/// Random probes used to check operator-valued isometries.
const PROBES: usize = 16;
const PROBE_SEED: u64 = 0x5eed;

/// Decomposition export with dense isometries.
#[derive(Serialize, Deserialize)]
pub struct DenseFile {
    pub kind: String,
    pub beta: usize,
    pub n: usize,
    pub m: usize,
    #[serde(flatten)]
    pub decomposition: WeightedIsometryDecomposition,
}

/// Decomposition export with stage-wise isometries; the shared summand is
/// `⊕^m partial_trace`.
#[derive(Serialize, Deserialize)]
pub struct StructuredFile {
    pub kind: String,
    pub beta: usize,
    pub n: usize,
    pub m: usize,
    pub weight: f64,
    pub partial_trace: HermitianMatrix,
    pub isometries: Vec<StructuredOperator>,
}

fn kind_name(k: DecomposeKind) -> &'static str {
    match k {
        DecomposeKind::Pinch => "pinch",
        DecomposeKind::TwoBlock => "two-block",
        DecomposeKind::Clifford => "clifford",
    }
}

pub fn run(args: &DecomposeArgs, report: &mut RunReport) -> CliResult<u8> {
    report.add_input(&args.input)?;
    if args.kind != DecomposeKind::Clifford && (args.pad || args.structured) {
        return Err(Failure::invalid("--pad and --structured apply to --kind clifford only"));
    }
    let h = read_block_matrix(&args.input, args.beta)?;
    let kind = kind_name(args.kind);
    // A block structure the construction cannot use is bad input here.
    let as_input_error = |e: Error| match e {
        Error::HypothesisViolated(msg) => Failure {
            code: EXIT_INVALID,
            message: format!("{kind} decomposition needs Hermitian off-diagonal blocks: {msg}"),
        },
        other => other.into(),
    };
    let summary = match args.kind {
        DecomposeKind::Pinch => {
            let d = pinch_decompose(&h)?;
            dense(kind, &h, 1, d, h.matrix().as_matrix().clone(), args)?
        }
        DecomposeKind::TwoBlock => {
            let d = two_block_hermitian_decompose(&h).map_err(as_input_error)?;
            dense(kind, &h, 1, d, h.matrix().as_matrix().clone(), args)?
        }
        DecomposeKind::Clifford => {
            let h = if !is_dyadic(h.beta()) && args.pad { pad_to_dyadic(&h) } else { h };
            let c = clifford_decompose(&h, !args.structured).map_err(as_input_error)?;
            match c.isometries {
                CliffordIsometries::Dense(d) => {
                    let target = direct_sum_copies(h.matrix(), c.m)?.into_matrix();
                    dense(kind, &h, c.m, d, target, args)?
                }
                CliffordIsometries::Structured(s) => structured(kind, &h, s, args)?,
            }
        }
    };
    report.decomposition = Some(summary);
    Ok(EXIT_PASS)
}

fn dense(
    kind: &str,
    h: &BlockMatrix,
    m: usize,
    d: WeightedIsometryDecomposition,
    target: ComplexMatrix,
    args: &DecomposeArgs,
) -> CliResult<DecompositionSummary> {
    let file = DenseFile {
        kind: kind.into(),
        beta: h.beta(),
        n: h.n(),
        m,
        decomposition: d,
    };
    // Everything below is measured on the artifact as written.
    let text = serde_json::to_string(&file)?;
    let back: DenseFile = serde_json::from_str(&text)?;
    if let Some(out) = &args.out {
        write_json(out, &file)?;
    }
    let d = &back.decomposition;
    Ok(DecompositionSummary {
        kind: kind.into(),
        beta: back.beta,
        n: back.n,
        m,
        weight: d.weight,
        isometries: d.isometries.len(),
        residual: d.residual(&target)?,
        isometry_defects: d.isometries.iter().map(|v| v.defect()).collect(),
        probes: None,
        output: args.out.as_ref().map(|p| p.display().to_string()),
    })
}

fn structured(
    kind: &str,
    h: &BlockMatrix,
    s: StructuredDecomposition,
    args: &DecomposeArgs,
) -> CliResult<DecompositionSummary> {
    let file = StructuredFile {
        kind: kind.into(),
        beta: h.beta(),
        n: h.n(),
        m: s.m,
        weight: s.weight,
        partial_trace: s.partial_trace,
        isometries: s.isometries,
    };
    let text = serde_json::to_string(&file)?;
    let back: StructuredFile = serde_json::from_str(&text)?;
    if let Some(out) = &args.out {
        write_json(out, &file)?;
    }
    let s = StructuredDecomposition {
        weight: back.weight,
        m: back.m,
        partial_trace: back.partial_trace,
        isometries: back.isometries,
    };
    let side = s.m * h.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
    let mut residual: f64 = 0.0;
    let mut defects = vec![0.0f64; s.isometries.len()];
    for _ in 0..PROBES {
        let v: Vec<Complex64> = (0..side)
            .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let nv = vec_norm(&v);
        let mut lhs = Vec::with_capacity(side);
        for chunk in v.chunks(h.dim()) {
            lhs.extend(h.matrix().as_matrix().matvec(chunk)?);
        }
        let rhs = s.apply(&v)?;
        let diff: Vec<Complex64> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
        residual = residual.max(vec_norm(&diff) / nv);

        let cols = s.isometries.first().map_or(0, StructuredOperator::cols);
        let u: Vec<Complex64> = v[..cols].to_vec();
        let nu = vec_norm(&u);
        for (k, vk) in s.isometries.iter().enumerate() {
            let back = vk.apply_adjoint(&vk.apply(&u)?)?;
            let diff: Vec<Complex64> = back.iter().zip(&u).map(|(a, b)| a - b).collect();
            defects[k] = defects[k].max(vec_norm(&diff) / nu);
        }
    }
    Ok(DecompositionSummary {
        kind: kind.into(),
        beta: back.beta,
        n: back.n,
        m: s.m,
        weight: s.weight,
        isometries: s.isometries.len(),
        residual,
        isometry_defects: defects,
        probes: Some(PROBES),
        output: args.out.as_ref().map(|p| p.display().to_string()),
    })
}
