use hermblock::block::dyadic_ceiling;
use hermblock::certify::{
    check_block_norm_bound, check_determinant_blocks, check_eigen_averaged, check_eigen_step, check_hiroshima,
    check_nielsen_kempe, check_rearrangement, check_trace_concave, CertificateReport, CheckOptions, CommutingFamily,
    Hypothesis, RearrangementMode, SeparableState, SeparableTerm,
};
use hermblock::linalg::ConcaveFunctionSpec;
use hermblock::ComplexMatrix;
use serde::Deserialize;

use crate::args::{Check, ModeArg, VerifyArgs};
use crate::files::{hermitian_input, parse_json, read_block_matrix, read_json};
use crate::report::RunReport;
use crate::{CliResult, Failure, EXIT_HYPOTHESIS, EXIT_PASS, EXIT_VIOLATION};

/// Input of `verify rearrange`.
#[derive(Deserialize)]
struct RearrangeInput {
    family: Vec<ComplexMatrix>,
    t: ComplexMatrix,
    #[serde(default)]
    witness_basis: Option<ComplexMatrix>,
}

/// Input of `verify nielsen-kempe`.
#[derive(Deserialize)]
struct SeparableInput {
    terms: Vec<SeparableTerm>,
    #[serde(default)]
    normalized: bool,
}

pub fn run(args: &VerifyArgs, tol: f64, report: &mut RunReport) -> CliResult<u8> {
    report.add_input(&args.input)?;
    let opts = CheckOptions { tol, force: args.force };
    let reports = match args.check {
        Check::Rearrange => rearrange(args, &opts)?,
        Check::NielsenKempe => {
            let input: SeparableInput = parse_json(read_json(&args.input)?, "separable state")?;
            let z = SeparableState::new(input.terms, input.normalized)?;
            vec![check_nielsen_kempe(&z, &opts)?]
        }
        check => {
            let h = read_block_matrix(&args.input, args.beta)?;
            vec![match check {
                Check::Hiroshima => check_hiroshima(&h, &opts)?,
                Check::EigenStep => check_eigen_step(&h, &opts)?,
                Check::EigenAvg => {
                    let splits = args.splits.clone().unwrap_or_else(|| vec![args.k; dyadic_ceiling(h.beta())]);
                    check_eigen_averaged(&h, args.k, &splits, &opts)?
                }
                Check::TraceConcave => {
                    let f: ConcaveFunctionSpec = args
                        .f
                        .parse()
                        .map_err(|e: hermblock::Error| Failure::invalid(format!("--f {}: {e}", args.f)))?;
                    check_trace_concave(&h, &f, &opts)?
                }
                Check::Determinant => check_determinant_blocks(&h, &opts)?,
                Check::NormBound => check_block_norm_bound(&h, args.p, &opts)?,
                Check::Rearrange | Check::NielsenKempe => unreachable!(),
            }]
        }
    };
    let code = outcome(&reports);
    report.certificates = reports;
    Ok(code)
}

fn rearrange(args: &VerifyArgs, opts: &CheckOptions) -> CliResult<Vec<CertificateReport>> {
    let input: RearrangeInput = parse_json(read_json(&args.input)?, "rearrangement input")?;
    let members = input.family.into_iter().map(hermitian_input).collect::<CliResult<Vec<_>>>()?;
    let family = CommutingFamily::new(members, input.witness_basis)?;
    let t = hermitian_input(input.t)?;
    let modes: &[RearrangementMode] = match args.mode {
        ModeArg::Norms => &[RearrangementMode::Norms],
        ModeArg::Eigensteps => &[RearrangementMode::Eigensteps],
        ModeArg::Both => &[RearrangementMode::Norms, RearrangementMode::Eigensteps],
    };
    modes
        .iter()
        .map(|&m| Ok(check_rearrangement(&family, &t, m, opts)?))
        .collect()
}

/// A partial report means the hypothesis failed without `--force`, even if
/// the remaining items pass.
fn outcome(reports: &[CertificateReport]) -> u8 {
    if reports.iter().any(|r| !r.passed) {
        EXIT_VIOLATION
    } else if reports.iter().any(|r| r.context.hypothesis == Hypothesis::ViolatedPartial) {
        EXIT_HYPOTHESIS
    } else {
        EXIT_PASS
    }
}
