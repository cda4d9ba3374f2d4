use hermblock::generate::{evaluator_self_test, search_counterexample_normal_blocks, GeneratorConfig, Method};
use serde::Serialize;

use crate::args::SearchArgs;
use crate::files::write_json;
use crate::report::{RunReport, SearchSummary};
use crate::{CliResult, EXIT_PASS};

#[derive(Serialize)]
struct Found<'a> {
    provenance: &'a GeneratorConfig,
    margin: f64,
    beta: usize,
    n: usize,
    matrix: &'a hermblock::ComplexMatrix,
}

/// Finding nothing is a normal outcome, so this exits 0 unless the
/// parameters are invalid.
pub fn run(args: &SearchArgs, report: &mut RunReport) -> CliResult<u8> {
    if args.self_test {
        let margin = evaluator_self_test()?;
        report.search = Some(SearchSummary {
            evaluated: 1,
            best_margin: Some(margin),
            candidate_margin: Some(margin),
            message: format!("self-test margin {margin:+.6e} on the rank-one reference instance"),
            output: None,
        });
        return Ok(EXIT_PASS);
    }
    // The generator's `beta` is the block count; the search uses two blocks.
    let cfg = GeneratorConfig::new(Method::Separable, args.seed, 2, args.n)
        .with_budget(args.budget)
        .hermitian_only(args.hermitian_only);
    let outcome = search_counterexample_normal_blocks(&cfg)?;
    let mut output = None;
    if let (Some((h, margin)), Some(path)) = (&outcome.candidate, &args.out) {
        write_json(
            path,
            &Found {
                provenance: &cfg,
                margin: *margin,
                beta: h.beta(),
                n: h.n(),
                matrix: h.matrix().as_matrix(),
            },
        )?;
        output = Some(path.display().to_string());
    }
    let message = match (&outcome.candidate, outcome.best_margin) {
        (_, None) => "no candidate evaluated".to_string(),
        (Some((_, m)), _) => format!("candidate found with margin {m:+.6e}"),
        (None, Some(_)) => "no violation found".to_string(),
    };
    report.search = Some(SearchSummary {
        evaluated: outcome.evaluated,
        best_margin: outcome.best_margin,
        candidate_margin: outcome.candidate.as_ref().map(|(_, m)| *m),
        message,
        output,
    });
    Ok(EXIT_PASS)
}
