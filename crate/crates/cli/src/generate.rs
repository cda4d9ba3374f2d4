use hermblock::certify::SeparableTerm;
use hermblock::generate::{
    gen_commuting_family, gen_hermitian_block_psd, gen_psd, gen_separable_real_factor, GeneratorConfig, Method,
};
use hermblock::{ComplexMatrix, HermitianMatrix};
use serde::Serialize;

use crate::args::{GenerateArgs, MethodArg};
use crate::files::{parse_json, read_json, write_json};
use crate::report::RunReport;
use crate::{CliResult, Failure, EXIT_PASS};

#[derive(Serialize)]
struct BlockInstance<'a> {
    provenance: &'a GeneratorConfig,
    beta: usize,
    n: usize,
    matrix: &'a ComplexMatrix,
}

#[derive(Serialize)]
struct CommutingInstance<'a> {
    provenance: &'a GeneratorConfig,
    family: &'a [HermitianMatrix],
    t: &'a HermitianMatrix,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_basis: Option<&'a ComplexMatrix>,
}

#[derive(Serialize)]
struct SeparableInstance<'a> {
    provenance: &'a GeneratorConfig,
    terms: &'a [SeparableTerm],
    normalized: bool,
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Separable => Method::Separable,
        MethodArg::Gram => Method::Gram,
        MethodArg::Projected => Method::Projected,
        MethodArg::Commuting => Method::Commuting,
        MethodArg::SeparableState => Method::SeparableState,
    }
}

pub fn config(args: &GenerateArgs, report: &mut RunReport) -> CliResult<GeneratorConfig> {
    if let Some(path) = &args.config {
        report.add_input(path)?;
        return parse_json(read_json(path)?, "generator config");
    }
    let m = args.method.ok_or_else(|| Failure::invalid("--method or --config is required"))?;
    Ok(GeneratorConfig::new(method(m), args.seed, args.beta, args.n)
        .with_k(args.k)
        .with_cap(args.cap)
        .normalized(args.normalized))
}

pub fn run(args: &GenerateArgs, report: &mut RunReport) -> CliResult<u8> {
    let cfg = config(args, report)?;
    let out = args.out.as_ref().ok_or_else(|| Failure::invalid("--out is required"))?;
    match cfg.method {
        Method::Separable | Method::Gram | Method::Projected => {
            let h = gen_hermitian_block_psd(&cfg)?;
            let inst = BlockInstance {
                provenance: &cfg,
                beta: h.beta(),
                n: h.n(),
                matrix: h.matrix().as_matrix(),
            };
            write_json(out, &inst)?;
        }
        Method::Commuting => {
            let family = gen_commuting_family(&cfg)?;
            let t = gen_psd(&cfg)?;
            let inst = CommutingInstance {
                provenance: &cfg,
                family: family.members(),
                t: &t,
                witness_basis: family.witness_basis(),
            };
            write_json(out, &inst)?;
        }
        Method::SeparableState => {
            let z = gen_separable_real_factor(&cfg)?;
            let inst = SeparableInstance {
                provenance: &cfg,
                terms: z.terms(),
                normalized: z.is_normalized(),
            };
            write_json(out, &inst)?;
        }
    }
    report.outputs.push(out.display().to_string());
    Ok(EXIT_PASS)
}
