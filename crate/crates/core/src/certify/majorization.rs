use super::report::{digest_matrices, CertificateReport, Hypothesis, ReportBuilder};
use super::{averaged_rhs, gate, push_prefix_items, push_step_items, validate_tol, CheckOptions};
use crate::block::{assemble, dyadic_ceiling, partial_trace, BlockMatrix};
use crate::error::{Error, Result};
use crate::linalg::{schatten_norm, trace_function, ConcaveFunctionSpec, HermitianMatrix, Spectrum};

fn block_digest(h: &BlockMatrix) -> String {
    digest_matrices(&[h.matrix().as_matrix()])
}

fn hermitian_gate(h: &BlockMatrix, opts: &CheckOptions) -> Result<Hypothesis> {
    gate(h.hermitian_blocks(), opts, || {
        format!("blocks are not Hermitian (largest defect {:e})", h.hermitian_block_defect())
    })
}

/// Weak majorization `λ(H) ≺_w λ(Δ)`: one item per prefix `j = 1..=βn`.
pub fn check_hiroshima(h: &BlockMatrix, opts: &CheckOptions) -> Result<CertificateReport> {
    validate_tol(opts)?;
    let hyp = hermitian_gate(h, opts)?;
    let delta = partial_trace(h).spectrum()?;
    let mut b = ReportBuilder::new("hiroshima", opts.tol, h.operator_norm(), block_digest(h)).hypothesis(hyp);
    push_prefix_items(&mut b, "", h.spectrum(), &delta, h.dim());
    Ok(b.finish())
}

/// `λ_{1+βk}(H) ≤ λ_{1+k}(Δ)` for `k = 0..n`, with `β` the dyadic ceiling of
/// the block count.
pub fn check_eigen_step(h: &BlockMatrix, opts: &CheckOptions) -> Result<CertificateReport> {
    validate_tol(opts)?;
    let hyp = hermitian_gate(h, opts)?;
    let delta = partial_trace(h).spectrum()?;
    let beta = dyadic_ceiling(h.beta());
    let mut b = ReportBuilder::new("eigen_step", opts.tol, h.operator_norm(), block_digest(h)).hypothesis(hyp);
    push_step_items(&mut b, "", h.spectrum(), &delta, beta, h.n());
    Ok(b.finish())
}

/// `λ_{1+βk}(H) ≤ (1/β) Σ_i λ_{1+k_i}(Δ)` for a split `k_1 + … + k_β = βk`,
/// `β` the dyadic ceiling of the block count.
pub fn check_eigen_averaged(
    h: &BlockMatrix,
    k: usize,
    splits: &[usize],
    opts: &CheckOptions,
) -> Result<CertificateReport> {
    validate_tol(opts)?;
    let beta = dyadic_ceiling(h.beta());
    if splits.len() != beta {
        return Err(Error::InvalidParameter(format!(
            "expected {beta} split entries, got {}",
            splits.len()
        )));
    }
    let total: usize = splits.iter().sum();
    if total != beta * k {
        return Err(Error::InvalidParameter(format!(
            "splits sum to {total}, expected beta·k = {}",
            beta * k
        )));
    }
    let hyp = hermitian_gate(h, opts)?;
    let delta = partial_trace(h).spectrum()?;
    let mut b = ReportBuilder::new("eigen_averaged", opts.tol, h.operator_norm(), block_digest(h)).hypothesis(hyp);
    b.push(
        format!("k={k},splits={splits:?}"),
        h.spectrum().lambda(1 + beta * k),
        averaged_rhs(&delta, splits),
    );
    Ok(b.finish())
}

/// `Tr f(Δ) ≤ Tr f(H) ≤ Σ_s Tr f(A_{s,s})` for a concave catalog function.
///
/// The upper item holds for every PSD block matrix. Without Hermitian blocks
/// and without `force`, only that item is reported and the report is
/// labelled [`Hypothesis::ViolatedPartial`].
pub fn check_trace_concave(h: &BlockMatrix, f: &ConcaveFunctionSpec, opts: &CheckOptions) -> Result<CertificateReport> {
    validate_tol(opts)?;
    f.validate()?;
    let hyp = match hermitian_gate(h, opts) {
        Ok(hyp) => hyp,
        Err(Error::HypothesisViolated(_)) => Hypothesis::ViolatedPartial,
        Err(e) => return Err(e),
    };
    let tr_h: f64 = h.spectrum().values().iter().map(|&l| f.eval(l.max(0.0))).sum();
    let tr_blocks = (0..h.beta())
        .map(|s| trace_function(&h.diagonal_block(s), f))
        .sum::<Result<f64>>()?;
    let name = format!("trace_concave[{f}]");
    let mut b = ReportBuilder::new(&name, opts.tol, h.operator_norm(), block_digest(h)).hypothesis(hyp);
    if hyp != Hypothesis::ViolatedPartial {
        let tr_delta = trace_function(&partial_trace(h), f)?;
        b.push("lower", tr_delta, tr_h);
    }
    b.push("upper", tr_h, tr_blocks);
    Ok(b.finish())
}

fn log_det_1p(s: &Spectrum) -> f64 {
    s.values().iter().map(|&l| l.ln_1p()).sum()
}

fn determinant_report(
    digest: String,
    hyp: Hypothesis,
    tol: f64,
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    h: &Spectrum,
) -> Result<CertificateReport> {
    let sum = a.try_add(b)?.spectrum()?;
    let mut r = ReportBuilder::new("determinant", tol, h.max().abs(), digest).hypothesis(hyp);
    r.push("lower", log_det_1p(&sum), log_det_1p(h));
    r.push("upper", log_det_1p(h), log_det_1p(&a.spectrum()?) + log_det_1p(&b.spectrum()?));
    Ok(r.finish())
}

/// `log det(I+A+B) ≤ log det(I+H) ≤ log det(I+A) + log det(I+B)` for
/// `H = [[A, X], [X, B]]`, with log-determinants taken as `Σ log(1+λ_i)`.
pub fn check_determinant(
    a: &HermitianMatrix,
    b: &HermitianMatrix,
    x: &HermitianMatrix,
    opts: &CheckOptions,
) -> Result<CertificateReport> {
    validate_tol(opts)?;
    if a.dim() != b.dim() || a.dim() != x.dim() {
        return Err(Error::DimensionMismatch(format!(
            "blocks of sides {}, {}, {} must agree",
            a.dim(),
            b.dim(),
            x.dim()
        )));
    }
    a.ensure_psd()?;
    b.ensure_psd()?;
    let h = HermitianMatrix::new(assemble(&[
        vec![a.as_matrix().clone(), x.as_matrix().clone()],
        vec![x.as_matrix().clone(), b.as_matrix().clone()],
    ])?)?;
    let spec = h.spectrum()?;
    let hyp = gate(spec.min() >= -h.psd_tolerance(), opts, || {
        format!("[[A, X], [X, B]] is not PSD (smallest eigenvalue {:e})", spec.min())
    })?;
    let digest = digest_matrices(&[a.as_matrix(), b.as_matrix(), x.as_matrix()]);
    determinant_report(digest, hyp, opts.tol, a, b, &spec)
}

/// [`check_determinant`] on a two-block matrix, reading `A`, `B`, `X` off it.
pub fn check_determinant_blocks(h: &BlockMatrix, opts: &CheckOptions) -> Result<CertificateReport> {
    validate_tol(opts)?;
    if h.beta() != 2 {
        return Err(Error::InvalidParameter(format!(
            "determinant check needs 2 blocks, got {}",
            h.beta()
        )));
    }
    let hyp = hermitian_gate(h, opts)?;
    let (a, b) = (h.diagonal_block(0), h.diagonal_block(1));
    determinant_report(block_digest(h), hyp, opts.tol, &a, &b, h.spectrum())
}

/// `‖H‖_p ≤ ‖A‖_p + ‖B‖_p` for a two-block PSD matrix; no Hermitian-block
/// hypothesis.
pub fn check_block_norm_bound(h: &BlockMatrix, p: f64, opts: &CheckOptions) -> Result<CertificateReport> {
    validate_tol(opts)?;
    if h.beta() != 2 {
        return Err(Error::InvalidParameter(format!(
            "block norm bound needs 2 blocks, got {}",
            h.beta()
        )));
    }
    let lhs = schatten_norm(h.matrix().as_matrix(), p)?;
    let rhs = schatten_norm(&h.block(0, 0), p)? + schatten_norm(&h.block(1, 1), p)?;
    let mut b = ReportBuilder::new("block_norm_bound", opts.tol, h.operator_norm(), block_digest(h));
    b.push(format!("p={p}"), lhs, rhs);
    Ok(b.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::block::partition;
    use crate::linalg::ComplexMatrix;

    fn rank_one() -> BlockMatrix {
        let x = ComplexMatrix::from_real_rows(&[&[1.0], &[0.0], &[0.0], &[1.0]]);
        partition(&HermitianMatrix::new(x.matmul_adjoint(&x).unwrap()).unwrap(), 2, 2).unwrap()
    }

    fn ones2() -> BlockMatrix {
        partition(&HermitianMatrix::from_real_rows(&[&[1.0, 1.0], &[1.0, 1.0]]).unwrap(), 2, 1).unwrap()
    }

    #[test]
    fn hiroshima_examples() {
        let r = check_hiroshima(&ones2(), &CheckOptions::default()).unwrap();
        assert!(r.passed);
        assert_eq!(r.items.len(), 2);
        assert!(r.items.iter().all(|i| i.margin.abs() < 1e-14));

        let r = check_hiroshima(&partition(&HermitianMatrix::identity(4), 2, 2).unwrap(), &CheckOptions::default()).unwrap();
        let lhs: Vec<f64> = r.items.iter().map(|i| i.lhs).collect();
        let rhs: Vec<f64> = r.items.iter().map(|i| i.rhs).collect();
        assert_eq!(lhs, vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(rhs, vec![2.0, 4.0, 4.0, 4.0]);
        assert!(r.passed);
    }

    #[test]
    fn rank_one_control() {
        let h = rank_one();
        assert!(matches!(
            check_hiroshima(&h, &CheckOptions::default()),
            Err(Error::HypothesisViolated(_))
        ));
        let r = check_hiroshima(&h, &CheckOptions::forced()).unwrap();
        assert!(!r.passed);
        assert_eq!(r.context.hypothesis, Hypothesis::ViolatedForced);
        let first = &r.items[0];
        assert_eq!(first.label, "j=1");
        assert!((first.margin + 1.0).abs() < 1e-12);
    }

    #[test]
    fn eigen_step_examples() {
        let r = check_eigen_step(&ones2(), &CheckOptions::default()).unwrap();
        assert_eq!(r.items.len(), 1);
        assert!((r.items[0].lhs - 2.0).abs() < 1e-14 && (r.items[0].rhs - 2.0).abs() < 1e-14);

        let mut m = ComplexMatrix::zeros(4, 4);
        m.set_submatrix(0, 0, &ComplexMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 2.0]]));
        let r = check_eigen_step(&partition(&HermitianMatrix::new(m).unwrap(), 2, 2).unwrap(), &CheckOptions::default()).unwrap();
        assert!((r.items[0].margin).abs() < 1e-13);
    }

    #[test]
    fn averaged_splits() {
        let h = partition(&HermitianMatrix::diag(&[5.0, 1.0, 3.0, 2.0]), 2, 2).unwrap();
        let opts = CheckOptions::default();
        let a = check_eigen_averaged(&h, 1, &[2, 0], &opts).unwrap();
        let b = check_eigen_averaged(&h, 1, &[0, 2], &opts).unwrap();
        assert_eq!(a.items[0].rhs, b.items[0].rhs);
        let eq = check_eigen_averaged(&h, 1, &[1, 1], &opts).unwrap();
        let step = check_eigen_step(&h, &opts).unwrap();
        assert_eq!(eq.items[0].lhs, step.items[1].lhs);
        assert_eq!(eq.items[0].rhs, step.items[1].rhs);
        assert!(check_eigen_averaged(&h, 1, &[1, 0], &opts).is_err());
        assert!(check_eigen_averaged(&h, 1, &[2], &opts).is_err());
    }

    #[test]
    fn trace_concave_examples() {
        let h = ones2();
        let r = check_trace_concave(&h, &ConcaveFunctionSpec::Log1p, &CheckOptions::default()).unwrap();
        let lower = r.item("lower").unwrap();
        let upper = r.item("upper").unwrap();
        assert!((lower.lhs - 3f64.ln()).abs() < 1e-14);
        assert!((lower.rhs - 3f64.ln()).abs() < 1e-14);
        assert!((upper.rhs - 2.0 * 2f64.ln()).abs() < 1e-14);
        assert!(r.passed);

        let id = ConcaveFunctionSpec::Affine { a: 0.0, b: 1.0 };
        let r = check_trace_concave(&h, &id, &CheckOptions::default()).unwrap();
        assert!(r.items.iter().all(|i| i.margin.abs() < 1e-13));

        let r = check_trace_concave(&rank_one(), &ConcaveFunctionSpec::Sqrt, &CheckOptions::default()).unwrap();
        assert_eq!(r.context.hypothesis, Hypothesis::ViolatedPartial);
        assert_eq!(r.items.len(), 1);
        assert!(r.passed);
    }

    #[test]
    fn determinant_examples() {
        let one = HermitianMatrix::identity(1);
        let r = check_determinant(&one, &one, &one, &CheckOptions::default()).unwrap();
        assert!(r.item("lower").unwrap().margin.abs() < 1e-12);
        assert!((r.item("upper").unwrap().margin - (4.0f64 / 3.0).ln()).abs() < 1e-12);

        let a = HermitianMatrix::from_real_rows(&[&[2.0, 1.0], &[1.0, 1.0]]).unwrap();
        let b = HermitianMatrix::diag(&[1.0, 3.0]);
        let r = check_determinant(&a, &b, &HermitianMatrix::zeros(2), &CheckOptions::default()).unwrap();
        assert!(r.item("upper").unwrap().margin.abs() < 1e-12);
        assert!(r.passed);

        let big = HermitianMatrix::identity(1).scale(5.0);
        assert!(matches!(
            check_determinant(&one, &one, &big, &CheckOptions::default()),
            Err(Error::HypothesisViolated(_))
        ));
    }

    #[test]
    fn norm_bound_examples() {
        let r = check_block_norm_bound(&rank_one(), f64::INFINITY, &CheckOptions::default()).unwrap();
        assert!((r.items[0].lhs - 2.0).abs() < 1e-12 && (r.items[0].rhs - 2.0).abs() < 1e-12);
        let h = partition(&HermitianMatrix::diag(&[1.0, 2.0, 3.0, 4.0]), 2, 2).unwrap();
        let r = check_block_norm_bound(&h, 1.0, &CheckOptions::default()).unwrap();
        assert!(r.items[0].margin.abs() < 1e-12);
        assert!(check_block_norm_bound(&partition(&HermitianMatrix::identity(3), 3, 1).unwrap(), 1.0, &CheckOptions::default()).is_err());
    }
}
