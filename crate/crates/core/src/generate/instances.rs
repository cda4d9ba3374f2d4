use super::{
    normal, random_psd, random_rank, random_unitary, GeneratorConfig, Method, STREAM_COMMUTING,
    STREAM_GRAM, STREAM_PROJECTED, STREAM_PSD, STREAM_SEPARABLE, STREAM_STATE,
};
use crate::block::{assemble, partition, BlockMatrix};
use crate::certify::{CommutingFamily, SeparableState, SeparableTerm};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, HermitianMatrix};

/// Residual target of the projection method, for both constraints.
const PROJECTION_TOL: f64 = 1e-10;

/// PSD matrix with Hermitian blocks, by [`Method::Separable`],
/// [`Method::Gram`] or [`Method::Projected`].
pub fn gen_hermitian_block_psd(cfg: &GeneratorConfig) -> Result<BlockMatrix> {
    cfg.require_dims()?;
    let m = match cfg.method {
        Method::Separable => separable(cfg)?,
        Method::Gram => gram(cfg)?,
        Method::Projected => projected(cfg)?,
        other => {
            return Err(Error::InvalidParameter(format!(
                "method '{other}' does not produce a block matrix"
            )))
        }
    };
    partition(&m, cfg.beta, cfg.n)
}

fn separable(cfg: &GeneratorConfig) -> Result<HermitianMatrix> {
    if cfg.k == 0 {
        return Err(Error::InvalidParameter("separable method needs k ≥ 1 terms".into()));
    }
    let mut rng = cfg.rng(STREAM_SEPARABLE);
    let side = cfg.beta * cfg.n;
    let mut acc = ComplexMatrix::zeros(side, side);
    for _ in 0..cfg.k {
        let ra = random_rank(&mut rng, cfg.beta);
        let a = random_psd(&mut rng, cfg.beta, ra, true);
        let rb = random_rank(&mut rng, cfg.n);
        let b = random_psd(&mut rng, cfg.n, rb, false);
        acc = acc.try_add(&a.as_matrix().kron(b.as_matrix()))?;
    }
    HermitianMatrix::new(acc)
}

fn gram(cfg: &GeneratorConfig) -> Result<HermitianMatrix> {
    let mut rng = cfg.rng(STREAM_GRAM);
    let (beta, n) = (cfg.beta, cfg.n);
    let u = random_unitary(&mut rng, n);
    let d: Vec<Vec<f64>> = (0..beta).map(|_| (0..n).map(|_| normal(&mut rng)).collect()).collect();
    let rank = random_rank(&mut rng, n);
    let t = random_psd(&mut rng, n, rank, false);
    let t = t.as_matrix();
    let blocks = (0..beta)
        .map(|s| {
            (0..beta)
                .map(|r| {
                    // S_s S_r shares the eigenbasis, so form it from the product spectrum
                    let prod: Vec<f64> = d[s].iter().zip(&d[r]).map(|(x, y)| x * y).collect();
                    let sr = u.matmul(&ComplexMatrix::diag_real(&prod))?.matmul_adjoint(&u)?;
                    t.matmul(&sr)?.matmul(t)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    HermitianMatrix::new(project_block_hermitian(&assemble(&blocks)?, beta, n)?)
}

/// Orthogonal projection onto Hermitian matrices with Hermitian `n × n`
/// blocks: blocks `(s, t)` and `(t, s)` both become the Hermitian part of
/// their average. The result satisfies both constraints exactly.
pub fn project_block_hermitian(m: &ComplexMatrix, beta: usize, n: usize) -> Result<ComplexMatrix> {
    if m.shape() != (beta * n, beta * n) {
        return Err(Error::DimensionMismatch(format!(
            "expected side {}, got {}x{}",
            beta * n,
            m.rows(),
            m.cols()
        )));
    }
    let mut out = ComplexMatrix::zeros(beta * n, beta * n);
    for s in 0..beta {
        for t in s..beta {
            let a = m.submatrix(s * n, t * n, n, n);
            let b = m.submatrix(t * n, s * n, n, n);
            let avg = (&a + &b).scale(0.5).hermitian_part();
            out.set_submatrix(s * n, t * n, &avg);
            out.set_submatrix(t * n, s * n, &avg);
        }
    }
    Ok(out)
}

/// PSD part of a Hermitian matrix and the Frobenius norm of its negative part.
fn psd_part(m: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    let (s, u) = HermitianMatrix::new(m.clone())?.eig()?;
    let neg = s.values().iter().filter(|&&l| l < 0.0).map(|l| l * l).sum::<f64>().sqrt();
    let clamped: Vec<f64> = s.values().iter().map(|&l| l.max(0.0)).collect();
    let p = u.matmul(&ComplexMatrix::diag_real(&clamped))?.matmul_adjoint(&u)?;
    Ok((p, neg))
}

fn projected(cfg: &GeneratorConfig) -> Result<HermitianMatrix> {
    let mut rng = cfg.rng(STREAM_PROJECTED);
    let (beta, n) = (cfg.beta, cfg.n);
    let side = beta * n;
    let x0 = random_psd(&mut rng, side, (side / 2).max(1), false).into_matrix();
    dykstra(x0, beta, n, cfg.cap)
}

/// Dykstra's algorithm between the PSD cone and the Hermitian-block subspace.
/// Returns the subspace projection of the final iterate once it is within
/// [`PROJECTION_TOL`] of both sets, shifted by its negative part.
fn dykstra(x0: ComplexMatrix, beta: usize, n: usize, cap: usize) -> Result<HermitianMatrix> {
    let side = beta * n;
    let mut x = x0;
    let mut p = ComplexMatrix::zeros(side, side);
    let mut q = ComplexMatrix::zeros(side, side);
    let (mut sub_res, mut cone_res) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..cap {
        let xp = &x + &p;
        let y = project_block_hermitian(&xp, beta, n)?;
        p = &xp - &y;
        let yq = &y + &q;
        let (xn, _) = psd_part(&yq)?;
        q = &yq - &xn;
        x = xn;

        let pl = project_block_hermitian(&x, beta, n)?;
        sub_res = x.dist_frobenius(&pl)?;
        if sub_res <= PROJECTION_TOL {
            let (_, neg) = psd_part(&pl)?;
            cone_res = neg;
            if cone_res <= PROJECTION_TOL {
                // the identity lies in the subspace, so a shift by the most
                // negative eigenvalue keeps the blocks exact and restores PSD
                let pl = HermitianMatrix::new(pl)?;
                let lmin = pl.spectrum()?.min();
                if lmin >= 0.0 {
                    return Ok(pl);
                }
                return pl.try_add(&HermitianMatrix::identity(side).scale(-lmin));
            }
        }
    }
    if cone_res.is_infinite() {
        let pl = project_block_hermitian(&x, beta, n)?;
        sub_res = x.dist_frobenius(&pl)?;
        cone_res = psd_part(&pl)?.1;
    }
    Err(Error::ProjectionNoConvergence {
        iterations: cap,
        subspace_residual: sub_res,
        cone_residual: cone_res,
    })
}

/// Random full-rank PSD matrix of side `n`.
pub fn gen_psd(cfg: &GeneratorConfig) -> Result<HermitianMatrix> {
    cfg.require_dims()?;
    let mut rng = cfg.rng(STREAM_PSD);
    Ok(random_psd(&mut rng, cfg.n, cfg.n, false))
}

/// `beta` Hermitian matrices `S_i = U D_i U*` of side `n` with a common random
/// unitary `U` and Gaussian real diagonals `D_i`.
pub fn gen_commuting_family(cfg: &GeneratorConfig) -> Result<CommutingFamily> {
    cfg.require_dims()?;
    let mut rng = cfg.rng(STREAM_COMMUTING);
    let u = random_unitary(&mut rng, cfg.n);
    let members = (0..cfg.beta)
        .map(|_| {
            let d: Vec<f64> = (0..cfg.n).map(|_| normal(&mut rng)).collect();
            HermitianMatrix::new(u.matmul(&ComplexMatrix::diag_real(&d))?.matmul_adjoint(&u)?)
        })
        .collect::<Result<Vec<_>>>()?;
    CommutingFamily::new(members, Some(u))
}

/// `k` terms `A_j ⊗ B_j` with real symmetric PSD `A_j` of side `beta` and
/// Hermitian PSD `B_j` of side `n`; unit trace when `normalized` is set.
pub fn gen_separable_real_factor(cfg: &GeneratorConfig) -> Result<SeparableState> {
    cfg.require_dims()?;
    if cfg.k == 0 {
        return Err(Error::InvalidParameter("separable state needs k ≥ 1 terms".into()));
    }
    let mut rng = cfg.rng(STREAM_STATE);
    let terms = (0..cfg.k)
        .map(|_| {
            let ra = random_rank(&mut rng, cfg.beta);
            let a = random_psd(&mut rng, cfg.beta, ra, true).into_matrix();
            let rb = random_rank(&mut rng, cfg.n);
            let b = random_psd(&mut rng, cfg.n, rb, false).into_matrix();
            SeparableTerm { a, b }
        })
        .collect();
    let state = SeparableState::new(terms, false)?;
    if cfg.normalized {
        state.normalize()
    } else {
        Ok(state)
    }
}
