//! BiCGSTAB(l): l BiCG steps followed by an l-degree minimal-residual
//! polynomial step whose coefficients come from a modified Gram-Schmidt
//! least-squares solve over the residual block.
//!
//! The recurrence runs on the preconditioned operator v -> A M^-1 v, so the
//! tracked residual stays the unpreconditioned b - A x; the returned iterate
//! is mapped back through M^-1 at exit.

use std::time::Instant;

use num_complex::Complex64;

use crate::backend::Backend;
use crate::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::kernels::ReductionPlan;
use crate::vector::DenseVector;

use super::{
    build_precond, check_system, Ctx, SolveReport, SolverConfig, Termination, BREAKDOWN_FLOOR,
};

pub fn solve_bicgstab_l(
    a: &CsrMatrix,
    b: &DenseVector,
    cfg: &SolverConfig,
    backend: Backend,
) -> Result<(DenseVector, SolveReport)> {
    cfg.validate()?;
    check_system(a, b)?;
    let precond = build_precond(cfg.precond, a)?;
    let plan = ReductionPlan::new(cfg.block_size);
    let start = Instant::now();
    let l = cfg.l;

    backend.install(|| {
        let mut ctx = Ctx::new(backend, plan, a, &precond);
        let n = b.len();
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);

        let bnorm = ctx.norm(b);
        if bnorm == 0.0 {
            return Err(Error::ZeroRhs);
        }

        // Iterate in the preconditioned variable y (x = M^-1 y); with y0 = 0
        // the residual r = b - A M^-1 y starts at b.
        let mut y = DenseVector::zeros(n);
        let mut r: Vec<DenseVector> = (0..=l).map(|_| DenseVector::zeros(n)).collect();
        let mut u: Vec<DenseVector> = (0..=l).map(|_| DenseVector::zeros(n)).collect();
        ctx.assign(&mut r[0], b)?;
        let shadow = b.clone();
        let mut tmp = DenseVector::zeros(n);

        let mut rho0 = one;
        let mut alpha = zero;
        let mut omega = one;
        let mut rnorm = bnorm;

        let mut history = Vec::new();
        let mut termination = Termination::MaxIter;
        let mut iterations = 0;

        'outer: for cycle in 1..=cfg.max_iter {
            iterations = cycle;
            rho0 = -omega * rho0;

            // BiCG part.
            for j in 0..l {
                let rho1 = ctx.dot(&shadow, &r[j])?;
                if rho0.norm() <= BREAKDOWN_FLOOR * (bnorm * rnorm).max(1.0) {
                    // The scalar can also vanish because the BiCG part has
                    // already converged mid-cycle; check before reporting.
                    rnorm = ctx.norm(&r[0]);
                    if rnorm / bnorm <= cfg.tol {
                        history.push(rnorm / bnorm);
                        termination = Termination::Converged;
                    } else {
                        termination = Termination::Breakdown("rho vanished".into());
                    }
                    break 'outer;
                }
                let beta = alpha * (rho1 / rho0);
                rho0 = rho1;
                for i in 0..=j {
                    // u[i] = r[i] - beta u[i]
                    ctx.scale(-beta, &mut u[i]);
                    let (ri, ui) = index_pair(&mut r, &mut u, i);
                    ctx.axpy(one, ri, ui)?;
                }
                let (uj, uj1) = split_pair(&mut u, j);
                ctx.op(uj, &mut tmp, uj1)?;
                let gamma = ctx.dot(&shadow, &u[j + 1])?;
                if gamma.norm() <= BREAKDOWN_FLOOR {
                    rnorm = ctx.norm(&r[0]);
                    if rnorm / bnorm <= cfg.tol {
                        history.push(rnorm / bnorm);
                        termination = Termination::Converged;
                    } else {
                        termination = Termination::Breakdown("<shadow, A u> vanished".into());
                    }
                    break 'outer;
                }
                alpha = rho0 / gamma;
                for i in 0..=j {
                    let (ui1, ri) = split_ru(&mut u, &mut r, i);
                    ctx.axpy(-alpha, ui1, ri)?;
                }
                let (rj, rj1) = split_pair(&mut r, j);
                ctx.op(rj, &mut tmp, rj1)?;
                ctx.axpy(alpha, &u[0], &mut y)?;
            }

            // The BiCG part alone may have converged (always true for the
            // identity operator); checking here avoids a singular MR solve.
            rnorm = ctx.norm(&r[0]);
            if rnorm / bnorm <= cfg.tol {
                history.push(rnorm / bnorm);
                termination = Termination::Converged;
                break;
            }

            // MR part: minimize ||r[0] - sum_j gamma_j r[j]|| by modified
            // Gram-Schmidt over r[1..=l].
            let mut tau = vec![vec![zero; l + 1]; l + 1];
            let mut sigma = vec![zero; l + 1];
            let mut gamma_p = vec![zero; l + 1];
            for j in 1..=l {
                for i in 1..j {
                    let tij = ctx.dot(&r[i], &r[j])? / sigma[i];
                    tau[i][j] = tij;
                    let (ri, rj) = index_pair_same(&mut r, i, j);
                    ctx.axpy(-tij, ri, rj)?;
                }
                sigma[j] = ctx.dot(&r[j], &r[j])?;
                if sigma[j].norm() <= BREAKDOWN_FLOOR {
                    termination = Termination::Breakdown("singular MR system".into());
                    break 'outer;
                }
                gamma_p[j] = ctx.dot(&r[j], &r[0])? / sigma[j];
            }

            let mut gamma = vec![zero; l + 1];
            let mut gamma_pp = vec![zero; l + 1];
            gamma[l] = gamma_p[l];
            omega = gamma[l];
            for j in (1..l).rev() {
                let mut s = zero;
                for i in j + 1..=l {
                    s += tau[j][i] * gamma[i];
                }
                gamma[j] = gamma_p[j] - s;
            }
            for j in 1..l {
                let mut s = zero;
                for i in j + 1..l {
                    s += tau[j][i] * gamma[i + 1];
                }
                gamma_pp[j] = gamma[j + 1] + s;
            }

            // Update iterate, residual and search block.
            let g1 = gamma[1];
            ctx.axpy(g1, &r[0], &mut y)?;
            let gpl = gamma_p[l];
            let (r0, rl) = split_at_pair(&mut r, 0, l);
            ctx.axpy(-gpl, rl, r0)?;
            let gl = gamma[l];
            let (u0, ul) = split_at_pair(&mut u, 0, l);
            ctx.axpy(-gl, ul, u0)?;
            for j in 1..l {
                let gj = gamma[j];
                let (u0, uj) = split_at_pair(&mut u, 0, j);
                ctx.axpy(-gj, uj, u0)?;
                ctx.axpy(gamma_pp[j], &r[j], &mut y)?;
                let gpj = gamma_p[j];
                let (r0, rj) = split_at_pair(&mut r, 0, j);
                ctx.axpy(-gpj, rj, r0)?;
            }

            rnorm = ctx.norm(&r[0]);
            let relres = rnorm / bnorm;
            history.push(relres);
            if relres <= cfg.tol {
                termination = Termination::Converged;
                break;
            }
        }

        // Map back to the unpreconditioned variable.
        let mut x = DenseVector::zeros(n);
        ctx.apply_precond(&y, &mut x)?;

        let final_true_relres = ctx.true_relres(&x, b, bnorm)?;
        let report = SolveReport {
            converged: termination == Termination::Converged,
            iterations,
            matvecs: ctx.matvecs,
            residual_history: history,
            tau_history: Vec::new(),
            final_true_relres,
            elapsed: start.elapsed().as_secs_f64(),
            total_flops: ctx.flops,
            termination,
        };
        Ok((x, report))
    })
}

/// Borrows r[i] immutably and u[i] mutably from two distinct vectors.
fn index_pair<'a>(
    r: &'a mut [DenseVector],
    u: &'a mut [DenseVector],
    i: usize,
) -> (&'a DenseVector, &'a mut DenseVector) {
    (&r[i], &mut u[i])
}

/// Borrows u[i+1] immutably and r[i] mutably.
fn split_ru<'a>(
    u: &'a mut [DenseVector],
    r: &'a mut [DenseVector],
    i: usize,
) -> (&'a DenseVector, &'a mut DenseVector) {
    (&u[i + 1], &mut r[i])
}

/// Borrows v[j] immutably and v[j+1] mutably from the same vector.
fn split_pair(v: &mut [DenseVector], j: usize) -> (&DenseVector, &mut DenseVector) {
    let (head, tail) = v.split_at_mut(j + 1);
    (&head[j], &mut tail[0])
}

/// Borrows v[i] immutably and v[j] mutably, i < j.
fn index_pair_same(v: &mut [DenseVector], i: usize, j: usize) -> (&DenseVector, &mut DenseVector) {
    let (head, tail) = v.split_at_mut(j);
    (&head[i], &mut tail[0])
}

/// Borrows v[j] immutably and v[i] mutably, i < j.
fn split_at_pair(v: &mut [DenseVector], i: usize, j: usize) -> (&mut DenseVector, &DenseVector) {
    let (head, tail) = v.split_at_mut(j);
    (&mut head[i], &tail[0])
}
