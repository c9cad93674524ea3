//! BiCGSTAB with the preconditioner applied to the direction vectors, so the
//! recurrence tracks the unpreconditioned residual and the convergence test
//! is directly comparable across preconditioners.

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

pub fn solve_bicgstab(
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

    backend.install(|| {
        let mut ctx = Ctx::new(backend, plan, a, &precond);
        let n = b.len();
        let one = Complex64::new(1.0, 0.0);

        let bnorm = ctx.norm(b);
        if bnorm == 0.0 {
            return Err(Error::ZeroRhs);
        }

        let mut x = DenseVector::zeros(n);
        // x0 = 0, so r0 = b.
        let mut r = b.clone();
        let shadow = r.clone();
        let mut p = DenseVector::zeros(n);
        let mut v = DenseVector::zeros(n);
        let mut p_hat = DenseVector::zeros(n);
        let mut s_hat = DenseVector::zeros(n);
        let mut t = DenseVector::zeros(n);

        let mut rho_prev = one;
        let mut alpha = one;
        let mut omega = one;
        let mut rnorm = bnorm;

        let mut history = Vec::new();
        let mut termination = Termination::MaxIter;
        let mut iterations = 0;

        for iter in 1..=cfg.max_iter {
            iterations = iter;
            let rho = ctx.dot(&shadow, &r)?;
            // |<shadow, r>| can only vanish legitimately at convergence;
            // scale the floor by the participating norms.
            if rho.norm() <= BREAKDOWN_FLOOR * (bnorm * rnorm).max(1.0) {
                termination = Termination::Breakdown("rho vanished".into());
                break;
            }
            if iter == 1 {
                ctx.assign(&mut p, &r)?;
            } else {
                let beta = (rho / rho_prev) * (alpha / omega);
                // p = r + beta (p - omega v)
                ctx.axpy(-omega, &v, &mut p)?;
                ctx.scale(beta, &mut p);
                ctx.axpy(one, &r, &mut p)?;
            }
            ctx.apply_precond(&p, &mut p_hat)?;
            ctx.spmv(&p_hat, &mut v)?;
            let gamma = ctx.dot(&shadow, &v)?;
            if gamma.norm() <= BREAKDOWN_FLOOR {
                termination = Termination::Breakdown("<shadow, A p> vanished".into());
                break;
            }
            alpha = rho / gamma;
            // s = r - alpha v (in place: r becomes s)
            ctx.axpy(-alpha, &v, &mut r)?;
            ctx.axpy(alpha, &p_hat, &mut x)?;
            let snorm = ctx.norm(&r);
            if snorm / bnorm <= cfg.tol {
                history.push(snorm / bnorm);
                termination = Termination::Converged;
                break;
            }
            ctx.apply_precond(&r, &mut s_hat)?;
            ctx.spmv(&s_hat, &mut t)?;
            let tt = ctx.dot(&t, &t)?;
            if tt.norm() <= BREAKDOWN_FLOOR {
                termination = Termination::Breakdown("<t, t> vanished".into());
                break;
            }
            let ts = ctx.dot(&t, &r)?;
            omega = ts / tt;
            if omega.norm() <= BREAKDOWN_FLOOR {
                termination = Termination::Breakdown("omega vanished".into());
                break;
            }
            ctx.axpy(omega, &s_hat, &mut x)?;
            ctx.axpy(-omega, &t, &mut r)?;
            rnorm = ctx.norm(&r);
            let relres = rnorm / bnorm;
            history.push(relres);
            if relres <= cfg.tol {
                termination = Termination::Converged;
                break;
            }
            rho_prev = rho;
        }

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
