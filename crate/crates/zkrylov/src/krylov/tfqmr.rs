//! Transpose-free QMR with the smoothed quasi-residual bound
//! tau * sqrt(m+1) as the per-half-step convergence test, confirmed by an
//! explicit true-residual evaluation before declaring convergence.
//!
//! Like BiCGSTAB(l), the recurrence runs on v -> A M^-1 v and the iterate is
//! mapped back through M^-1 at exit.

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

pub fn solve_tfqmr(
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
        let zero = Complex64::new(0.0, 0.0);

        let bnorm = ctx.norm(b);
        if bnorm == 0.0 {
            return Err(Error::ZeroRhs);
        }

        // Preconditioned variable y; r0 = b for y0 = 0.
        let mut y = DenseVector::zeros(n);
        let shadow = b.clone();
        let mut w = b.clone();
        let mut dir_odd = b.clone(); // y_{2k-1} in the half-step indexing
        let mut dir_even = DenseVector::zeros(n);
        let mut u_odd = DenseVector::zeros(n); // A' y_odd
        let mut u_even = DenseVector::zeros(n);
        let mut v = DenseVector::zeros(n);
        let mut d = DenseVector::zeros(n);
        let mut tmp = DenseVector::zeros(n);

        ctx.op(&dir_odd, &mut tmp, &mut u_odd)?;
        ctx.assign(&mut v, &u_odd)?;

        let mut tau = bnorm;
        let mut theta = 0.0;
        let mut eta = zero;
        let mut rho = ctx.dot(&shadow, &w)?;
        let mut alpha = zero;

        let mut history = Vec::new();
        let mut tau_history = vec![tau];
        let mut termination = Termination::MaxIter;
        let mut iterations = 0;

        'outer: for pair in 1..=cfg.max_iter {
            iterations = pair;
            for half in 0..2 {
                let m = 2 * (pair - 1) + half; // half-step counter, 0-based
                if half == 0 {
                    let sigma = ctx.dot(&shadow, &v)?;
                    if sigma.norm() <= BREAKDOWN_FLOOR {
                        termination = Termination::Breakdown("sigma vanished".into());
                        break 'outer;
                    }
                    alpha = rho / sigma;
                    // y_even = y_odd - alpha v
                    ctx.assign(&mut dir_even, &dir_odd)?;
                    ctx.axpy(-alpha, &v, &mut dir_even)?;
                    ctx.op(&dir_even, &mut tmp, &mut u_even)?;
                }
                let (dir, u) = if half == 0 {
                    (&dir_odd, &u_odd)
                } else {
                    (&dir_even, &u_even)
                };
                // w = w - alpha A' y_m
                ctx.axpy(-alpha, u, &mut w)?;
                // d = y_m + (theta^2 eta / alpha) d
                let coeff = if alpha.norm() <= BREAKDOWN_FLOOR {
                    zero
                } else {
                    Complex64::new(theta * theta, 0.0) * eta / alpha
                };
                ctx.scale(coeff, &mut d);
                ctx.axpy(one, dir, &mut d)?;
                theta = ctx.norm(&w) / tau;
                let c = 1.0 / (1.0 + theta * theta).sqrt();
                tau *= theta * c;
                tau_history.push(tau);
                eta = Complex64::new(c * c, 0.0) * alpha;
                ctx.axpy(eta, &d, &mut y)?;

                // Quasi-residual bound, then explicit confirmation.
                let bound = tau * ((m + 2) as f64).sqrt() / bnorm;
                if bound <= cfg.tol {
                    ctx.apply_precond(&y, &mut tmp)?;
                    let true_rr = ctx.true_relres(&tmp, b, bnorm)?;
                    if true_rr <= cfg.tol {
                        history.push(bound);
                        termination = Termination::Converged;
                        break 'outer;
                    }
                }
                if half == 1 {
                    history.push(bound);
                }
            }
            // Prepare the next pair.
            let rho_new = ctx.dot(&shadow, &w)?;
            if rho_new.norm() <= BREAKDOWN_FLOOR * (bnorm * tau).max(1.0) {
                termination = Termination::Breakdown("rho vanished".into());
                break;
            }
            let beta = rho_new / rho;
            rho = rho_new;
            // y_odd = w + beta y_even
            ctx.assign(&mut dir_odd, &w)?;
            ctx.axpy(beta, &dir_even, &mut dir_odd)?;
            ctx.op(&dir_odd, &mut tmp, &mut u_odd)?;
            // v = u_odd + beta (u_even + beta v)
            ctx.scale(beta, &mut v);
            ctx.axpy(one, &u_even, &mut v)?;
            ctx.scale(beta, &mut v);
            ctx.axpy(one, &u_odd, &mut v)?;
        }

        let mut x = DenseVector::zeros(n);
        ctx.apply_precond(&y, &mut x)?;
        let final_true_relres = ctx.true_relres(&x, b, bnorm)?;
        let report = SolveReport {
            converged: termination == Termination::Converged,
            iterations,
            matvecs: ctx.matvecs,
            residual_history: history,
            tau_history,
            final_true_relres,
            elapsed: start.elapsed().as_secs_f64(),
            total_flops: ctx.flops,
            termination,
        };
        Ok((x, report))
    })
}
