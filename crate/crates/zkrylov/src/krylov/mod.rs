//! Preconditioned transpose-free Krylov solvers.
//!
//! All heavy arithmetic goes through the `kernels` and `sparse` modules, so
//! solver runs are deterministic across backends and thread counts. Flops are
//! accumulated per constituent kernel call under the reporting convention.

mod bicgstab;
mod bicgstab_l;
mod tfqmr;

pub use bicgstab::solve_bicgstab;
pub use bicgstab_l::solve_bicgstab_l;
pub use tfqmr::solve_tfqmr;

use num_complex::Complex64;

use crate::backend::Backend;
use crate::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::kernels::{self, FlopConvention, ReductionPlan};
use crate::precond::Preconditioner;
use crate::sparse;
use crate::vector::DenseVector;

/// Absolute floor for breakdown detection on rho/omega/sigma scalars.
pub(crate) const BREAKDOWN_FLOOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Bicgstab,
    BicgstabL,
    Tfqmr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrecondKind {
    Identity,
    Jacobi,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Relative residual threshold.
    pub tol: f64,
    pub max_iter: usize,
    pub method: Method,
    /// Polynomial degree for BiCGSTAB(l).
    pub l: usize,
    pub precond: PrecondKind,
    pub block_size: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 1000,
            method: Method::Bicgstab,
            l: 8,
            precond: PrecondKind::Jacobi,
            block_size: 256,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tol <= 0.0 {
            return Err(Error::InvalidConfig("tol must be positive".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::InvalidConfig("max_iter must be >= 1".into()));
        }
        if self.l < 1 {
            return Err(Error::InvalidConfig("l must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Termination {
    Converged,
    MaxIter,
    Breakdown(String),
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub converged: bool,
    /// Outer iterations: BiCGSTAB steps, BiCGSTAB(l) cycles, TFQMR half-step
    /// pairs.
    pub iterations: usize,
    pub matvecs: usize,
    /// Relative recursive residual after each outer iteration.
    pub residual_history: Vec<f64>,
    /// TFQMR only: the smoothing quasi-residual sequence.
    pub tau_history: Vec<f64>,
    /// ||b - A x|| / ||b|| recomputed explicitly at exit.
    pub final_true_relres: f64,
    pub elapsed: f64,
    pub total_flops: u64,
    pub termination: Termination,
}

/// Solver workspace: backend, reduction plan, preconditioner and flop
/// accounting rolled into one set of kernel wrappers.
pub(crate) struct Ctx<'a> {
    pub backend: Backend,
    pub plan: ReductionPlan,
    pub a: &'a CsrMatrix,
    pub precond: &'a Preconditioner,
    pub flops: u64,
    pub matvecs: usize,
}

impl<'a> Ctx<'a> {
    pub fn new(
        backend: Backend,
        plan: ReductionPlan,
        a: &'a CsrMatrix,
        precond: &'a Preconditioner,
    ) -> Self {
        Self {
            backend,
            plan,
            a,
            precond,
            flops: 0,
            matvecs: 0,
        }
    }

    pub fn assign(&mut self, dst: &mut DenseVector, src: &DenseVector) -> Result<()> {
        self.flops += FlopConvention::assign_flops(src.len());
        kernels::assign(self.backend, dst, src)
    }

    pub fn scale(&mut self, alpha: Complex64, x: &mut DenseVector) {
        self.flops += FlopConvention::scale_flops(x.len());
        kernels::scale(self.backend, alpha, x);
    }

    pub fn axpy(&mut self, alpha: Complex64, x: &DenseVector, y: &mut DenseVector) -> Result<()> {
        self.flops += FlopConvention::axpy_flops(x.len());
        kernels::axpy(self.backend, alpha, x, y)
    }

    pub fn dot(&mut self, x: &DenseVector, y: &DenseVector) -> Result<Complex64> {
        self.flops += FlopConvention::dot_flops(x.len());
        kernels::dot(self.backend, x, y, self.plan)
    }

    pub fn norm(&mut self, x: &DenseVector) -> f64 {
        self.flops += FlopConvention::norm_flops(x.len());
        kernels::norm2(self.backend, x, self.plan)
    }

    pub fn spmv(&mut self, x: &DenseVector, y: &mut DenseVector) -> Result<()> {
        self.flops += FlopConvention::spmv_flops(self.a.nnz());
        self.matvecs += 1;
        sparse::spmv(self.backend, self.a, x, y)
    }

    pub fn apply_precond(&mut self, r: &DenseVector, z: &mut DenseVector) -> Result<()> {
        self.flops += match self.precond {
            Preconditioner::Identity => FlopConvention::assign_flops(r.len()),
            Preconditioner::Jacobi { .. } => {
                FlopConvention::assign_flops(r.len()) + FlopConvention::ewproduct_flops(r.len())
            }
        };
        self.precond.apply(self.backend, r, z)
    }

    /// Preconditioned operator v -> A M^-1 v, with `tmp` as scratch.
    pub fn op(&mut self, v: &DenseVector, tmp: &mut DenseVector, out: &mut DenseVector) -> Result<()> {
        self.apply_precond(v, tmp)?;
        self.spmv(tmp, out)
    }

    /// Explicit true relative residual ||b - A x|| / bnorm.
    pub fn true_relres(&mut self, x: &DenseVector, b: &DenseVector, bnorm: f64) -> Result<f64> {
        let mut r = DenseVector::zeros(b.len());
        self.spmv(x, &mut r)?;
        self.scale(Complex64::new(-1.0, 0.0), &mut r);
        self.axpy(Complex64::new(1.0, 0.0), b, &mut r)?;
        Ok(self.norm(&r) / bnorm)
    }
}

pub(crate) fn check_system(a: &CsrMatrix, b: &DenseVector) -> Result<()> {
    if a.n_rows() != a.n_cols() {
        return Err(Error::NotSquare {
            n_rows: a.n_rows(),
            n_cols: a.n_cols(),
        });
    }
    if b.len() != a.n_rows() {
        return Err(Error::DimensionMismatch {
            n_rows: a.n_rows(),
            n_cols: a.n_cols(),
            vec_len: b.len(),
        });
    }
    Ok(())
}

pub(crate) fn build_precond(kind: PrecondKind, a: &CsrMatrix) -> Result<Preconditioner> {
    match kind {
        PrecondKind::Identity => Ok(Preconditioner::Identity),
        PrecondKind::Jacobi => Preconditioner::jacobi(a),
    }
}

/// Dispatches on `cfg.method`.
pub fn solve(
    a: &CsrMatrix,
    b: &DenseVector,
    cfg: &SolverConfig,
    backend: Backend,
) -> Result<(DenseVector, SolveReport)> {
    match cfg.method {
        Method::Bicgstab => solve_bicgstab(a, b, cfg, backend),
        Method::BicgstabL => solve_bicgstab_l(a, b, cfg, backend),
        Method::Tfqmr => solve_tfqmr(a, b, cfg, backend),
    }
}
