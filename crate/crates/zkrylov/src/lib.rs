//! Double-precision complex sparse linear algebra and transpose-free Krylov
//! solvers for Helmholtz-type acoustic systems.
//!
//! The crate provides:
//! - BLAS-1 complex kernels with a deterministic blockwise reduction
//!   ([`kernels`]),
//! - canonical CSR storage and row-parallel SpMV ([`csr`], [`sparse`]),
//! - Matrix Market coordinate I/O ([`mm`]),
//! - identity/Jacobi preconditioners ([`precond`]),
//! - BiCGSTAB, BiCGSTAB(l) and TFQMR solvers ([`krylov`]),
//! - a finite-difference Helmholtz system generator ([`helmholtz`]).
//!
//! All kernels run on either a sequential or a rayon-backed parallel
//! [`Backend`]; reductions follow a fixed blockwise schedule so results are
//! bit-identical across backends and thread counts. The `parallel` feature
//! (default) enables rayon; without it both backends run sequentially.

pub mod backend;
pub mod csr;
pub mod error;
pub mod helmholtz;
pub mod kernels;
pub mod krylov;
pub mod mm;
pub mod precond;
pub mod sparse;
pub mod vector;

pub use backend::Backend;
pub use csr::{CsrMatrix, MatrixStats};
pub use error::{Error, Result};
pub use kernels::{FlopConvention, KernelReport, ReductionPlan};
pub use krylov::{solve, Method, PrecondKind, SolveReport, SolverConfig, Termination};
pub use precond::Preconditioner;
pub use vector::DenseVector;

pub use num_complex::Complex64;
