//! Complex BLAS-1 kernels: assign, scale, axpy, element-wise product, dot
//! product and Euclidean norm.
//!
//! Reductions run in two phases: each block sums its contiguous element range
//! in ascending index order, then the block partials are added in ascending
//! block order. The schedule depends only on the [`ReductionPlan`], never on
//! the thread count, so results are bit-identical across backends.
//!
//! Flop counts follow a fixed per-element reporting convention
//! ([`FlopConvention`]); they are a contract for Gflops bookkeeping, not an
//! exact operation count.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::backend::Backend;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

/// Blockwise reduction schedule: `block_size` elements per partial sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReductionPlan {
    pub block_size: usize,
}

impl ReductionPlan {
    pub fn new(block_size: usize) -> Self {
        assert!(block_size >= 1, "block_size must be at least 1");
        Self { block_size }
    }

    pub fn n_blocks(&self, h: usize) -> usize {
        h.div_ceil(self.block_size)
    }
}

impl Default for ReductionPlan {
    fn default() -> Self {
        Self { block_size: 256 }
    }
}

/// Per-element flop weights used for Gflops reporting.
pub struct FlopConvention;

impl FlopConvention {
    pub const ASSIGN: u64 = 1;
    pub const SCALE: u64 = 6;
    pub const AXPY: u64 = 8;
    pub const EWPRODUCT: u64 = 6;
    pub const DOT: u64 = 8;
    pub const NORM: u64 = 5;
    pub const SPMV_PER_NNZ: u64 = 8;

    pub fn assign_flops(h: usize) -> u64 {
        Self::ASSIGN * h as u64
    }
    pub fn scale_flops(h: usize) -> u64 {
        Self::SCALE * h as u64
    }
    pub fn axpy_flops(h: usize) -> u64 {
        Self::AXPY * h as u64
    }
    pub fn ewproduct_flops(h: usize) -> u64 {
        Self::EWPRODUCT * h as u64
    }
    pub fn dot_flops(h: usize) -> u64 {
        Self::DOT * h as u64
    }
    pub fn norm_flops(h: usize) -> u64 {
        Self::NORM * h as u64
    }
    pub fn spmv_flops(nnz: usize) -> u64 {
        Self::SPMV_PER_NNZ * nnz as u64
    }
}

/// One timed kernel measurement.
#[derive(Debug, Clone)]
pub struct KernelReport {
    pub op_name: String,
    pub h: usize,
    pub elapsed: f64,
    pub flops: u64,
    pub gflops: f64,
}

impl KernelReport {
    pub fn new(op_name: &str, h: usize, elapsed: f64, flops: u64) -> Self {
        Self {
            op_name: op_name.to_string(),
            h,
            elapsed,
            flops,
            gflops: flops as f64 / elapsed / 1e9,
        }
    }
}

fn check_lengths(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::LengthMismatch { left: a, right: b });
    }
    Ok(())
}

/// dst <- src.
pub fn assign(backend: Backend, dst: &mut DenseVector, src: &DenseVector) -> Result<()> {
    check_lengths(dst.len(), src.len())?;
    let s = src.as_slice();
    match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => {
            dst.as_mut_slice()
                .par_iter_mut()
                .zip(s.par_iter())
                .for_each(|(d, x)| *d = *x);
        }
        _ => dst.as_mut_slice().copy_from_slice(s),
    }
    Ok(())
}

/// x[i] <- alpha * x[i].
pub fn scale(backend: Backend, alpha: Complex64, x: &mut DenseVector) {
    match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => {
            x.as_mut_slice().par_iter_mut().for_each(|v| *v *= alpha);
        }
        _ => {
            for v in x.as_mut_slice() {
                *v *= alpha;
            }
        }
    }
}

/// y[i] <- alpha * x[i] + y[i].
pub fn axpy(backend: Backend, alpha: Complex64, x: &DenseVector, y: &mut DenseVector) -> Result<()> {
    check_lengths(x.len(), y.len())?;
    let xs = x.as_slice();
    match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => {
            y.as_mut_slice()
                .par_iter_mut()
                .zip(xs.par_iter())
                .for_each(|(yv, xv)| *yv += alpha * xv);
        }
        _ => {
            for (yv, xv) in y.as_mut_slice().iter_mut().zip(xs) {
                *yv += alpha * xv;
            }
        }
    }
    Ok(())
}

/// y[i] <- x[i] * y[i].
pub fn ewproduct(backend: Backend, x: &DenseVector, y: &mut DenseVector) -> Result<()> {
    check_lengths(x.len(), y.len())?;
    let xs = x.as_slice();
    match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => {
            y.as_mut_slice()
                .par_iter_mut()
                .zip(xs.par_iter())
                .for_each(|(yv, xv)| *yv *= xv);
        }
        _ => {
            for (yv, xv) in y.as_mut_slice().iter_mut().zip(xs) {
                *yv *= xv;
            }
        }
    }
    Ok(())
}

fn dot_block(xs: &[Complex64], ys: &[Complex64]) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (xv, yv) in xs.iter().zip(ys) {
        acc += xv.conj() * yv;
    }
    acc
}

fn norm_block(xs: &[Complex64]) -> f64 {
    let mut acc = 0.0;
    for v in xs {
        acc += v.re * v.re + v.im * v.im;
    }
    acc
}

/// Conjugated dot product sum conj(x[i]) * y[i], blockwise.
pub fn dot(
    backend: Backend,
    x: &DenseVector,
    y: &DenseVector,
    plan: ReductionPlan,
) -> Result<Complex64> {
    check_lengths(x.len(), y.len())?;
    let xs = x.as_slice();
    let ys = y.as_slice();
    let partials: Vec<Complex64> = match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => xs
            .par_chunks(plan.block_size)
            .zip(ys.par_chunks(plan.block_size))
            .map(|(xc, yc)| dot_block(xc, yc))
            .collect(),
        _ => xs
            .chunks(plan.block_size)
            .zip(ys.chunks(plan.block_size))
            .map(|(xc, yc)| dot_block(xc, yc))
            .collect(),
    };
    // Phase 2: ascending-order sum over block partials.
    let mut total = Complex64::new(0.0, 0.0);
    for p in partials {
        total += p;
    }
    Ok(total)
}

/// Euclidean norm sqrt(sum |x[i]|^2), blockwise.
pub fn norm2(backend: Backend, x: &DenseVector, plan: ReductionPlan) -> f64 {
    let xs = x.as_slice();
    let partials: Vec<f64> = match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => xs
            .par_chunks(plan.block_size)
            .map(norm_block)
            .collect(),
        _ => xs.chunks(plan.block_size).map(norm_block).collect(),
    };
    let mut total = 0.0;
    for p in partials {
        total += p;
    }
    total.sqrt()
}
