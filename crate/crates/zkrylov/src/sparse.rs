//! CSR sparse matrix-vector product.
//!
//! Row-parallel: each output element is accumulated sequentially over its
//! row's stored entries, so the result is bit-identical across thread counts.

use num_complex::Complex64;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::backend::Backend;
use crate::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::vector::DenseVector;

fn row_product(m: &CsrMatrix, x: &[Complex64], r: usize) -> Complex64 {
    let (cols, vals) = m.row(r);
    let mut acc = Complex64::new(0.0, 0.0);
    for (&c, &v) in cols.iter().zip(vals) {
        acc += v * x[c];
    }
    acc
}

/// y <- A x.
pub fn spmv(backend: Backend, m: &CsrMatrix, x: &DenseVector, y: &mut DenseVector) -> Result<()> {
    if m.n_cols() != x.len() {
        return Err(Error::DimensionMismatch {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            vec_len: x.len(),
        });
    }
    if m.n_rows() != y.len() {
        return Err(Error::DimensionMismatch {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            vec_len: y.len(),
        });
    }
    let xs = x.as_slice();
    match backend {
        #[cfg(feature = "parallel")]
        Backend::Parallel { .. } => {
            y.as_mut_slice()
                .par_iter_mut()
                .enumerate()
                .for_each(|(r, yv)| *yv = row_product(m, xs, r));
        }
        _ => {
            for (r, yv) in y.as_mut_slice().iter_mut().enumerate() {
                *yv = row_product(m, xs, r);
            }
        }
    }
    Ok(())
}

/// Dense naive multiply, for cross-checking `spmv` on small instances.
pub fn spmv_dense_oracle(m: &CsrMatrix, x: &DenseVector) -> Result<DenseVector> {
    const CAP: usize = 1_000_000;
    if m.n_rows().saturating_mul(m.n_cols()) > CAP {
        return Err(Error::SizeCap {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            cap: CAP,
        });
    }
    if m.n_cols() != x.len() {
        return Err(Error::DimensionMismatch {
            n_rows: m.n_rows(),
            n_cols: m.n_cols(),
            vec_len: x.len(),
        });
    }
    let mut dense = vec![Complex64::new(0.0, 0.0); m.n_rows() * m.n_cols()];
    for (r, c, v) in m.to_triplets() {
        dense[r * m.n_cols() + c] = v;
    }
    let mut y = DenseVector::zeros(m.n_rows());
    for r in 0..m.n_rows() {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..m.n_cols() {
            acc += dense[r * m.n_cols() + c] * x[c];
        }
        y[r] = acc;
    }
    Ok(y)
}
