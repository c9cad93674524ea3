//! Identity and diagonal (Jacobi) preconditioners.

use num_complex::Complex64;

use crate::backend::Backend;
use crate::csr::CsrMatrix;
use crate::error::{Error, Result};
use crate::kernels;
use crate::vector::DenseVector;

#[derive(Debug, Clone)]
pub enum Preconditioner {
    Identity,
    Jacobi { inv_diag: DenseVector },
}

/// Scaling-safe complex reciprocal: divide through by the larger-magnitude
/// component to avoid overflow.
fn recip(z: Complex64) -> Complex64 {
    if z.re.abs() >= z.im.abs() {
        let q = z.im / z.re;
        let d = z.re + z.im * q;
        Complex64::new(1.0 / d, -q / d)
    } else {
        let q = z.re / z.im;
        let d = z.re * q + z.im;
        Complex64::new(q / d, -1.0 / d)
    }
}

impl Preconditioner {
    /// Inverse-diagonal preconditioner; every diagonal entry must be stored
    /// and nonzero.
    pub fn jacobi(m: &CsrMatrix) -> Result<Self> {
        if m.n_rows() != m.n_cols() {
            return Err(Error::NotSquare {
                n_rows: m.n_rows(),
                n_cols: m.n_cols(),
            });
        }
        let mut inv_diag = DenseVector::zeros(m.n_rows());
        for r in 0..m.n_rows() {
            let (cols, vals) = m.row(r);
            let d = cols
                .iter()
                .position(|&c| c == r)
                .map(|k| vals[k])
                .unwrap_or_else(|| Complex64::new(0.0, 0.0));
            if d.re == 0.0 && d.im == 0.0 {
                return Err(Error::ZeroDiagonal { row: r });
            }
            inv_diag[r] = recip(d);
        }
        Ok(Preconditioner::Jacobi { inv_diag })
    }

    /// z <- M^-1 r.
    pub fn apply(&self, backend: Backend, r: &DenseVector, z: &mut DenseVector) -> Result<()> {
        match self {
            Preconditioner::Identity => kernels::assign(backend, z, r),
            Preconditioner::Jacobi { inv_diag } => {
                kernels::assign(backend, z, r)?;
                kernels::ewproduct(backend, inv_diag, z)
            }
        }
    }
}
