//! Canonical CSR storage for complex sparse matrices.
//!
//! Invariants enforced at construction: `row_ptr` starts at 0, is
//! non-decreasing and ends at `nnz`; column indices are strictly increasing
//! within each row; all values are finite. Matrices are immutable once built.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct CsrMatrix {
    n_rows: usize,
    n_cols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<Complex64>,
}

/// Summary statistics of a sparse matrix, in the layout of the usual
/// size/nnz/density/max-row sketches.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixStats {
    pub n: usize,
    pub nnz: usize,
    pub density_percent: f64,
    pub nnz_max_per_row: usize,
    pub nnz_mean_per_row: f64,
    pub bandwidth: usize,
}

impl CsrMatrix {
    /// Builds a canonical CSR matrix from unordered (row, col, value) triplets.
    ///
    /// Duplicate coordinates are an error, not summed.
    pub fn from_triplets(
        n_rows: usize,
        n_cols: usize,
        entries: &[(usize, usize, Complex64)],
    ) -> Result<Self> {
        for (i, &(r, c, v)) in entries.iter().enumerate() {
            if r >= n_rows || c >= n_cols {
                return Err(Error::IndexOutOfBounds {
                    row: r,
                    col: c,
                    n_rows,
                    n_cols,
                });
            }
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        let mut sorted: Vec<&(usize, usize, Complex64)> = entries.iter().collect();
        sorted.sort_by_key(|&&(r, c, _)| (r, c));
        for w in sorted.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 == w[1].1 {
                return Err(Error::DuplicateEntry {
                    row: w[0].0,
                    col: w[0].1,
                });
            }
        }
        let nnz = sorted.len();
        let mut row_ptr = vec![0usize; n_rows + 1];
        let mut col_idx = Vec::with_capacity(nnz);
        let mut values = Vec::with_capacity(nnz);
        for &&(r, c, v) in &sorted {
            row_ptr[r + 1] += 1;
            col_idx.push(c);
            values.push(v);
        }
        for i in 0..n_rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    /// Assembles from raw CSR arrays, validating every invariant.
    pub fn from_raw(
        n_rows: usize,
        n_cols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<Complex64>,
    ) -> Result<Self> {
        if row_ptr.len() != n_rows + 1 || row_ptr[0] != 0 || col_idx.len() != values.len() {
            return Err(Error::InvalidConfig("malformed CSR arrays".into()));
        }
        if row_ptr[n_rows] != col_idx.len() {
            return Err(Error::InvalidConfig(
                "row_ptr end does not match nnz".into(),
            ));
        }
        for r in 0..n_rows {
            if row_ptr[r + 1] < row_ptr[r] {
                return Err(Error::InvalidConfig("row_ptr not non-decreasing".into()));
            }
            let row = &col_idx[row_ptr[r]..row_ptr[r + 1]];
            for w in row.windows(2) {
                if w[1] <= w[0] {
                    return Err(Error::InvalidConfig(
                        "column indices not strictly increasing within a row".into(),
                    ));
                }
            }
            for &c in row {
                if c >= n_cols {
                    return Err(Error::IndexOutOfBounds {
                        row: r,
                        col: c,
                        n_rows,
                        n_cols,
                    });
                }
            }
        }
        for (i, z) in values.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        Ok(Self {
            n_rows,
            n_cols,
            row_ptr,
            col_idx,
            values,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: vec![Complex64::new(1.0, 0.0); n],
        }
    }

    /// Diagonal matrix from the given entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        Self {
            n_rows: n,
            n_cols: n,
            row_ptr: (0..=n).collect(),
            col_idx: (0..n).collect(),
            values: diag.to_vec(),
        }
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Column indices and values of one row.
    pub fn row(&self, r: usize) -> (&[usize], &[Complex64]) {
        let span = self.row_ptr[r]..self.row_ptr[r + 1];
        (&self.col_idx[span.clone()], &self.values[span])
    }

    /// Expands back into (row, col, value) triplets in row-major order.
    pub fn to_triplets(&self) -> Vec<(usize, usize, Complex64)> {
        let mut out = Vec::with_capacity(self.nnz());
        for r in 0..self.n_rows {
            let (cols, vals) = self.row(r);
            for (&c, &v) in cols.iter().zip(vals) {
                out.push((r, c, v));
            }
        }
        out
    }

    pub fn stats(&self) -> MatrixStats {
        let n = self.n_rows;
        let nnz = self.nnz();
        let mut nnz_max = 0usize;
        let mut bandwidth = 0usize;
        for r in 0..n {
            let (cols, _) = self.row(r);
            nnz_max = nnz_max.max(cols.len());
            for &c in cols {
                bandwidth = bandwidth.max(r.abs_diff(c));
            }
        }
        MatrixStats {
            n,
            nnz,
            density_percent: if n == 0 {
                0.0
            } else {
                100.0 * nnz as f64 / (n as f64 * n as f64)
            },
            nnz_max_per_row: nnz_max,
            nnz_mean_per_row: if n == 0 { 0.0 } else { nnz as f64 / n as f64 },
            bandwidth,
        }
    }
}
