//! Dense complex vectors.
//!
//! A [`DenseVector`] is a contiguous sequence of `Complex64` values. Entries
//! are checked finite at construction; in-place kernels may mutate the data
//! afterwards without re-validation.

use num_complex::Complex64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<Complex64>,
}

impl DenseVector {
    /// Builds a vector from raw data, rejecting NaN/Inf components.
    pub fn from_vec(data: Vec<Complex64>) -> Result<Self> {
        for (i, z) in data.iter().enumerate() {
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { index: i });
            }
        }
        Ok(Self { data })
    }

    pub fn zeros(len: usize) -> Self {
        Self {
            data: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    pub fn from_fn(len: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            data: (0..len).map(f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<Complex64> {
        self.data
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.data[i]
    }
}

impl std::ops::IndexMut<usize> for DenseVector {
    fn index_mut(&mut self, i: usize) -> &mut Complex64 {
        &mut self.data[i]
    }
}
