//! Error types shared across the crate.

use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("vector length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("dimension mismatch: matrix is {n_rows}x{n_cols}, vector has length {vec_len}")]
    DimensionMismatch {
        n_rows: usize,
        n_cols: usize,
        vec_len: usize,
    },

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error("index ({row}, {col}) out of bounds for {n_rows}x{n_cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        n_rows: usize,
        n_cols: usize,
    },

    #[error("duplicate entry at ({row}, {col})")]
    DuplicateEntry { row: usize, col: usize },

    #[error("matrix is not square: {n_rows}x{n_cols}")]
    NotSquare { n_rows: usize, n_cols: usize },

    #[error("zero or missing diagonal entry at row {row}")]
    ZeroDiagonal { row: usize },

    #[error("right-hand side has zero norm")]
    ZeroRhs,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("matrix market parse error at line {line}: {message}")]
    MatrixMarket { line: usize, message: String },

    #[error("size cap exceeded: {n_rows}x{n_cols} dense oracle limited to {cap} entries")]
    SizeCap {
        n_rows: usize,
        n_cols: usize,
        cap: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
