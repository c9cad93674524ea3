//! Matrix Market coordinate-format I/O.
//!
//! Reading accepts `real` and `complex` fields with `general`, `symmetric` or
//! `hermitian` symmetry; symmetric storage is expanded to general on load.
//! Writing always emits `complex general` with 17 significant digits per
//! component, which round-trips `f64` bit-exactly.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;

use crate::csr::CsrMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Field {
    Real,
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Symmetry {
    General,
    Symmetric,
    Hermitian,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::MatrixMarket {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str) -> Result<(Field, Symmetry)> {
    let tokens: Vec<&str> = line.split_whitespace().collect();
    if tokens.len() != 5
        || !tokens[0].eq_ignore_ascii_case("%%MatrixMarket")
        || !tokens[1].eq_ignore_ascii_case("matrix")
        || !tokens[2].eq_ignore_ascii_case("coordinate")
    {
        return Err(parse_err(1, "malformed header"));
    }
    let field = match tokens[3].to_ascii_lowercase().as_str() {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(parse_err(1, format!("unsupported field '{other}'"))),
    };
    let symmetry = match tokens[4].to_ascii_lowercase().as_str() {
        "general" => Symmetry::General,
        "symmetric" => Symmetry::Symmetric,
        "hermitian" => Symmetry::Hermitian,
        other => return Err(parse_err(1, format!("unsupported symmetry '{other}'"))),
    };
    Ok((field, symmetry))
}

/// Loads a Matrix Market coordinate file as canonical CSR.
pub fn read_matrix_market(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let reader = BufReader::new(File::open(path)?);
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty file"))?;
    let (field, symmetry) = parse_header(&header?)?;

    let mut size_line = None;
    for (idx, line) in lines.by_ref() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        size_line = Some((idx + 1, line));
        break;
    }
    let (size_lineno, size_line) = size_line.ok_or_else(|| parse_err(1, "missing size line"))?;
    let dims: Vec<usize> = size_line
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| parse_err(size_lineno, "bad size line")))
        .collect::<Result<_>>()?;
    if dims.len() != 3 {
        return Err(parse_err(size_lineno, "size line needs rows cols nnz"));
    }
    let (n_rows, n_cols, nnz_decl) = (dims[0], dims[1], dims[2]);

    let mut triplets: Vec<(usize, usize, Complex64)> = Vec::with_capacity(nnz_decl);
    let mut seen = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = trimmed.split_whitespace().collect();
        let expected = match field {
            Field::Real => 3,
            Field::Complex => 4,
        };
        if toks.len() != expected {
            return Err(parse_err(lineno, format!("expected {expected} tokens")));
        }
        let i: usize = toks[0]
            .parse()
            .map_err(|_| parse_err(lineno, "bad row index"))?;
        let j: usize = toks[1]
            .parse()
            .map_err(|_| parse_err(lineno, "bad column index"))?;
        if i < 1 || i > n_rows || j < 1 || j > n_cols {
            return Err(parse_err(lineno, "index out of declared bounds"));
        }
        let re: f64 = toks[2]
            .parse()
            .map_err(|_| parse_err(lineno, "bad value"))?;
        let im: f64 = match field {
            Field::Real => 0.0,
            Field::Complex => toks[3]
                .parse()
                .map_err(|_| parse_err(lineno, "bad imaginary value"))?,
        };
        let v = Complex64::new(re, im);
        let (r, c) = (i - 1, j - 1);
        triplets.push((r, c, v));
        if r != c {
            match symmetry {
                Symmetry::General => {}
                Symmetry::Symmetric => triplets.push((c, r, v)),
                Symmetry::Hermitian => triplets.push((c, r, v.conj())),
            }
        }
        seen += 1;
    }
    if seen != nnz_decl {
        return Err(parse_err(
            0,
            format!("declared {nnz_decl} entries, found {seen}"),
        ));
    }
    CsrMatrix::from_triplets(n_rows, n_cols, &triplets)
}

/// Writes `m` in `complex general` coordinate format.
pub fn write_matrix_market(m: &CsrMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    writeln!(w, "%%MatrixMarket matrix coordinate complex general")?;
    writeln!(w, "{} {} {}", m.n_rows(), m.n_cols(), m.nnz())?;
    for (r, c, v) in m.to_triplets() {
        // 17 significant digits round-trip f64 exactly.
        writeln!(w, "{} {} {:.16e} {:.16e}", r + 1, c + 1, v.re, v.im)?;
    }
    w.flush()?;
    Ok(())
}
