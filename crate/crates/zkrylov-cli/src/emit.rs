//! Output emission: aligned text tables, CSV, and JSON.

use std::io::Write;

use anyhow::{bail, Result};
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Table,
    Csv,
    Json,
}

impl std::str::FromStr for Format {
    type Err = anyhow::Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "table" => Ok(Format::Table),
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => bail!("unknown format '{other}' (expected table, csv or json)"),
        }
    }
}

/// One backend's timing for a benchmark row.
#[derive(Debug, Clone, Serialize)]
pub struct Measurement {
    pub backend: String,
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gflops: Option<f64>,
}

/// One benchmark line: a kernel at a size, a matrix, or a solver run.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub label: String,
    pub h: Option<usize>,
    pub nnz: Option<usize>,
    pub measurements: Vec<Measurement>,
    /// elapsed(sequential) / elapsed(parallel), when both backends ran.
    pub ratio: Option<f64>,
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    pub final_true_relres: Option<f64>,
}

#[derive(Serialize)]
struct FlatRow<'a> {
    label: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    nnz: Option<usize>,
    backend: &'a str,
    elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    gflops: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ratio: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    converged: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    final_true_relres: Option<f64>,
}

fn flatten(rows: &[BenchRow]) -> Vec<FlatRow<'_>> {
    let mut out = Vec::new();
    for row in rows {
        for m in &row.measurements {
            out.push(FlatRow {
                label: &row.label,
                h: row.h,
                nnz: row.nnz,
                backend: &m.backend,
                elapsed_ms: m.elapsed_ms,
                gflops: m.gflops,
                ratio: row.ratio,
                iterations: row.iterations,
                converged: row.converged,
                final_true_relres: row.final_true_relres,
            });
        }
    }
    out
}

fn fmt_opt<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn emit_table(rows: &[BenchRow], w: &mut dyn Write) -> Result<()> {
    let has_solver_cols = rows.iter().any(|r| r.iterations.is_some());
    let mut table: Vec<Vec<String>> = Vec::new();
    let mut header = vec!["label".to_string(), "size".to_string()];
    let backends: Vec<String> = rows[0]
        .measurements
        .iter()
        .map(|m| m.backend.clone())
        .collect();
    if has_solver_cols {
        header.push("#iter".to_string());
        header.push("converged".to_string());
    }
    for b in &backends {
        header.push(format!("{b} time (ms)"));
        if !has_solver_cols {
            header.push(format!("{b} Gflops"));
        }
    }
    header.push("ratio".to_string());
    if has_solver_cols {
        header.push("true relres".to_string());
    }
    table.push(header);

    for row in rows {
        let size = row
            .nnz
            .map(|v| format!("nnz={v}"))
            .or(row.h.map(|v| format!("h={v}")))
            .unwrap_or_default();
        let mut line = vec![row.label.clone(), size];
        if has_solver_cols {
            line.push(fmt_opt(&row.iterations));
            line.push(fmt_opt(&row.converged));
        }
        for m in &row.measurements {
            line.push(format!("{:.3}", m.elapsed_ms));
            if !has_solver_cols {
                line.push(
                    m.gflops
                        .map(|g| format!("{g:.3}"))
                        .unwrap_or_default(),
                );
            }
        }
        line.push(
            row.ratio
                .map(|r| format!("{r:.2}"))
                .unwrap_or_default(),
        );
        if has_solver_cols {
            line.push(
                row.final_true_relres
                    .map(|r| format!("{r:.3e}"))
                    .unwrap_or_default(),
            );
        }
        table.push(line);
    }

    let n_cols = table.iter().map(|r| r.len()).max().unwrap_or(0);
    let mut widths = vec![0usize; n_cols];
    for line in &table {
        for (i, cell) in line.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    for line in &table {
        let rendered: Vec<String> = line
            .iter()
            .enumerate()
            .map(|(i, c)| format!("{:>width$}", c, width = widths[i]))
            .collect();
        writeln!(w, "{}", rendered.join("  "))?;
    }
    Ok(())
}

fn emit_csv(rows: &[BenchRow], w: &mut dyn Write) -> Result<()> {
    writeln!(
        w,
        "label,h,nnz,backend,elapsed_ms,gflops,ratio,iterations,converged,final_true_relres"
    )?;
    for f in flatten(rows) {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{}",
            f.label,
            fmt_opt(&f.h),
            fmt_opt(&f.nnz),
            f.backend,
            f.elapsed_ms,
            fmt_opt(&f.gflops),
            fmt_opt(&f.ratio),
            fmt_opt(&f.iterations),
            fmt_opt(&f.converged),
            fmt_opt(&f.final_true_relres),
        )?;
    }
    Ok(())
}

/// Writes `rows` in the requested format. Empty input is an error.
pub fn emit(rows: &[BenchRow], format: Format, w: &mut dyn Write) -> Result<()> {
    if rows.is_empty() {
        bail!("no rows to emit");
    }
    match format {
        Format::Table => emit_table(rows, w),
        Format::Csv => emit_csv(rows, w),
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, &flatten(rows))?;
            writeln!(w)?;
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_row() -> BenchRow {
        BenchRow {
            label: "zaxpy".into(),
            h: Some(1000),
            nnz: None,
            measurements: vec![
                Measurement {
                    backend: "sequential".into(),
                    elapsed_ms: 1.5,
                    gflops: Some(5.33),
                },
                Measurement {
                    backend: "parallel".into(),
                    elapsed_ms: 0.5,
                    gflops: Some(16.0),
                },
            ],
            ratio: Some(3.0),
            iterations: None,
            converged: None,
            final_true_relres: None,
        }
    }

    #[test]
    fn csv_has_header_plus_one_line_per_backend() {
        let mut buf = Vec::new();
        emit(&[sample_row()], Format::Csv, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 3);
        assert!(text.lines().next().unwrap().starts_with("label,"));
    }

    #[test]
    fn json_round_trips() {
        let mut buf = Vec::new();
        emit(&[sample_row()], Format::Json, &mut buf).unwrap();
        let parsed: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        let arr = parsed.as_array().unwrap();
        assert_eq!(arr.len(), 2);
        assert_eq!(arr[0]["label"], "zaxpy");
        assert_eq!(arr[0]["h"], 1000);
        assert_eq!(arr[1]["ratio"], 3.0);
    }

    #[test]
    fn empty_rows_are_an_error() {
        let mut buf = Vec::new();
        assert!(emit(&[], Format::Table, &mut buf).is_err());
    }
}
