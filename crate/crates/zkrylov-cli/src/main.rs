//! Benchmark and solve harness: per-kernel microbenchmarks, SpMV and solver
//! timings across sequential/parallel backends, single-system solves,
//! Helmholtz system generation and matrix statistics.

mod bench;
mod emit;

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use zkrylov::backend::Backend;
use zkrylov::csr::CsrMatrix;
use zkrylov::helmholtz::{generate, HelmholtzSpec};
use zkrylov::krylov::{Method, PrecondKind, SolverConfig, Termination};
use zkrylov::mm::{read_matrix_market, write_matrix_market};
use zkrylov::vector::DenseVector;

use bench::BenchConfig;
use emit::{emit, BenchRow, Format, Measurement};

#[derive(Parser)]
#[command(name = "zkrylov", about = "Complex sparse kernels and Krylov solver benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct OutputOpts {
    /// Output format: table, csv or json
    #[arg(long, default_value = "table")]
    format: Format,
    /// Write output to a file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct BackendOpts {
    /// Worker threads for the parallel backend (0 = all cores)
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Backends to run (comma-separated: sequential, parallel)
    #[arg(long, default_value = "sequential,parallel", value_delimiter = ',')]
    backends: Vec<String>,
}

#[derive(Args, Clone)]
struct SourceOpts {
    /// Matrix Market file (repeatable)
    #[arg(long)]
    matrix: Vec<PathBuf>,
    /// Helmholtz spec as key=value pairs: dim=..,n=..,f=..,c=..,eta=..,length=.. (repeatable)
    #[arg(long)]
    helmholtz: Vec<String>,
    /// Helmholtz spec from a key-value config file (keys: dim, n, length,
    /// frequency, velocity, absorption; repeatable)
    #[arg(long)]
    helmholtz_config: Vec<PathBuf>,
}

#[derive(Args, Clone)]
struct SolverOpts {
    /// Solver: bicgstab, bicgstab-l or tfqmr
    #[arg(long, default_value = "bicgstab")]
    method: String,
    /// Polynomial degree for bicgstab-l
    #[arg(long, default_value_t = 8)]
    l: usize,
    /// Preconditioner: identity or jacobi
    #[arg(long, default_value = "jacobi")]
    precond: String,
    /// Relative residual tolerance
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value_t = 1000)]
    max_iter: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Time the BLAS-1 kernels across sizes and backends
    BenchKernels {
        /// Vector sizes (comma-separated)
        #[arg(long, value_delimiter = ',', default_values_t = [648_849usize, 2_000_000, 9_000_000, 14_000_000])]
        sizes: Vec<usize>,
        /// Timed repetitions per measurement
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        backend: BackendOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Time SpMV on one or more matrices
    BenchSpmv {
        #[command(flatten)]
        sources: SourceOpts,
        #[arg(long, default_value_t = 100)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        backend: BackendOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Run the solver suite on one or more systems
    BenchSolvers {
        #[command(flatten)]
        sources: SourceOpts,
        /// Restrict to a single method instead of the default three-block
        /// suite (bicgstab, bicgstab-l, tfqmr)
        #[arg(long)]
        method: Option<String>,
        #[arg(long, default_value_t = 8)]
        l: usize,
        #[arg(long, default_value = "jacobi")]
        precond: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 1000)]
        max_iter: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        backend: BackendOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Solve a single system and print the solve report
    Solve {
        #[command(flatten)]
        sources: SourceOpts,
        #[command(flatten)]
        solver: SolverOpts,
        #[command(flatten)]
        backend: BackendOpts,
        #[command(flatten)]
        output: OutputOpts,
    },
    /// Generate a Helmholtz system and write the matrix in Matrix Market format
    Gen {
        #[command(flatten)]
        sources: SourceOpts,
        /// Output path for the matrix
        #[arg(long)]
        out: PathBuf,
    },
    /// Print statistics of a Matrix Market file
    Stats {
        #[arg(long)]
        matrix: PathBuf,
        #[command(flatten)]
        output: OutputOpts,
    },
}

fn parse_helmholtz_pairs(s: &str) -> Result<HelmholtzSpec> {
    let mut spec = HelmholtzSpec::default();
    for pair in s.split(',') {
        let (key, value) = pair
            .split_once('=')
            .with_context(|| format!("expected key=value, got '{pair}'"))?;
        apply_helmholtz_key(&mut spec, key.trim(), value.trim())?;
    }
    spec.validate()?;
    Ok(spec)
}

fn apply_helmholtz_key(spec: &mut HelmholtzSpec, key: &str, value: &str) -> Result<()> {
    match key {
        "dim" => spec.dim = value.parse()?,
        "n" => spec.n_per_axis = value.parse()?,
        "length" => spec.domain_length = value.parse()?,
        "f" | "frequency" => spec.frequency = value.parse()?,
        "c" | "velocity" => spec.velocity = value.parse()?,
        "eta" | "absorption" => spec.absorption = value.parse()?,
        other => bail!("unknown helmholtz key '{other}'"),
    }
    Ok(())
}

fn parse_helmholtz_config(path: &PathBuf) -> Result<HelmholtzSpec> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    let mut spec = HelmholtzSpec::default();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k, v),
            None => line
                .split_once(char::is_whitespace)
                .with_context(|| format!("expected 'key value' or 'key = value': '{line}'"))?,
        };
        apply_helmholtz_key(&mut spec, key.trim(), value.trim())?;
    }
    spec.validate()?;
    Ok(spec)
}

fn helmholtz_label(spec: &HelmholtzSpec) -> String {
    format!(
        "helmholtz-{}d-n{}-f{}",
        spec.dim, spec.n_per_axis, spec.frequency
    )
}

/// Collects (label, matrix, rhs) from all requested sources. Matrix Market
/// inputs get a unit point source at the middle node as right-hand side.
fn load_systems(sources: &SourceOpts) -> Result<Vec<(String, CsrMatrix, DenseVector)>> {
    let mut systems = Vec::new();
    for path in &sources.matrix {
        let m = read_matrix_market(path)
            .with_context(|| format!("reading {}", path.display()))?;
        let label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| path.display().to_string());
        let mut b = DenseVector::zeros(m.n_rows());
        b[m.n_rows() / 2] = Complex64::new(1.0, 0.0);
        systems.push((label, m, b));
    }
    let specs = sources
        .helmholtz
        .iter()
        .map(|s| parse_helmholtz_pairs(s))
        .chain(sources.helmholtz_config.iter().map(parse_helmholtz_config));
    for spec in specs {
        let spec = spec?;
        let (a, b) = generate(&spec)?;
        systems.push((helmholtz_label(&spec), a, b));
    }
    Ok(systems)
}

fn parse_method(s: &str) -> Result<Method> {
    match s.to_ascii_lowercase().replace('_', "-").as_str() {
        "bicgstab" => Ok(Method::Bicgstab),
        "bicgstab-l" | "bicgstabl" => Ok(Method::BicgstabL),
        "tfqmr" => Ok(Method::Tfqmr),
        other => bail!("unknown method '{other}'"),
    }
}

fn parse_precond(s: &str) -> Result<PrecondKind> {
    match s.to_ascii_lowercase().as_str() {
        "identity" => Ok(PrecondKind::Identity),
        "jacobi" => Ok(PrecondKind::Jacobi),
        other => bail!("unknown preconditioner '{other}'"),
    }
}

fn parse_backends(opts: &BackendOpts) -> Result<Vec<Backend>> {
    let mut backends = Vec::new();
    for name in &opts.backends {
        match name.trim().to_ascii_lowercase().as_str() {
            "sequential" => backends.push(Backend::Sequential),
            "parallel" => backends.push(Backend::Parallel {
                threads: opts.threads,
            }),
            other => bail!("unknown backend '{other}'"),
        }
    }
    if backends.is_empty() {
        bail!("at least one backend is required");
    }
    Ok(backends)
}

fn write_output(output: &OutputOpts, rows: &[BenchRow]) -> Result<()> {
    match &output.out {
        Some(path) => {
            let mut f = File::create(path)?;
            emit(rows, output.format, &mut f)
        }
        None => emit(rows, output.format, &mut std::io::stdout().lock()),
    }
}

fn run() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::BenchKernels {
            sizes,
            reps,
            seed,
            backend,
            output,
        } => {
            let cfg = BenchConfig {
                repetitions: reps,
                sizes,
                backends: parse_backends(&backend)?,
                seed,
            };
            let rows = bench::bench_kernels(&cfg)?;
            write_output(&output, &rows)
        }
        Command::BenchSpmv {
            sources,
            reps,
            seed,
            backend,
            output,
        } => {
            let cfg = BenchConfig {
                repetitions: reps,
                sizes: vec![],
                backends: parse_backends(&backend)?,
                seed,
            };
            let matrices: Vec<(String, CsrMatrix)> = load_systems(&sources)?
                .into_iter()
                .map(|(label, m, _)| (label, m))
                .collect();
            let rows = bench::bench_spmv(&cfg, &matrices)?;
            write_output(&output, &rows)
        }
        Command::BenchSolvers {
            sources,
            method,
            l,
            precond,
            tol,
            max_iter,
            seed,
            backend,
            output,
        } => {
            let cfg = BenchConfig {
                repetitions: 1,
                sizes: vec![],
                backends: parse_backends(&backend)?,
                seed,
            };
            let precond = parse_precond(&precond)?;
            let base = SolverConfig {
                tol,
                max_iter,
                l,
                precond,
                ..Default::default()
            };
            let solver_cfgs: Vec<(String, SolverConfig)> = match method {
                Some(name) => {
                    let method = parse_method(&name)?;
                    vec![(method_label(method, l), SolverConfig { method, ..base })]
                }
                None => vec![
                    (
                        method_label(Method::Bicgstab, l),
                        SolverConfig {
                            method: Method::Bicgstab,
                            ..base.clone()
                        },
                    ),
                    (
                        method_label(Method::BicgstabL, l),
                        SolverConfig {
                            method: Method::BicgstabL,
                            ..base.clone()
                        },
                    ),
                    (
                        method_label(Method::Tfqmr, l),
                        SolverConfig {
                            method: Method::Tfqmr,
                            ..base
                        },
                    ),
                ],
            };
            let systems = load_systems(&sources)?;
            let rows = bench::bench_solvers(&cfg, &systems, &solver_cfgs)?;
            write_output(&output, &rows)
        }
        Command::Solve {
            sources,
            solver,
            backend,
            output,
        } => {
            let systems = load_systems(&sources)?;
            if systems.len() != 1 {
                bail!("solve expects exactly one system, got {}", systems.len());
            }
            let (label, a, b) = systems.into_iter().next().unwrap();
            let method = parse_method(&solver.method)?;
            let cfg = SolverConfig {
                tol: solver.tol,
                max_iter: solver.max_iter,
                method,
                l: solver.l,
                precond: parse_precond(&solver.precond)?,
                ..Default::default()
            };
            let backends = parse_backends(&backend)?;
            let (_, report) = zkrylov::krylov::solve(&a, &b, &cfg, backends[0])?;
            let rows = vec![BenchRow {
                label: format!("{} {label}", method_label(method, solver.l)),
                h: Some(a.n_rows()),
                nnz: Some(a.nnz()),
                measurements: vec![Measurement {
                    backend: backends[0].label(),
                    elapsed_ms: report.elapsed * 1e3,
                    gflops: Some(report.total_flops as f64 / report.elapsed / 1e9),
                }],
                ratio: None,
                iterations: Some(report.iterations),
                converged: Some(report.converged),
                final_true_relres: Some(report.final_true_relres),
            }];
            write_output(&output, &rows)?;
            if let Termination::Breakdown(reason) = &report.termination {
                eprintln!("breakdown: {reason}");
            }
            Ok(())
        }
        Command::Gen { sources, out } => {
            let specs: Vec<HelmholtzSpec> = sources
                .helmholtz
                .iter()
                .map(|s| parse_helmholtz_pairs(s))
                .chain(sources.helmholtz_config.iter().map(parse_helmholtz_config))
                .collect::<Result<_>>()?;
            if specs.len() != 1 {
                bail!("gen expects exactly one --helmholtz spec");
            }
            let (a, _) = generate(&specs[0])?;
            write_matrix_market(&a, &out)?;
            eprintln!(
                "wrote {} ({} rows, {} nonzeros)",
                out.display(),
                a.n_rows(),
                a.nnz()
            );
            Ok(())
        }
        Command::Stats { matrix, output } => {
            let m = read_matrix_market(&matrix)?;
            let s = m.stats();
            let mut w: Box<dyn Write> = match &output.out {
                Some(path) => Box::new(File::create(path)?),
                None => Box::new(std::io::stdout().lock()),
            };
            match output.format {
                Format::Json => {
                    let json = serde_json::json!({
                        "n": s.n,
                        "nnz": s.nnz,
                        "density_percent": s.density_percent,
                        "nnz_max_per_row": s.nnz_max_per_row,
                        "nnz_mean_per_row": s.nnz_mean_per_row,
                        "bandwidth": s.bandwidth,
                    });
                    writeln!(w, "{}", serde_json::to_string_pretty(&json)?)?;
                }
                _ => {
                    writeln!(w, "n                {}", s.n)?;
                    writeln!(w, "nnz              {}", s.nnz)?;
                    writeln!(w, "density (%)      {:.6}", s.density_percent)?;
                    writeln!(w, "nnz max per row  {}", s.nnz_max_per_row)?;
                    writeln!(w, "nnz mean per row {:.3}", s.nnz_mean_per_row)?;
                    writeln!(w, "bandwidth        {}", s.bandwidth)?;
                }
            }
            Ok(())
        }
    }
}

fn method_label(method: Method, l: usize) -> String {
    match method {
        Method::Bicgstab => "P-BiCGSTAB".to_string(),
        Method::BicgstabL => format!("P-BiCGSTAB({l})"),
        Method::Tfqmr => "P-TFQMR".to_string(),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}
