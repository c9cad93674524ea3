//! Benchmark drivers: per-kernel microbenchmarks, SpMV timings and solver
//! runs, each measured over `repetitions` timed passes after one warm-up and
//! reported as the mean. Sequential and parallel backends run the same code;
//! dot/norm results and solver iteration counts are gated for bitwise
//! equality across backends before anything is reported.

use std::time::Instant;

use anyhow::{bail, Result};
use num_complex::Complex64;
use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use zkrylov::backend::Backend;
use zkrylov::csr::CsrMatrix;
use zkrylov::kernels::{self, FlopConvention, ReductionPlan};
use zkrylov::krylov::{solve, SolverConfig};
use zkrylov::sparse;
use zkrylov::vector::DenseVector;

use crate::emit::{BenchRow, Measurement};

pub struct BenchConfig {
    pub repetitions: usize,
    pub sizes: Vec<usize>,
    pub backends: Vec<Backend>,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        Self {
            repetitions: 100,
            sizes: vec![648_849, 2_000_000, 9_000_000, 14_000_000],
            backends: vec![Backend::Sequential, Backend::parallel()],
            seed: 42,
        }
    }
}

fn random_vector(rng: &mut ChaCha8Rng, h: usize) -> DenseVector {
    let dist = Uniform::new_inclusive(-1.0f64, 1.0);
    DenseVector::from_fn(h, |_| Complex64::new(dist.sample(rng), dist.sample(rng)))
}

/// Mean wall time in seconds over `reps` runs after one warm-up.
fn time_mean(reps: usize, mut f: impl FnMut()) -> f64 {
    f(); // warm-up
    let start = Instant::now();
    for _ in 0..reps {
        f();
    }
    start.elapsed().as_secs_f64() / reps as f64
}

fn ratio_of(measurements: &[Measurement]) -> Option<f64> {
    let seq = measurements.iter().find(|m| m.backend == "sequential")?;
    let par = measurements
        .iter()
        .find(|m| m.backend.starts_with("parallel"))?;
    Some(seq.elapsed_ms / par.elapsed_ms)
}

struct KernelCase {
    name: &'static str,
    flops: fn(usize) -> u64,
}

const KERNELS: [KernelCase; 6] = [
    KernelCase { name: "zassign", flops: FlopConvention::assign_flops },
    KernelCase { name: "zscal", flops: FlopConvention::scale_flops },
    KernelCase { name: "zaxpy", flops: FlopConvention::axpy_flops },
    KernelCase { name: "zaxmy", flops: FlopConvention::ewproduct_flops },
    KernelCase { name: "zdot", flops: FlopConvention::dot_flops },
    KernelCase { name: "znorm", flops: FlopConvention::norm_flops },
];

/// Times every BLAS-1 kernel at every size on every backend.
pub fn bench_kernels(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let plan = ReductionPlan::default();
    let mut rows = Vec::new();
    for &h in &cfg.sizes {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let x = random_vector(&mut rng, h);
        let y0 = random_vector(&mut rng, h);
        // |alpha| = 1 keeps repeated scaling bounded.
        let alpha = Complex64::from_polar(1.0, 0.7);

        // Determinism gate: reduction results must agree bitwise across
        // backends before any timing is reported.
        let d0 = cfg.backends[0]
            .install(|| kernels::dot(cfg.backends[0], &x, &y0, plan).unwrap());
        let n0 = cfg.backends[0].install(|| kernels::norm2(cfg.backends[0], &x, plan));
        for &backend in &cfg.backends[1..] {
            let d = backend.install(|| kernels::dot(backend, &x, &y0, plan).unwrap());
            let n = backend.install(|| kernels::norm2(backend, &x, plan));
            if d.re.to_bits() != d0.re.to_bits()
                || d.im.to_bits() != d0.im.to_bits()
                || n.to_bits() != n0.to_bits()
            {
                bail!(
                    "determinism violation: {} reduction differs from {} at h={h}",
                    backend.label(),
                    cfg.backends[0].label()
                );
            }
        }

        for kernel in &KERNELS {
            let flops = (kernel.flops)(h);
            let mut measurements = Vec::new();
            for &backend in &cfg.backends {
                let mut y = y0.clone();
                let mut dst = DenseVector::zeros(h);
                let elapsed = backend.install(|| {
                    time_mean(cfg.repetitions, || match kernel.name {
                        "zassign" => kernels::assign(backend, &mut dst, &x).unwrap(),
                        "zscal" => kernels::scale(backend, alpha, &mut y),
                        "zaxpy" => kernels::axpy(backend, alpha, &x, &mut y).unwrap(),
                        "zaxmy" => kernels::ewproduct(backend, &x, &mut y).unwrap(),
                        "zdot" => {
                            kernels::dot(backend, &x, &y, plan).unwrap();
                        }
                        "znorm" => {
                            kernels::norm2(backend, &x, plan);
                        }
                        _ => unreachable!(),
                    })
                });
                measurements.push(Measurement {
                    backend: backend.label(),
                    elapsed_ms: elapsed * 1e3,
                    gflops: Some(flops as f64 / elapsed / 1e9),
                });
            }
            rows.push(BenchRow {
                label: kernel.name.to_string(),
                h: Some(h),
                nnz: None,
                ratio: ratio_of(&measurements),
                measurements,
                iterations: None,
                converged: None,
                final_true_relres: None,
            });
        }
    }
    Ok(rows)
}

/// Times SpMV on each matrix on every backend.
pub fn bench_spmv(cfg: &BenchConfig, matrices: &[(String, CsrMatrix)]) -> Result<Vec<BenchRow>> {
    if matrices.is_empty() {
        bail!("bench-spmv needs at least one matrix source");
    }
    let mut rows = Vec::new();
    for (label, m) in matrices {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let x = random_vector(&mut rng, m.n_cols());
        let flops = FlopConvention::spmv_flops(m.nnz());

        // Correctness gate: all backends must produce bit-identical output.
        let mut y0 = DenseVector::zeros(m.n_rows());
        cfg.backends[0].install(|| sparse::spmv(cfg.backends[0], m, &x, &mut y0))?;
        for &backend in &cfg.backends[1..] {
            let mut y = DenseVector::zeros(m.n_rows());
            backend.install(|| sparse::spmv(backend, m, &x, &mut y))?;
            if y != y0 {
                bail!(
                    "determinism violation: {} SpMV differs on {label}",
                    backend.label()
                );
            }
        }

        let mut measurements = Vec::new();
        for &backend in &cfg.backends {
            let mut y = DenseVector::zeros(m.n_rows());
            let elapsed = backend.install(|| {
                time_mean(cfg.repetitions, || {
                    sparse::spmv(backend, m, &x, &mut y).unwrap()
                })
            });
            measurements.push(Measurement {
                backend: backend.label(),
                elapsed_ms: elapsed * 1e3,
                gflops: Some(flops as f64 / elapsed / 1e9),
            });
        }
        rows.push(BenchRow {
            label: label.clone(),
            h: Some(m.n_rows()),
            nnz: Some(m.nnz()),
            ratio: ratio_of(&measurements),
            measurements,
            iterations: None,
            converged: None,
            final_true_relres: None,
        });
    }
    Ok(rows)
}

/// Runs each solver config on each system on every backend. Non-convergence
/// is reported in-row; differing iteration counts across backends abort.
pub fn bench_solvers(
    cfg: &BenchConfig,
    systems: &[(String, CsrMatrix, DenseVector)],
    solver_cfgs: &[(String, SolverConfig)],
) -> Result<Vec<BenchRow>> {
    if systems.is_empty() {
        bail!("bench-solvers needs at least one matrix source");
    }
    let mut rows = Vec::new();
    for (method_label, scfg) in solver_cfgs {
        for (label, a, b) in systems {
            let mut measurements = Vec::new();
            let mut reference: Option<zkrylov::SolveReport> = None;
            for &backend in &cfg.backends {
                let (_, report) = solve(a, b, scfg, backend)?;
                if let Some(prev) = &reference {
                    if prev.iterations != report.iterations {
                        bail!(
                            "determinism violation: {} ran {} iterations on {label} vs {}",
                            backend.label(),
                            report.iterations,
                            prev.iterations
                        );
                    }
                } else {
                    reference = Some(report.clone());
                }
                measurements.push(Measurement {
                    backend: backend.label(),
                    elapsed_ms: report.elapsed * 1e3,
                    gflops: Some(report.total_flops as f64 / report.elapsed / 1e9),
                });
            }
            let report = reference.unwrap();
            rows.push(BenchRow {
                label: format!("{method_label} {label}"),
                h: Some(a.n_rows()),
                nnz: Some(a.nnz()),
                ratio: ratio_of(&measurements),
                measurements,
                iterations: Some(report.iterations),
                converged: Some(report.converged),
                final_true_relres: Some(report.final_true_relres),
            });
        }
    }
    Ok(rows)
}
