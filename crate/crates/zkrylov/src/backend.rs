//! Execution backends.
//!
//! `Sequential` runs plain loops on the calling thread. `Parallel` partitions
//! work across a rayon pool. Both backends run the same blockwise reduction
//! schedule, so dot products and norms are bit-identical across backends and
//! thread counts.

/// Where kernel work runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Backend {
    Sequential,
    /// Rayon-backed execution; `threads == 0` means the pool default.
    Parallel { threads: usize },
}

impl Backend {
    pub fn parallel() -> Self {
        Backend::Parallel { threads: 0 }
    }

    pub fn is_parallel(&self) -> bool {
        matches!(self, Backend::Parallel { .. })
    }

    pub fn label(&self) -> String {
        match self {
            Backend::Sequential => "sequential".to_string(),
            Backend::Parallel { threads: 0 } => "parallel".to_string(),
            Backend::Parallel { threads } => format!("parallel({threads})"),
        }
    }

    /// Runs `f` inside this backend's thread pool.
    ///
    /// Kernels invoked from `f` with `Backend::Parallel` pick up the pool via
    /// rayon's scoped installation.
    pub fn install<R: Send>(&self, f: impl FnOnce() -> R + Send) -> R {
        match self {
            Backend::Sequential => f(),
            #[cfg(feature = "parallel")]
            Backend::Parallel { threads } => {
                if *threads == 0 {
                    f()
                } else {
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(*threads)
                        .build()
                        .expect("failed to build thread pool")
                        .install(f)
                }
            }
            #[cfg(not(feature = "parallel"))]
            Backend::Parallel { .. } => f(),
        }
    }
}
