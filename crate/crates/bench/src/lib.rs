//! Experiment runner behind the `qae-lab` binary.
//!
//! * [`bounds`]: closed-form sample-complexity curves.
//! * [`sweep`]: error versus query budget, one CSV row per run.
//! * [`tables`]: mean / VaR / CVaR per distribution and estimator.
//! * [`plot`]: SVG rendering of the CSV outputs.
//!
//! All outputs are pure functions of the plan and its master seed.

pub mod bounds;
pub mod plan;
pub mod plot;
pub mod sweep;
pub mod tables;

use std::path::{Path, PathBuf};

use qae_core::rng::derive_seed;

pub use plan::Plan;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("invalid plan: {0}")]
    Plan(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("schema mismatch in {path}: {reason}")]
    Schema { path: PathBuf, reason: String },
    #[error(transparent)]
    Core(#[from] qae_core::Error),
    #[error("{0}")]
    Usage(String),
}

impl LabError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

pub type LabResult<T> = std::result::Result<T, LabError>;

/// Seed streams of the master seed, one per subcommand.
pub const SWEEP_STREAM: u64 = 1;
pub const TABLES_STREAM: u64 = 2;

/// `derive_seed` folded over `path`, starting from `derive_seed(master, stream)`.
pub fn row_seed(master: u64, stream: u64, path: &[u64]) -> u64 {
    path.iter().fold(derive_seed(master, stream), |s, &i| derive_seed(s, i))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> LabResult<()> {
    if let Some(dir) = path.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
        }
    }
    std::fs::write(path, bytes).map_err(|e| LabError::io(path, e))
}

pub(crate) fn thread_pool(workers: usize) -> LabResult<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| LabError::Usage(format!("thread pool: {e}")))
}
