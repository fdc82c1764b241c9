//! JSON report types. Every report carries a versioned `schema` tag and
//! validates against the matching document under `schemas/`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const GENERATE_SIDECAR_SCHEMA: &str = "spi-solve/generate-sidecar/v1";
pub const SOLVE_REPORT_SCHEMA: &str = "spi-solve/solve-report/v1";
pub const VERIFY_REPORT_SCHEMA: &str = "spi-solve/verify-report/v1";
pub const BENCH_REPORT_SCHEMA: &str = "spi-solve/bench-report/v1";

/// Consistency level above which `solve` sets the report's warning field.
/// Generated scaled partial isometries sit around 1e-13; anything past
/// this is structurally off.
pub const CONSISTENCY_WARN_THRESHOLD: f64 = 1e-8;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BlockSpecJson {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratedFiles {
    pub matrix: String,
    pub t: Option<String>,
    pub rhs: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenerateSidecar {
    pub schema: String,
    pub rng_id: String,
    pub field: String,
    pub seed: u64,
    /// "single" or "block".
    pub kind: String,
    pub blocks: Vec<BlockSpecJson>,
    pub full_qr: bool,
    pub files: GeneratedFiles,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveTimings {
    pub solve_seconds: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolveReport {
    pub schema: String,
    pub matrix: String,
    pub rhs: String,
    pub m: usize,
    pub n: usize,
    pub field: String,
    pub zero_tol_factor: f64,
    pub alpha_sq: Option<f64>,
    pub consistency: Option<f64>,
    pub zeroed: Vec<usize>,
    pub warning: Option<String>,
    pub timings: SolveTimings,
    pub solution: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerifyReportJson {
    pub schema: String,
    pub matrix: String,
    pub m: usize,
    pub n: usize,
    pub field: String,
    pub probes_requested: usize,
    pub probes_used: usize,
    pub tol: f64,
    pub seed: u64,
    pub alpha_sq: f64,
    pub max_probe_deviation: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TimingMeta {
    pub repeats: usize,
    pub warmup: usize,
    pub statistic: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchRecordJson {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: f64,
    pub field: String,
    pub trials: usize,
    pub seed: u64,
    pub rng_id: String,
    /// Mean / min / max of ||x - x*||_2 against the oracle over the
    /// trials; absent for timing-only runs.
    pub mean_residual: Option<f64>,
    pub min_residual: Option<f64>,
    pub max_residual: Option<f64>,
    /// Mean fast-path deviation, populated only when s = 1.
    pub mean_fastpath_residual: Option<f64>,
    /// Solver wall time per solve (median for `bench`, mean for
    /// `repro-tables`), seconds.
    pub wall_time_solver: f64,
    pub wall_time_oracle: Option<f64>,
    /// Solver-time ratio against the previous ladder size (`bench`).
    pub time_ratio_vs_prev: Option<f64>,
    /// Set when the cell was aborted (e.g. oracle failure).
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BenchReportJson {
    pub schema: String,
    pub command: String,
    pub rng_id: String,
    pub timing: TimingMeta,
    pub records: Vec<BenchRecordJson>,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}
