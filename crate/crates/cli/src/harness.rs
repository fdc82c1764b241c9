//! Experiment harness: seeded trial loops comparing the direct solver
//! against the SVD oracle, table reproduction, and timing ladders.
//!
//! Trials are independent (per-trial derived seeds) and may run in
//! parallel; results are collected in trial order and reduced
//! sequentially, so the numbers are identical at any thread count. The
//! `SPI_SOLVE_THREADS` environment variable caps the worker count
//! (0 or 1 = fully sequential).

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use spi_solve::generator::{
    derive_seed, generate_spi, random_rhs, GeneratorSpec, NormalStream, RNG_ID,
};
use spi_solve::oracle::{self, GesddScalar};
use spi_solve::solver::{solve_partial_isometry, solve_spi};
use spi_solve::{DenseVector, Field, Scalar};

use crate::error::CliError;
use crate::reports::{
    BenchRecordJson, BenchReportJson, TimingMeta, BENCH_REPORT_SCHEMA,
};

/// One experiment cell: matrix shape, rank, and common singular value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CellSpec {
    pub m: usize,
    pub n: usize,
    pub r: usize,
    pub s: f64,
}

/// Desk-scale grid: the benchmark tables scaled down 10x, preserving the
/// aspect-ratio / rank pattern (including the full-rank square cell).
pub fn desk_grid() -> Vec<CellSpec> {
    [
        (1000, 1000, 200),
        (1000, 200, 40),
        (500, 1000, 200),
        (500, 500, 500),
    ]
    .into_iter()
    .map(|(m, n, r)| CellSpec { m, n, r, s: 10.0 })
    .collect()
}

/// Full-scale grid (the `--long` mode).
pub fn full_grid() -> Vec<CellSpec> {
    [
        (10_000, 10_000, 2_000),
        (10_000, 2_000, 400),
        (5_000, 10_000, 2_000),
        (5_000, 5_000, 5_000),
    ]
    .into_iter()
    .map(|(m, n, r)| CellSpec { m, n, r, s: 10.0 })
    .collect()
}

/// Worker cap from `SPI_SOLVE_THREADS`: `Some(0)`/`Some(1)` force the
/// sequential path, `Some(n)` caps a local pool, `None` uses the default
/// pool.
pub fn thread_limit() -> Option<usize> {
    std::env::var("SPI_SOLVE_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
}

/// Runs `f` for every trial index, in parallel when allowed, returning
/// results in trial order.
pub fn run_trials<R: Send>(trials: usize, f: impl Fn(usize) -> R + Send + Sync) -> Vec<R> {
    run_trials_with(thread_limit(), trials, f)
}

/// [`run_trials`] with an explicit worker cap instead of the environment
/// variable. Results come back in trial order at any cap, so downstream
/// reductions are bitwise reproducible.
pub fn run_trials_with<R: Send>(
    limit: Option<usize>,
    trials: usize,
    f: impl Fn(usize) -> R + Send + Sync,
) -> Vec<R> {
    match limit {
        Some(0) | Some(1) => (0..trials).map(f).collect(),
        Some(cap) => rayon::ThreadPoolBuilder::new()
            .num_threads(cap)
            .build()
            .expect("thread pool")
            .install(|| (0..trials).into_par_iter().map(f).collect()),
        None => (0..trials).into_par_iter().map(f).collect(),
    }
}

/// Aggregated outcome of one cell's trial batch.
#[derive(Debug, Clone, Copy)]
pub struct CellOutcome {
    pub trials: usize,
    pub mean_residual: f64,
    pub min_residual: f64,
    pub max_residual: f64,
    pub mean_fastpath_residual: Option<f64>,
    pub mean_solver_seconds: f64,
    pub mean_oracle_seconds: f64,
}

struct TrialOutcome {
    residual: f64,
    fastpath_residual: Option<f64>,
    solver_seconds: f64,
    oracle_seconds: f64,
}

fn cell_domain(cell: &CellSpec, what: &str) -> String {
    format!("{what}/{}x{}/r{}/s{}", cell.m, cell.n, cell.r, cell.s)
}

fn run_one_trial<T: Scalar + GesddScalar>(
    cell: &CellSpec,
    base_seed: u64,
    trial: usize,
    zero_tol_factor: f64,
) -> Result<TrialOutcome, spi_solve::Error> {
    let spec = GeneratorSpec::new(
        cell.m,
        cell.n,
        cell.r,
        cell.s,
        derive_seed(base_seed, &cell_domain(cell, "matrix"), trial as u64),
    )?;
    let a = generate_spi::<T>(&spec)?;
    let mut stream =
        NormalStream::for_domain(base_seed, &cell_domain(cell, "rhs"), trial as u64);
    let (_, b) = random_rhs(&a, &mut stream);

    let t0 = Instant::now();
    let rep = solve_spi(&a, &b, zero_tol_factor)?;
    let solver_seconds = t0.elapsed().as_secs_f64();

    let t1 = Instant::now();
    let x_star = oracle::pinv_solve(&a, &b, oracle::default_rank_tol(cell.m, cell.n))?;
    let oracle_seconds = t1.elapsed().as_secs_f64();

    let residual = diff_norm(&rep.x, &x_star);
    let fastpath_residual = if cell.s == 1.0 {
        let fast = solve_partial_isometry(&a, &b)?;
        Some(diff_norm(&fast, &x_star))
    } else {
        None
    };

    Ok(TrialOutcome {
        residual,
        fastpath_residual,
        solver_seconds,
        oracle_seconds,
    })
}

fn diff_norm<T: Scalar>(x: &DenseVector<T>, y: &DenseVector<T>) -> f64 {
    x.iter()
        .zip(y.iter())
        .map(|(&a, &b)| (a - b).abs_sq())
        .sum::<f64>()
        .sqrt()
}

/// Runs `trials` seeded generate -> solve -> oracle comparisons for one
/// cell and aggregates the residual statistics.
pub fn run_cell<T: Scalar + GesddScalar>(
    cell: &CellSpec,
    trials: usize,
    base_seed: u64,
    zero_tol_factor: f64,
) -> Result<CellOutcome, CliError> {
    assert!(trials >= 1, "trials must be >= 1");
    let results = run_trials(trials, |i| run_one_trial::<T>(cell, base_seed, i, zero_tol_factor));

    let mut outcomes = Vec::with_capacity(trials);
    for r in results {
        outcomes.push(r.map_err(CliError::Core)?);
    }

    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    let mut max: f64 = 0.0;
    let mut fast_sum = 0.0;
    let mut fast_count = 0usize;
    let mut solver_s = 0.0;
    let mut oracle_s = 0.0;
    for o in &outcomes {
        sum += o.residual;
        min = min.min(o.residual);
        max = max.max(o.residual);
        if let Some(f) = o.fastpath_residual {
            fast_sum += f;
            fast_count += 1;
        }
        solver_s += o.solver_seconds;
        oracle_s += o.oracle_seconds;
    }
    let nt = trials as f64;
    Ok(CellOutcome {
        trials,
        mean_residual: sum / nt,
        min_residual: min,
        max_residual: max,
        mean_fastpath_residual: (fast_count > 0).then(|| fast_sum / fast_count as f64),
        mean_solver_seconds: solver_s / nt,
        mean_oracle_seconds: oracle_s / nt,
    })
}

/// Configuration for the table-reproduction command.
#[derive(Debug, Clone)]
pub struct ReproConfig {
    pub fields: Vec<Field>,
    pub trials: usize,
    pub seed: u64,
    pub zero_tol_factor: f64,
    pub long: bool,
}

/// Runs the residual tables for every configured field, returning the
/// report plus a rendered text table. Cells that fail (oracle
/// non-convergence) are marked in both, and the run continues.
pub fn run_repro_tables(cfg: &ReproConfig) -> (BenchReportJson, String) {
    let grid = if cfg.long { full_grid() } else { desk_grid() };
    run_repro_tables_on(&grid, cfg)
}

/// [`run_repro_tables`] over an explicit cell grid.
pub fn run_repro_tables_on(grid: &[CellSpec], cfg: &ReproConfig) -> (BenchReportJson, String) {
    let mut records = Vec::new();
    let mut rendered = String::new();

    for &field in &cfg.fields {
        let mut outcomes = Vec::new();
        for cell in grid {
            eprintln!(
                "repro-tables: {field} {}x{} r={} s={} ({} trials)...",
                cell.m, cell.n, cell.r, cell.s, cfg.trials
            );
            let t0 = Instant::now();
            let outcome = match field {
                Field::Real => run_cell::<f64>(cell, cfg.trials, cfg.seed, cfg.zero_tol_factor),
                Field::Complex => {
                    run_cell::<Complex64>(cell, cfg.trials, cfg.seed, cfg.zero_tol_factor)
                }
            };
            eprintln!("repro-tables:   done in {:.1} s", t0.elapsed().as_secs_f64());
            records.push(cell_record(cell, field, cfg.trials, cfg.seed, &outcome));
            outcomes.push(outcome);
        }
        rendered.push_str(&render_table(field, grid, &outcomes, cfg.trials));
        rendered.push('\n');
    }

    let report = BenchReportJson {
        schema: BENCH_REPORT_SCHEMA.to_string(),
        command: "repro-tables".to_string(),
        rng_id: RNG_ID.to_string(),
        timing: TimingMeta {
            repeats: cfg.trials,
            warmup: 0,
            statistic: "mean".to_string(),
        },
        records,
    };
    (report, rendered)
}

fn cell_record(
    cell: &CellSpec,
    field: Field,
    trials: usize,
    seed: u64,
    outcome: &Result<CellOutcome, CliError>,
) -> BenchRecordJson {
    let base = BenchRecordJson {
        m: cell.m,
        n: cell.n,
        r: cell.r,
        s: cell.s,
        field: field.as_str().to_string(),
        trials,
        seed,
        rng_id: RNG_ID.to_string(),
        mean_residual: None,
        min_residual: None,
        max_residual: None,
        mean_fastpath_residual: None,
        wall_time_solver: 0.0,
        wall_time_oracle: None,
        time_ratio_vs_prev: None,
        error: None,
    };
    match outcome {
        Ok(o) => BenchRecordJson {
            mean_residual: Some(o.mean_residual),
            min_residual: Some(o.min_residual),
            max_residual: Some(o.max_residual),
            mean_fastpath_residual: o.mean_fastpath_residual,
            wall_time_solver: o.mean_solver_seconds,
            wall_time_oracle: Some(o.mean_oracle_seconds),
            ..base
        },
        Err(e) => BenchRecordJson {
            error: Some(e.to_string()),
            ..base
        },
    }
}

fn render_table(
    field: Field,
    grid: &[CellSpec],
    outcomes: &[Result<CellOutcome, CliError>],
    trials: usize,
) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "field: {field}   (mean of ||x - x*||_2 over {trials} trials, rng: {RNG_ID})\n"
    ));
    let cell_w = 14;
    let label_w = 15;
    let row = |label: &str, values: Vec<String>| {
        let mut line = format!("{label:<label_w$}");
        for v in values {
            line.push_str(&format!("{v:>cell_w$}"));
        }
        line.push('\n');
        line
    };
    out.push_str(&row(
        "s",
        grid.iter().map(|c| format!("{}", c.s)).collect(),
    ));
    out.push_str(&row(
        "size",
        grid.iter().map(|c| format!("{}x{}", c.m, c.n)).collect(),
    ));
    out.push_str(&row(
        "r",
        grid.iter().map(|c| format!("{}", c.r)).collect(),
    ));
    let fmt_res = |o: &Result<CellOutcome, CliError>, f: fn(&CellOutcome) -> f64| match o {
        Ok(o) => format!("{:.2e}", f(o)),
        Err(_) => "oracle-fail".to_string(),
    };
    out.push_str(&row(
        "mean|x-x*|",
        outcomes.iter().map(|o| fmt_res(o, |c| c.mean_residual)).collect(),
    ));
    out.push_str(&row(
        "min|x-x*|",
        outcomes.iter().map(|o| fmt_res(o, |c| c.min_residual)).collect(),
    ));
    out.push_str(&row(
        "max|x-x*|",
        outcomes.iter().map(|o| fmt_res(o, |c| c.max_residual)).collect(),
    ));
    out
}

/// Ladder shape for the timing benchmark.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderMode {
    /// Double m at fixed n: time should double.
    Rows,
    /// Double both m and n: time should quadruple.
    Both,
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub mode: LadderMode,
    pub m_start: usize,
    pub n_start: usize,
    pub doublings: usize,
    pub r: usize,
    pub s: f64,
    pub repeats: usize,
    pub warmup: usize,
    pub seed: u64,
    pub zero_tol_factor: f64,
    pub field: Field,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            mode: LadderMode::Rows,
            m_start: 2000,
            n_start: 1000,
            doublings: 2,
            r: 50,
            s: 1.0,
            repeats: 5,
            warmup: 1,
            seed: 0,
            zero_tol_factor: spi_solve::solver::DEFAULT_ZERO_TOL_FACTOR,
            field: Field::Real,
        }
    }
}

pub fn ladder_sizes(cfg: &BenchConfig) -> Vec<(usize, usize)> {
    (0..=cfg.doublings)
        .map(|k| match cfg.mode {
            LadderMode::Rows => (cfg.m_start << k, cfg.n_start),
            LadderMode::Both => (cfg.m_start << k, cfg.n_start << k),
        })
        .collect()
}

/// Times `solve_spi` over the ladder. Generation and the oracle are
/// excluded; the matrix is resident in memory, one warm-up solve runs
/// first, and the median of the repeats is reported per size.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchReportJson, CliError> {
    match cfg.field {
        Field::Real => run_bench_typed::<f64>(cfg),
        Field::Complex => run_bench_typed::<Complex64>(cfg),
    }
}

fn run_bench_typed<T: Scalar + GesddScalar>(
    cfg: &BenchConfig,
) -> Result<BenchReportJson, CliError> {
    if cfg.repeats < 1 {
        return Err(CliError::Usage("bench needs repeats >= 1".into()));
    }
    let mut records: Vec<BenchRecordJson> = Vec::new();
    let mut prev_median: Option<f64> = None;

    for (m, n) in ladder_sizes(cfg) {
        let cell = CellSpec {
            m,
            n,
            r: cfg.r.min(m).min(n),
            s: cfg.s,
        };
        let spec = GeneratorSpec::new(
            cell.m,
            cell.n,
            cell.r,
            cell.s,
            derive_seed(cfg.seed, &cell_domain(&cell, "matrix"), 0),
        )?;
        let a = generate_spi::<T>(&spec)?;
        let mut stream = NormalStream::for_domain(cfg.seed, &cell_domain(&cell, "rhs"), 0);
        let (_, b) = random_rhs(&a, &mut stream);

        for _ in 0..cfg.warmup {
            let _ = solve_spi(&a, &b, cfg.zero_tol_factor)?;
        }
        let mut times = Vec::with_capacity(cfg.repeats);
        let mut last = None;
        for _ in 0..cfg.repeats {
            let t0 = Instant::now();
            let rep = solve_spi(&a, &b, cfg.zero_tol_factor)?;
            times.push(t0.elapsed().as_secs_f64());
            last = Some(rep);
        }
        times.sort_by(f64::total_cmp);
        let median = times[times.len() / 2];

        let fastpath = if cell.s == 1.0 {
            let fast = solve_partial_isometry(&a, &b)?;
            let rep = last.expect("at least one repeat");
            Some(diff_norm(&fast, &rep.x))
        } else {
            None
        };

        records.push(BenchRecordJson {
            m: cell.m,
            n: cell.n,
            r: cell.r,
            s: cell.s,
            field: cfg.field.as_str().to_string(),
            trials: cfg.repeats,
            seed: cfg.seed,
            rng_id: RNG_ID.to_string(),
            mean_residual: None,
            min_residual: None,
            max_residual: None,
            mean_fastpath_residual: fastpath,
            wall_time_solver: median,
            wall_time_oracle: None,
            time_ratio_vs_prev: prev_median.map(|p| median / p),
            error: None,
        });
        prev_median = Some(median);
    }

    Ok(BenchReportJson {
        schema: BENCH_REPORT_SCHEMA.to_string(),
        command: "bench".to_string(),
        rng_id: RNG_ID.to_string(),
        timing: TimingMeta {
            repeats: cfg.repeats,
            warmup: cfg.warmup,
            statistic: "median".to_string(),
        },
        records,
    })
}
