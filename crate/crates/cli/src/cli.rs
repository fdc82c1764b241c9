//! Argument parsing and command dispatch.

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;

use spi_solve::generator::{
    derive_seed, gaussian_vector, generate_block_diagonal_with, generate_spi_with,
    BlockGeneratorSpec, GeneratorSpec, NormalStream, QrMode, RNG_ID,
};
use spi_solve::kernels::matvec;
use spi_solve::solver::{
    solve_spi, verify_spi, verify_spi_with_scale, DEFAULT_ZERO_TOL_FACTOR,
};
use spi_solve::{DenseMatrix, DenseVector, Field, Scalar};

use crate::error::CliError;
use crate::harness::{self, BenchConfig, LadderMode, ReproConfig};
use crate::mm::{self, MatrixFile, VectorFile};
use crate::reports::{
    self, BlockSpecJson, GenerateSidecar, GeneratedFiles, SolveReport, SolveTimings,
    VerifyReportJson, CONSISTENCY_WARN_THRESHOLD, GENERATE_SIDECAR_SCHEMA, SOLVE_REPORT_SCHEMA,
    VERIFY_REPORT_SCHEMA,
};

/// Least-squares tools for scaled partial-isometric linear systems.
///
/// Exit codes: 0 success, 2 contract violation, 3 file-format error,
/// 4 I/O error, 5 oracle failure.
#[derive(Debug, Parser)]
#[command(name = "spi-solve", version, about, max_term_width = 100)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a random matrix (or block-diagonal matrix) with equal
    /// non-zero singular values, in Matrix Market array format.
    Generate(GenerateArgs),
    /// Solve A x = b for a scaled partial-isometric A in O(mn).
    Solve(SolveArgs),
    /// Check the scaled-partial-isometry property by randomized probing.
    Verify(VerifyArgs),
    /// Time the solver over a ladder of doubling sizes.
    Bench(BenchArgs),
    /// Reproduce the residual tables: generate -> solve -> SVD oracle,
    /// averaged over seeded trials.
    ReproTables(ReproArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldSelect {
    Real,
    Complex,
    Both,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Rows (single-matrix mode).
    #[arg(long)]
    pub m: Option<usize>,
    /// Columns (single-matrix mode).
    #[arg(long)]
    pub n: Option<usize>,
    /// Rank (single-matrix mode).
    #[arg(long)]
    pub r: Option<usize>,
    /// The common non-zero singular value (single-matrix mode).
    #[arg(long)]
    pub s: Option<f64>,
    /// Block spec `M,N,R,S`; repeat for several blocks. Block seeds are
    /// derived from --seed.
    #[arg(long = "block", value_name = "M,N,R,S")]
    pub blocks: Vec<String>,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output prefix; writes <out>.mtx and <out>.json, plus <out>.t.mtx
    /// and <out>.b.mtx with --with-rhs.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write t (standard normal) and b = A t.
    #[arg(long)]
    pub with_rhs: bool,
    /// Build the orthogonal factors from full square QR instead of the
    /// equivalent economy form.
    #[arg(long)]
    pub full_qr: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Matrix file (Matrix Market array, real or complex).
    #[arg(long)]
    pub matrix: PathBuf,
    /// Right-hand side file (m x 1 array).
    #[arg(long)]
    pub rhs: PathBuf,
    /// Output prefix; writes <out>.x.mtx and <out>.json.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL_FACTOR)]
    pub zero_tol_factor: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub matrix: PathBuf,
    #[arg(long, default_value_t = 8)]
    pub probes: usize,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Use this alpha^2 instead of estimating it from a probe.
    #[arg(long)]
    pub alpha_sq: Option<f64>,
    /// Optional JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    /// Double m at fixed n.
    Rows,
    /// Double both m and n.
    Both,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_enum, default_value_t = ModeArg::Rows)]
    pub mode: ModeArg,
    /// Smallest ladder row count.
    #[arg(long, default_value_t = 2000)]
    pub m: usize,
    /// Column count (fixed in rows mode, smallest in both mode).
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
    /// Number of doublings after the first size.
    #[arg(long, default_value_t = 2)]
    pub doublings: usize,
    #[arg(long, default_value_t = 50)]
    pub r: usize,
    #[arg(long, default_value_t = 1.0)]
    pub s: f64,
    /// Timed repeats per size (median is reported) after one warm-up.
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[arg(long, value_enum, default_value_t = FieldArg::Real)]
    pub field: FieldArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL_FACTOR)]
    pub zero_tol_factor: f64,
    /// Optional JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReproArgs {
    #[arg(long, value_enum, default_value_t = FieldSelect::Both)]
    pub field: FieldSelect,
    #[arg(long, default_value_t = 150)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = DEFAULT_ZERO_TOL_FACTOR)]
    pub zero_tol_factor: f64,
    /// Run the full-scale grid (10x the default sizes).
    #[arg(long)]
    pub long: bool,
    /// Optional JSON report path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Bench(args) => cmd_bench(args),
        Command::ReproTables(args) => cmd_repro_tables(args),
    }
}

fn suffixed(prefix: &Path, suffix: &str) -> PathBuf {
    PathBuf::from(format!("{}.{suffix}", prefix.display()))
}

fn parse_block_spec(text: &str, seed: u64, index: u64) -> Result<GeneratorSpec, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Usage(format!(
            "--block expects M,N,R,S, got '{text}'"
        )));
    }
    let parse_usize = |p: &str, what: &str| {
        p.parse::<usize>()
            .map_err(|_| CliError::Usage(format!("--block {what} '{p}' is not a positive integer")))
    };
    let m = parse_usize(parts[0], "M")?;
    let n = parse_usize(parts[1], "N")?;
    let r = parse_usize(parts[2], "R")?;
    let s = parts[3]
        .parse::<f64>()
        .map_err(|_| CliError::Usage(format!("--block S '{}' is not a number", parts[3])))?;
    GeneratorSpec::new(m, n, r, s, derive_seed(seed, "block", index)).map_err(CliError::Core)
}

fn cmd_generate(args: GenerateArgs) -> Result<(), CliError> {
    match Field::from(args.field) {
        Field::Real => generate_typed::<f64>(&args),
        Field::Complex => generate_typed::<Complex64>(&args),
    }
}

fn generate_typed<T: Scalar>(args: &GenerateArgs) -> Result<(), CliError> {
    let mode = if args.full_qr {
        QrMode::Full
    } else {
        QrMode::Economy
    };

    let (a, blocks_json, kind) = if args.blocks.is_empty() {
        let (m, n, r, s) = match (args.m, args.n, args.r, args.s) {
            (Some(m), Some(n), Some(r), Some(s)) => (m, n, r, s),
            _ => {
                return Err(CliError::Usage(
                    "generate needs --m --n --r --s (or one --block per block)".into(),
                ))
            }
        };
        let spec = GeneratorSpec::new(m, n, r, s, args.seed)?;
        let a = generate_spi_with::<T>(&spec, mode)?;
        let json = vec![BlockSpecJson {
            m,
            n,
            r,
            s,
            seed: spec.seed,
        }];
        (a, json, "single")
    } else {
        if args.m.is_some() || args.n.is_some() || args.r.is_some() || args.s.is_some() {
            return Err(CliError::Usage(
                "--block conflicts with --m/--n/--r/--s".into(),
            ));
        }
        let specs = args
            .blocks
            .iter()
            .enumerate()
            .map(|(k, text)| parse_block_spec(text, args.seed, k as u64))
            .collect::<Result<Vec<_>, _>>()?;
        let json = specs
            .iter()
            .map(|sp| BlockSpecJson {
                m: sp.rows,
                n: sp.cols,
                r: sp.rank,
                s: sp.scale,
                seed: sp.seed,
            })
            .collect();
        let (dense, _) = generate_block_diagonal_with::<T>(&BlockGeneratorSpec::new(specs)?, mode)?;
        (dense, json, "block")
    };

    let matrix_path = suffixed(&args.out, "mtx");
    let comment = format!(
        " generated by spi-solve (field {}, seed {}, rng {})",
        T::FIELD,
        args.seed,
        RNG_ID
    );
    mm::write_matrix(&matrix_path, &a, &[&comment])?;

    let (t_path, b_path) = if args.with_rhs {
        let mut stream = NormalStream::for_domain(args.seed, "rhs", 0);
        let t = gaussian_vector::<T>(a.cols(), &mut stream);
        let b = matvec(&a, &t)?;
        let tp = suffixed(&args.out, "t.mtx");
        let bp = suffixed(&args.out, "b.mtx");
        mm::write_vector(&tp, &t, &[&comment])?;
        mm::write_vector(&bp, &b, &[&comment])?;
        (Some(tp), Some(bp))
    } else {
        (None, None)
    };

    let sidecar = GenerateSidecar {
        schema: GENERATE_SIDECAR_SCHEMA.to_string(),
        rng_id: RNG_ID.to_string(),
        field: T::FIELD.as_str().to_string(),
        seed: args.seed,
        kind: kind.to_string(),
        blocks: blocks_json,
        full_qr: args.full_qr,
        files: GeneratedFiles {
            matrix: matrix_path.display().to_string(),
            t: t_path.as_ref().map(|p| p.display().to_string()),
            rhs: b_path.as_ref().map(|p| p.display().to_string()),
        },
    };
    reports::write_json(&suffixed(&args.out, "json"), &sidecar)?;

    println!(
        "generated {}x{} {} matrix -> {}",
        a.rows(),
        a.cols(),
        T::FIELD,
        matrix_path.display()
    );
    Ok(())
}

fn cmd_solve(args: SolveArgs) -> Result<(), CliError> {
    let mat = mm::read_matrix(&args.matrix)?;
    let rhs = mm::read_vector(&args.rhs)?;
    match (mat, rhs) {
        (MatrixFile::Real(a), VectorFile::Real(b)) => solve_typed(&args, a, b),
        (MatrixFile::Real(_), VectorFile::Complex(_)) => Err(CliError::Usage(
            "right-hand side is complex but the matrix is real".into(),
        )),
        (MatrixFile::Complex(a), rhs) => solve_typed(&args, a, rhs.into_complex()),
    }
}

fn solve_typed<T: Scalar>(
    args: &SolveArgs,
    a: DenseMatrix<T>,
    b: DenseVector<T>,
) -> Result<(), CliError> {
    let t0 = Instant::now();
    let rep = solve_spi(&a, &b, args.zero_tol_factor)?;
    let solve_seconds = t0.elapsed().as_secs_f64();

    let x_path = suffixed(&args.out, "x.mtx");
    mm::write_vector(&x_path, &rep.x, &[" minimum-2-norm least-squares solution"])?;

    let warning = match rep.consistency {
        Some(c) if c > CONSISTENCY_WARN_THRESHOLD => Some(format!(
            "matrix does not look like a scaled partial isometry (consistency = {c:.3e}); \
             the least-squares guarantee does not apply"
        )),
        _ => None,
    };
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }

    let report = SolveReport {
        schema: SOLVE_REPORT_SCHEMA.to_string(),
        matrix: args.matrix.display().to_string(),
        rhs: args.rhs.display().to_string(),
        m: a.rows(),
        n: a.cols(),
        field: T::FIELD.as_str().to_string(),
        zero_tol_factor: args.zero_tol_factor,
        alpha_sq: rep.alpha_sq,
        consistency: rep.consistency,
        zeroed: rep.zeroed.iter().copied().collect(),
        warning,
        timings: SolveTimings { solve_seconds },
        solution: x_path.display().to_string(),
    };
    reports::write_json(&suffixed(&args.out, "json"), &report)?;

    println!(
        "solved {}x{} system in {:.3e} s; alpha_sq = {}, consistency = {}, zeroed = {}",
        a.rows(),
        a.cols(),
        solve_seconds,
        rep.alpha_sq.map_or("undefined".into(), |v| format!("{v:.6e}")),
        rep.consistency.map_or("n/a".into(), |v| format!("{v:.3e}")),
        rep.zeroed.len()
    );
    Ok(())
}

fn cmd_verify(args: VerifyArgs) -> Result<(), CliError> {
    let mat = mm::read_matrix(&args.matrix)?;
    match mat {
        MatrixFile::Real(a) => verify_typed(&args, a),
        MatrixFile::Complex(a) => verify_typed(&args, a),
    }
}

fn verify_typed<T: Scalar>(args: &VerifyArgs, a: DenseMatrix<T>) -> Result<(), CliError> {
    let rep = match args.alpha_sq {
        Some(asq) => verify_spi_with_scale(&a, args.probes, args.tol, args.seed, asq)?,
        None => verify_spi(&a, args.probes, args.tol, args.seed)?,
    };

    println!(
        "verify: {} (max probe deviation {:.3e} vs tol {:.1e}, alpha_sq = {:.6e}, {} probes)",
        if rep.pass { "PASS" } else { "FAIL" },
        rep.max_probe_deviation,
        rep.tol,
        rep.alpha_sq,
        rep.probes
    );

    if let Some(out) = &args.out {
        let report = VerifyReportJson {
            schema: VERIFY_REPORT_SCHEMA.to_string(),
            matrix: args.matrix.display().to_string(),
            m: a.rows(),
            n: a.cols(),
            field: T::FIELD.as_str().to_string(),
            probes_requested: args.probes,
            probes_used: rep.probes,
            tol: rep.tol,
            seed: args.seed,
            alpha_sq: rep.alpha_sq,
            max_probe_deviation: rep.max_probe_deviation,
            pass: rep.pass,
        };
        reports::write_json(out, &report)?;
    }
    Ok(())
}

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let cfg = BenchConfig {
        mode: match args.mode {
            ModeArg::Rows => LadderMode::Rows,
            ModeArg::Both => LadderMode::Both,
        },
        m_start: args.m,
        n_start: args.n,
        doublings: args.doublings,
        r: args.r,
        s: args.s,
        repeats: args.repeats,
        warmup: 1,
        seed: args.seed,
        zero_tol_factor: args.zero_tol_factor,
        field: args.field.into(),
    };
    let report = harness::run_bench(&cfg)?;

    println!("bench ({} field, median of {} repeats):", cfg.field, cfg.repeats);
    println!("{:>12} {:>14} {:>10}", "size", "median (s)", "ratio");
    for rec in &report.records {
        println!(
            "{:>12} {:>14.6} {:>10}",
            format!("{}x{}", rec.m, rec.n),
            rec.wall_time_solver,
            rec.time_ratio_vs_prev
                .map_or("-".to_string(), |r| format!("{r:.2}"))
        );
    }

    if let Some(out) = &args.out {
        reports::write_json(out, &report)?;
    }
    Ok(())
}

fn cmd_repro_tables(args: ReproArgs) -> Result<(), CliError> {
    if args.trials < 1 {
        return Err(CliError::Usage("repro-tables needs --trials >= 1".into()));
    }
    let fields = match args.field {
        FieldSelect::Real => vec![Field::Real],
        FieldSelect::Complex => vec![Field::Complex],
        FieldSelect::Both => vec![Field::Real, Field::Complex],
    };
    let cfg = ReproConfig {
        fields,
        trials: args.trials,
        seed: args.seed,
        zero_tol_factor: args.zero_tol_factor,
        long: args.long,
    };
    let (report, rendered) = harness::run_repro_tables(&cfg);
    print!("{rendered}");

    let failed: Vec<String> = report
        .records
        .iter()
        .filter_map(|r| {
            r.error
                .as_ref()
                .map(|e| format!("{} {}x{}: {e}", r.field, r.m, r.n))
        })
        .collect();
    if !failed.is_empty() {
        eprintln!("warning: {} cell(s) aborted: {}", failed.len(), failed.join("; "));
    }

    if let Some(out) = &args.out {
        reports::write_json(out, &report)?;
    }
    Ok(())
}
