mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use logbm_core::arith::Backend;
use logbm_core::suite::CheckName;

use crate::output::CliError;

/// Exit codes: 0 holds/equality, 1 other failure, 2 violated,
/// 3 unsupported input, 4 parse error.
#[derive(Parser, Debug)]
#[command(name = "logbm", version, about = "Exact and numerical checks of mixed-volume inequalities")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Arithmetic backend for polytopal bodies.
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative band for float verdicts.
    #[arg(long)]
    tolerance: Option<f64>,
    /// Directory for report files.
    #[arg(long, default_value = "logbm-out")]
    out: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one named check on a bodies file.
    Check {
        /// One of: bm, mink1, mink2, local-logbm, logmink, indstep,
        /// alexandrov-eq, superlich, bochner, geomean.
        name: String,
        file: PathBuf,
        #[command(flatten)]
        common: Common,
        /// Sphere quadrature level for smooth checks in R³.
        #[arg(long)]
        level: Option<u32>,
        /// Circle grid size for smooth checks in the plane.
        #[arg(long)]
        grid: Option<usize>,
        /// Random directions sampled for the geometric-mean bounds.
        #[arg(long)]
        budget: Option<usize>,
    },
    /// Seeded random inequality suite.
    RandomSuite {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        /// Dimension or range, e.g. `3` or `3..4`.
        #[arg(long, default_value = "3..4")]
        dim: String,
        #[arg(long, default_value_t = 6)]
        max_generators: usize,
        #[arg(long, default_value_t = 5)]
        bound: i64,
        /// Comma-separated check names.
        #[arg(long, value_delimiter = ',', value_parser = parse_check)]
        checks: Option<Vec<CheckName>>,
    },
    /// Direct-sum certificate or refutation for the equality case.
    Certify {
        file: PathBuf,
        #[arg(long, default_value = "logbm-out")]
        out: PathBuf,
    },
    /// Planar Hilbert-operator spectrum of a smooth K as CSV.
    Spectrum {
        file: PathBuf,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value = "logbm-out")]
        out: PathBuf,
    },
    /// Bochner residual against quadrature level as CSV.
    Bochner {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "3,4,5,6")]
        levels: Vec<u32>,
        #[arg(long, default_value = "logbm-out")]
        out: PathBuf,
    },
    /// Print a computed measure of K as JSON.
    Measure {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "surface")]
        kind: commands::MeasureKind,
    },
}

fn parse_backend(s: &str) -> Result<Backend, String> {
    s.parse().map_err(|e: logbm_core::Error| e.to_string())
}

fn parse_check(s: &str) -> Result<CheckName, String> {
    s.parse().map_err(|e: logbm_core::Error| e.to_string())
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("LOGBM_THREADS") else { return Ok(()) };
    let n: usize = v
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("LOGBM_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Other(e.to_string()))
}

fn run(cli: Cli) -> Result<u8, CliError> {
    init_threads()?;
    match cli.command {
        Command::Check { name, file, common, level, grid, budget } => {
            let name: CheckName = name
                .parse()
                .map_err(|_| logbm_core::Error::Unsupported(format!("unknown check `{name}`")))?;
            commands::check(name, &file, &common, level, grid, budget)
        }
        Command::RandomSuite { common, trials, dim, max_generators, bound, checks } => {
            commands::random_suite(&common, trials, &dim, max_generators, bound, checks)
        }
        Command::Certify { file, out } => commands::certify(&file, &out),
        Command::Spectrum { file, grid, out } => commands::spectrum(&file, grid, &out),
        Command::Bochner { file, levels, out } => commands::bochner(&file, &levels, &out),
        Command::Measure { file, kind } => commands::measure(&file, kind),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("logbm: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
