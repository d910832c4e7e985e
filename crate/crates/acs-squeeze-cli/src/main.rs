//! Command-line front end for the spin-metrology toolkit: single-state
//! squeezing reports, global metric optimization, J-sweeps, Ramsey phase
//! scans, inverse-J curve fits, and canned table/figure reproductions.
//!
//! Every parameter can come from flags or from a `key=value` config file
//! (`--config`); flags win. Validation failures exit with status 2 and a
//! single-line diagnostic on stderr. Output files are written atomically
//! (temp file + rename), so a failed run never leaves a partial artifact.

mod commands;
mod config;
mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// One-line failure carrying the diagnostic for exit status 2.
#[derive(Debug)]
pub struct CliError(pub String);

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<acs_squeeze::Error> for CliError {
    fn from(e: acs_squeeze::Error) -> Self {
        CliError(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[derive(Parser)]
#[command(
    name = "acs-squeeze",
    about = "Spin squeezing and Ramsey phase-estimation toolkit",
    disable_version_flag = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every squeezing metric for one superposition state (JSON).
    Report(ReportArgs),
    /// Globally minimize one metric over the state family (JSON).
    Optimize(OptimizeArgs),
    /// Minimize one metric for each 2J in a range (CSV).
    Sweep(SweepArgs),
    /// Scan Ramsey phase uncertainty over a phase grid (CSV).
    Ramsey(RamseyArgs),
    /// Least-squares fit of tabulated (J, value) points in powers of 1/J.
    Fit(FitArgs),
    /// Re-derive the minimum-squeezing tables (CSV, deterministic per seed).
    ReproduceTables(TablesArgs),
    /// Emit the scaling-curve and phase-comparison figure data (CSV).
    Figure(FigureArgs),
}

#[derive(Args)]
pub struct ReportArgs {
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Twice the total spin (N = 2J atoms).
    #[arg(long = "two-j")]
    two_j: Option<i64>,
    /// Polar angle of branch 1 (radians).
    #[arg(long)]
    theta1: Option<f64>,
    /// Polar angle of branch 2 (radians).
    #[arg(long)]
    theta2: Option<f64>,
    /// Azimuth of branch 2 (radians; branch 1 sits at azimuth 0).
    #[arg(long)]
    phi: Option<f64>,
    /// Relative phase between branches (radians).
    #[arg(long = "phi-r")]
    phi_r: Option<f64>,
    /// Re-evaluate the input block of a previously written report.
    #[arg(long = "from-file")]
    from_file: Option<PathBuf>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct OptimizeArgs {
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Twice the total spin (N = 2J atoms).
    #[arg(long = "two-j")]
    two_j: Option<i64>,
    /// Metric name: sorensen-x|y|z, wineland-x|y|z, wineland-min,
    /// planar-xy|yz|zx, or phase-uncertainty:<phase>.
    #[arg(long)]
    metric: Option<String>,
    /// Master seed for the multi-start pattern (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of local restarts (default 200).
    #[arg(long)]
    restarts: Option<usize>,
    /// Objective-evaluation budget per restart (default 2000).
    #[arg(long = "max-evals")]
    max_evals: Option<usize>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct SweepArgs {
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Smallest 2J in the sweep (default 1).
    #[arg(long = "min-two-j")]
    min_two_j: Option<i64>,
    /// Largest 2J in the sweep.
    #[arg(long = "max-two-j")]
    max_two_j: Option<i64>,
    /// Metric name (see `optimize`).
    #[arg(long)]
    metric: Option<String>,
    /// Master seed; each 2J gets an independent derived seed (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of local restarts per 2J (default 200).
    #[arg(long)]
    restarts: Option<usize>,
    /// Objective-evaluation budget per restart (default 2000).
    #[arg(long = "max-evals")]
    max_evals: Option<usize>,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct RamseyArgs {
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Twice the total spin (N = 2J atoms).
    #[arg(long = "two-j")]
    two_j: Option<i64>,
    /// Polar angle of branch 1 (radians).
    #[arg(long)]
    theta1: Option<f64>,
    /// Polar angle of branch 2 (radians).
    #[arg(long)]
    theta2: Option<f64>,
    /// Azimuth of branch 2 (radians).
    #[arg(long)]
    phi: Option<f64>,
    /// Relative phase between branches (radians).
    #[arg(long = "phi-r")]
    phi_r: Option<f64>,
    /// Smallest accumulated phase in the scan (default 0).
    #[arg(long = "phi-min")]
    phi_min: Option<f64>,
    /// Largest accumulated phase in the scan (default 0.5).
    #[arg(long = "phi-max")]
    phi_max: Option<f64>,
    /// Number of grid points, endpoints included (default 101).
    #[arg(long = "phi-steps")]
    phi_steps: Option<usize>,
    /// Skip the per-point classical Fisher bound column.
    #[arg(long = "no-fisher")]
    no_fisher: bool,
    /// Output CSV path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
pub struct FitArgs {
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input CSV of (J, value) points; accepts j/two_j and value/best_value
    /// header names, or two bare numeric columns.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Comma-separated basis degrees d for (1/J)^d, e.g. 0,2.
    #[arg(long)]
    degrees: Option<String>,
    /// Output JSON path (stdout when omitted).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Optional per-point CSV (j, value, fitted_value, residual).
    #[arg(long)]
    residuals: Option<PathBuf>,
}

#[derive(Args)]
pub struct TablesArgs {
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Largest 2J row to include (default 20).
    #[arg(long = "max-two-j")]
    max_two_j: Option<i64>,
    /// Master seed (default 0); identical seeds give identical bytes.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of local restarts per row (default 200).
    #[arg(long)]
    restarts: Option<usize>,
    /// Objective-evaluation budget per restart (default 2000).
    #[arg(long = "max-evals")]
    max_evals: Option<usize>,
    /// Directory for table1.csv and table2.csv (default '.').
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum FigureKind {
    /// Directional squeezing minima vs J with quadratic/cubic fits.
    Fig1,
    /// Planar squeezing minima vs J with fits.
    Fig2,
    /// Scaled Ramsey phase uncertainty for four reference states at J = 10.
    Fig3,
}

#[derive(Args)]
pub struct FigureArgs {
    /// Which figure's data to emit.
    kind: FigureKind,
    /// Config file with key=value lines ('#' comments).
    #[arg(long)]
    config: Option<PathBuf>,
    /// Master seed for the optimizer runs (default 0).
    #[arg(long)]
    seed: Option<u64>,
    /// Number of local restarts per optimization (default 200).
    #[arg(long)]
    restarts: Option<usize>,
    /// Objective-evaluation budget per restart (default 2000).
    #[arg(long = "max-evals")]
    max_evals: Option<usize>,
    /// Smallest phase in the fig3 scan (default 1e-4).
    #[arg(long = "phi-min")]
    phi_min: Option<f64>,
    /// Largest phase in the fig3 scan (default 1.0).
    #[arg(long = "phi-max")]
    phi_max: Option<f64>,
    /// Number of fig3 grid points (default 200).
    #[arg(long = "phi-steps")]
    phi_steps: Option<usize>,
    /// Output directory (default '.').
    #[arg(long = "out-dir")]
    out_dir: Option<PathBuf>,
}

/// Applies the ACS_SQUEEZE_THREADS cap before any parallel work starts.
fn init_thread_pool() -> CliResult<()> {
    let Some(raw) = std::env::var_os("ACS_SQUEEZE_THREADS") else {
        return Ok(());
    };
    let text = raw.to_string_lossy();
    let n: usize = text
        .trim()
        .parse()
        .ok()
        .filter(|&n| n >= 1)
        .ok_or_else(|| {
            CliError(format!(
                "ACS_SQUEEZE_THREADS must be a positive integer, got '{text}'"
            ))
        })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError(format!("cannot configure the thread pool: {e}")))
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Report(args) => commands::report::run(args),
        Command::Optimize(args) => commands::optimize::run(args),
        Command::Sweep(args) => commands::sweep::run(args),
        Command::Ramsey(args) => commands::ramsey::run(args),
        Command::Fit(args) => commands::fit::run(args),
        Command::ReproduceTables(args) => commands::tables::run(args),
        Command::Figure(args) => commands::figure::run(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_thread_pool().and_then(|()| run(cli)) {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}
