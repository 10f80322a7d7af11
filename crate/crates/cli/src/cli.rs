use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::commands::{self, Context};
use crate::error::{CliError, EXIT_OK, EXIT_USAGE};

#[derive(Debug, Parser)]
#[command(
    name = "bnb-assess",
    version,
    about = "Simulate, measure and profile branch-and-bound runs"
)]
pub struct Cli {
    /// Experiment manifest (JSON).
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    /// Output directory; overrides the manifest's `output_dir`.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Replace the manifest's seed list with this single seed.
    #[arg(long, global = true, value_name = "K")]
    pub seed_override: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run every (instance, solver, core count, seed) of the manifest and
    /// write one trace file per run.
    Simulate,
    /// Compute measures for a set of trace files.
    Analyze(AnalyzeArgs),
    /// Build profile curves from a measures CSV and render them.
    Profile(ProfileArgs),
    /// Summarize a measures CSV per solver and core count.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Trace directories; defaults to the manifest's trace directories.
    #[arg(long = "traces", value_name = "DIR")]
    pub trace_dirs: Vec<PathBuf>,
    /// Measures to compute (comma separated); defaults to all.
    #[arg(long, value_delimiter = ',')]
    pub measures: Vec<String>,
    /// Relative gap tolerance for optimality.
    #[arg(long, default_value_t = 1e-6)]
    pub rel_tol: f64,
    /// Absolute gap tolerance for optimality.
    #[arg(long, default_value_t = 1e-9)]
    pub abs_tol: f64,
    /// Target relative gap for `time_to_gap`.
    #[arg(long, default_value_t = 0.01)]
    pub gap_target: f64,
    /// Horizon of the primal-dual integral; defaults to each run's time limit.
    #[arg(long)]
    pub pdi_horizon: Option<f64>,
    /// Output CSV; defaults to `<out>/measures.csv`.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProfileKind {
    Performance,
    Cumulative,
    Combined,
    Speedup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// Time to optimality, over runs solved at every core count.
    Wall,
    /// Primal-dual integral.
    Pdi,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[arg(value_enum)]
    pub kind: ProfileKind,
    /// Measures CSV; defaults to `<out>/measures.csv`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Measure to profile (not used by `speedup`).
    #[arg(long, default_value = "time_to_optimality")]
    pub measure: String,
    /// Basis of the speed-up curve.
    #[arg(long, value_enum, default_value_t = Basis::Wall)]
    pub basis: Basis,
    /// Keep instances that some solver failed on (ratio `inf`).
    #[arg(long)]
    pub include_timeouts: bool,
    /// Shift added to both sides of every performance ratio.
    #[arg(long, default_value_t = 0.0)]
    pub ratio_shift: f64,
    /// Logarithmic (base 2) x axis.
    #[arg(long)]
    pub log_x: bool,
    /// Only use runs with this many cores.
    #[arg(long)]
    pub cores: Option<u32>,
    /// Treat each (solver, core count) pair as its own curve.
    #[arg(long)]
    pub by_cores: bool,
    /// Shift of the geometric mean behind each speed-up point.
    #[arg(long, default_value_t = bnb_assess::aggregate::DEFAULT_TIME_SHIFT)]
    pub shift: f64,
    /// Core count the speed-up is measured against.
    #[arg(long, default_value_t = 1)]
    pub baseline: u32,
    /// Output path without extension; `.csv` and `.svg` are appended.
    #[arg(long)]
    pub output_prefix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Measures CSV; defaults to `<out>/measures.csv`.
    #[arg(long)]
    pub input: Option<PathBuf>,
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match dispatch(cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let ctx = Context::new(cli.manifest.as_deref(), cli.out, cli.seed_override)?;
    match cli.command {
        Command::Simulate => commands::simulate(&ctx).map(|_| ()),
        Command::Analyze(args) => commands::analyze(&ctx, &args).map(|_| ()),
        Command::Profile(args) => commands::profile(&ctx, &args).map(|_| ()),
        Command::Report(args) => commands::report(&ctx, &args).map(|_| ()),
    }
}
