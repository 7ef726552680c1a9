//! Command-line front end for `dynsamp`.
//!
//! Every subcommand reads one JSON config (`--config`) and writes its
//! artifacts into `--out`. CSV files carry only their data; the config hash,
//! seeds and every resolved default go into `provenance.json` next to them
//! and into the `provenance` block of each JSON artifact.
//!
//! Exit codes: 0 on success, 1 when the operation itself fails (for instance
//! rank-deficient bins without `--allow-partial`), 2 for config, file and
//! usage errors.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

mod commands;
pub mod config;
pub mod output;

#[derive(Debug, Parser)]
#[command(name = "dynsamp", version, about = "Dynamical sampling under convolution on the integer lattice")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct Common {
    /// JSON configuration for the subcommand; relative paths inside it
    /// resolve against its directory.
    #[arg(long, value_name = "PATH")]
    pub config: PathBuf,
    /// Output directory, created if missing.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Maximum number of worker threads [default: one per core]. Results do
    /// not depend on it.
    #[arg(long, value_name = "K")]
    pub threads: Option<usize>,
    /// Frequency grid size, overriding the config's `grid` (diagnose,
    /// frame-bounds analytic, density, noise-sweep).
    #[arg(long, value_name = "M")]
    pub grid: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Apply the convolution `steps` times to a signal.
    Evolve(Common),
    /// Collect (optionally noisy) space-time samples.
    Sample(Common),
    /// Recover a signal from sub-lattice samples.
    Reconstruct {
        #[command(flatten)]
        common: Common,
        /// Write the minimum-norm solution even when some bins are rank
        /// deficient.
        #[arg(long)]
        allow_partial: bool,
    },
    /// Per-frequency singular values and the completeness verdict.
    Diagnose(Common),
    /// Analytic or empirical frame bounds.
    FrameBounds(Common),
    /// Banach densities and the density certificate.
    Density(Common),
    /// Reconstruction error against noise level.
    NoiseSweep(Common),
    /// Lower frame bound of a finite location set against window width.
    Decay(Common),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad config, unreadable or malformed input file, bad flag.
    Config(String),
    /// The computation itself failed.
    Operation(String),
}

impl CliError {
    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Operation(m) => m,
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Operation(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Operation(m) => write!(f, "error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Evolve(c)
            | Command::Sample(c)
            | Command::Diagnose(c)
            | Command::FrameBounds(c)
            | Command::Density(c)
            | Command::NoiseSweep(c)
            | Command::Decay(c) => c,
            Command::Reconstruct { common, .. } => common,
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let common = cli.command.common();
    let work = || match &cli.command {
        Command::Evolve(c) => commands::evolve(c),
        Command::Sample(c) => commands::sample(c),
        Command::Reconstruct { common, allow_partial } => commands::reconstruct(common, *allow_partial),
        Command::Diagnose(c) => commands::diagnose(c),
        Command::FrameBounds(c) => commands::frame_bounds(c),
        Command::Density(c) => commands::density(c),
        Command::NoiseSweep(c) => commands::noise_sweep(c),
        Command::Decay(c) => commands::decay(c),
    };
    match common.threads {
        Some(0) => Err(CliError::Config("--threads must be >= 1".into())),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?
            .install(work),
        None => work(),
    }
}

/// Parses arguments, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("dynsamp: {e}");
            e.exit_code()
        }
    }
}
