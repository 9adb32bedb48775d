//! Command-line front end: `simulate`, `analyze` and `sweep`.
//!
//! Exit codes: 0 success, 2 configuration error, 3 internal error.

mod commands;
mod config;

pub use commands::{analyze, simulate, sweep, SimulationSummary, SWEEP_COLUMNS};
pub use config::{reference, ExperimentConfig};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Config(_) => 2,
            Self::Internal(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Internal(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "rodwave", version, about = "Simulate the generalized hyperelastic-rod equation and check blowup criteria")]
#[command(after_long_help = reference())]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Experiment config (TOML).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Seed for random profiles; overrides the config's `seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate the datum and track characteristics. Writes diagnostics.csv,
    /// traces.csv, snapshots/ and summary.json.
    #[command(after_long_help = reference())]
    Simulate(Common),
    /// Evaluate the blowup criteria. Writes certificates.json.
    #[command(after_long_help = reference())]
    Analyze(Common),
    /// Criteria and simulations over sweep_gamma x sweep_kappa x sweep_amplitude.
    /// Writes sweep.csv.
    #[command(after_long_help = reference())]
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Worker threads [default: available parallelism].
        #[arg(long)]
        jobs: Option<usize>,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Simulate(c) => simulate(&load(c)?, &c.out).map(|_| ()),
        Command::Analyze(c) => analyze(&load(c)?, &c.out).map(|_| ()),
        Command::Sweep { common, jobs } => {
            let jobs = match jobs {
                Some(0) => return Err(CliError::Config("--jobs: must be at least 1".into())),
                Some(j) => *j,
                None => std::thread::available_parallelism().map_or(1, |n| n.get()),
            };
            sweep(&load(common)?, &common.out, jobs)
        }
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
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
            eprintln!("rodwave: {e}");
            e.exit_code()
        }
    }
}
