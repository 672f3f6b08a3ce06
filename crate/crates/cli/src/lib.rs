//! `cavnet` command line: table reproduction, application classification,
//! feasibility sweeps and MAC simulation.

mod commands;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::run;
pub use scenario::{Feasibility, Scenario, Simulation, Sweep};

pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_COMPUTATION: u8 = 3;
pub const EXIT_IO: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("computation failed: {0}")]
    Computation(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> ExitCode {
        ExitCode::from(match self {
            CliError::Validation(_) => EXIT_VALIDATION,
            CliError::Computation(_) => EXIT_COMPUTATION,
            CliError::Io(_) => EXIT_IO,
        })
    }
}

impl From<cavnet::Error> for CliError {
    fn from(e: cavnet::Error) -> Self {
        use cavnet::Error as E;
        let msg = e.to_string();
        match e {
            E::InfiniteDelay | E::ZeroCapacity | E::TdmaCollision { .. } => CliError::Computation(msg),
            E::Io(_) | E::Csv(_) => CliError::Io(msg),
            _ => CliError::Validation(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(name = "cavnet", version, about = "V2V capacity model, CAV application registry and MAC simulator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Per-vehicle capacity and per-packet delay over the gap × lane grid.
    Tables(CommonArgs),
    /// Classify the application registry and recommend a paradigm.
    Classify(CommonArgs),
    /// Check application requirements against the model over the grid.
    Feasibility(CommonArgs),
    /// Simulate one road and compare with the model.
    Simulate(SimulateArgs),
    /// TDMA and contention against the model over the grid.
    Compare(CommonArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    /// Plain text table (classify only).
    Table,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON scenario file.
    #[arg(long)]
    pub scenario: Option<PathBuf>,
    /// Inter-vehicle gaps in meters, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub gaps: Option<Vec<f64>>,
    /// Lane counts, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub lanes: Option<Vec<u32>>,
    /// Transmission range = multiplier × gap, capped at the radio range.
    #[arg(long, value_name = "MULTIPLIER")]
    pub adaptive_range: Option<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Overrides the scenario's MAC.
    #[arg(long, value_enum)]
    pub mac: Option<MacArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MacArg {
    Tdma,
    Contention,
}
