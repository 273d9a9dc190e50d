//! `threeagent`: steady state, impulse responses, multipliers, determinacy
//! scans and self-verification from the command line.

mod commands;
mod manifest;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use threeagent_core::ModelError;

#[derive(Parser, Debug)]
#[command(name = "threeagent", version, about = "Three-agent New Keynesian model toolkit")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// TOML file with `key = value` parameter overrides.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Economy: three, two or portability.
    #[arg(long, global = true)]
    pub variant: Option<String>,
    #[arg(long = "fiscal-mode", global = true, value_enum)]
    pub fiscal_mode: Option<FiscalArg>,
    #[arg(long = "phi-pi", global = true, allow_negative_numbers = true)]
    pub phi_pi: Option<f64>,
    #[arg(long = "gamma-t", global = true, allow_negative_numbers = true)]
    pub gamma_t: Option<f64>,
    /// Output directory.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum FiscalArg {
    Nominal,
    Real,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum UnitsArg {
    /// Percent of steady-state output.
    Output,
    /// Percent of steady-state spending.
    Level,
}

#[derive(Subcommand, Debug, Clone)]
pub enum Command {
    /// Print the steady state.
    Steady,
    /// Impulse responses to one shock.
    Irf {
        /// tech, fiscal, monetary or transfer.
        #[arg(long)]
        shock: String,
        /// Signed size in percent; defaults to the standard experiment.
        #[arg(long, allow_negative_numbers = true)]
        size: Option<f64>,
        /// Overrides the sign of the size (+1 or -1).
        #[arg(long, allow_negative_numbers = true)]
        sign: Option<i8>,
        #[arg(long, default_value_t = threeagent_core::experiments::DEFAULT_HORIZON)]
        horizon: usize,
        /// Units of a spending shock.
        #[arg(long, value_enum, default_value_t = UnitsArg::Output)]
        units: UnitsArg,
    },
    /// Impact and cumulative spending multipliers for the four policy mixes.
    Multipliers {
        #[arg(long, default_value_t = threeagent_core::experiments::MULTIPLIER_HORIZON)]
        horizon: usize,
    },
    /// Determinacy map over two parameters.
    Scan {
        /// Axis as NAME:MIN:MAX:STEPS; give exactly two, or none for the
        /// default policy grid.
        #[arg(long)]
        grid: Vec<String>,
    },
    /// Run the self-check battery, or re-run a manifest and compare hashes.
    Verify {
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Debug)]
pub enum CliError {
    Model(ModelError),
    Io(String),
    Usage(String),
    ChecksFailed(usize),
    Mismatch(String),
}

impl From<ModelError> for CliError {
    fn from(e: ModelError) -> Self {
        CliError::Model(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Model(e) if e.is_validation() => 2,
            CliError::Model(ModelError::NotDeterminate(_)) => 3,
            CliError::Model(_) => 4,
            CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::ChecksFailed(_) | CliError::Mismatch(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Model(e) => write!(f, "{e}"),
            CliError::Io(m) | CliError::Usage(m) | CliError::Mismatch(m) => f.write_str(m),
            CliError::ChecksFailed(n) => write!(f, "{n} check(s) failed"),
        }
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse_from(&argv);
    match commands::run(&cli, &argv[1..]) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
