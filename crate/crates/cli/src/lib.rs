//! Command-line front end: q sweeps to CSV, reconstruction from measured
//! coherences, invariant suites and SVG plots.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

pub mod plot;
pub mod reconstruct;
pub mod sweep;
pub mod validate;

pub use validate::Suite;

/// Formats a value with 12 significant digits in scientific notation.
pub fn sci(x: f64) -> String {
    format!("{x:.11e}")
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] causal_switch_core::Error),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}, row {row}: {message}")]
    Parse {
        path: PathBuf,
        row: usize,
        message: String,
    },
    #[error("{failed} of {total} checks failed")]
    ChecksFailed { failed: usize, total: usize },
}

impl CliError {
    /// 2 for usage errors, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "causal-switch",
    version,
    about = "Quantum switch capacity tools"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate switch and definite-order capacities over a q grid.
    Sweep(sweep::SweepArgs),
    /// Capacity rebuilt from a measurement file.
    Reconstruct(reconstruct::ReconstructArgs),
    /// Run invariant checks.
    Validate {
        #[arg(value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Render a sweep CSV as an SVG chart of log10(chi).
    Plot {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, value_name = "PATH")]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Csv,
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Sweep(args) => sweep::cmd_sweep(&args.into_config()?),
        Command::Reconstruct(args) => reconstruct::cmd_reconstruct(&args, out),
        Command::Validate { suite } => {
            validate::cmd_validate(suite, causal_switch_core::depolarizing_switch_mixture, out)
        }
        Command::Plot { input, out: path } => plot::cmd_plot(&input, &path),
    }
}
