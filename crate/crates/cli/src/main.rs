//! `twomode`: build states, run verification suites, tabulate the squeezer
//! and re-export reports.
//!
//! Exit codes: 0 success, 1 numerical failure or internal error, 2 usage or
//! configuration error.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] twomode_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use twomode_core::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::DegenerateAngle { .. } | E::InvalidParameter(_) | E::CutoffMismatch { .. }) => 2,
            CliError::Core(_) | CliError::Io(_) | CliError::Failed(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "twomode", version, about = "Two-mode entangled states and the θ-dependent squeezer")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

/// Flags shared by every subcommand. Values are kept as text so that flags
/// and config-file entries resolve through the same path.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// Plain-text key=value file; flags override its entries
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Angle θ in radians, inside (0, π/2)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Squeeze parameter λ
    #[arg(long, allow_hyphen_values = true)]
    pub lambda: Option<String>,
    /// Complex label η as "re,im"
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    #[arg(long)]
    pub cutoff: Option<String>,
    #[arg(long)]
    pub guard: Option<String>,
    #[arg(long)]
    pub grid_radius: Option<String>,
    #[arg(long)]
    pub grid_step: Option<String>,
    /// Output path (stdout when omitted; a directory for `report`)
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exponent form of a state, optionally with its Fock amplitudes
    State {
        #[command(flatten)]
        common: Common,
        /// |η,θ⟩ (default)
        #[arg(long, group = "kind")]
        eta_theta: bool,
        /// |η⟩
        #[arg(long, group = "kind")]
        eta_state: bool,
        /// U⁻¹|00⟩
        #[arg(long, group = "kind")]
        squeezed_vacuum: bool,
        /// Include truncated Fock amplitudes at --cutoff
        #[arg(long)]
        fock: bool,
    },
    /// Run verification suites and write a suite report
    Verify {
        #[command(flatten)]
        common: Common,
        /// relations, unitarity, variances, squeeze, completeness,
        /// orthogonality, asymptotics, properties or all
        #[arg(long)]
        suite: Option<String>,
        /// Comma-separated θ values (radians)
        #[arg(long)]
        theta_grid: Option<String>,
    },
    /// Tabulate squeezer parameters and variances over a (λ, θ) grid as CSV
    Scan {
        #[command(flatten)]
        common: Common,
        /// "min,max,count"
        #[arg(long, allow_hyphen_values = true)]
        lambda_grid: Option<String>,
        /// "min,max,count" in radians
        #[arg(long)]
        theta_grid: Option<String>,
        /// Fock variances are computed up to this λ
        #[arg(long)]
        fock_max_lambda: Option<String>,
        /// "squeezer" (full columns) or "phase-space"
        #[arg(long)]
        schema: Option<String>,
    },
    /// Summarize a suite report and export one CSV per experiment
    Report {
        /// Suite report JSON written by `verify`
        input: PathBuf,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::State { common, eta_theta: _, eta_state, squeezed_vacuum, fock } => {
            let kind = if eta_state {
                commands::StateKind::Eta
            } else if squeezed_vacuum {
                commands::StateKind::SqueezedVacuum
            } else {
                commands::StateKind::EtaTheta
            };
            commands::state(&common, kind, fock)
        }
        Command::Verify { common, suite, theta_grid } => commands::verify(&common, suite, theta_grid),
        Command::Scan { common, lambda_grid, theta_grid, fock_max_lambda, schema } => {
            commands::scan(&common, lambda_grid, theta_grid, fock_max_lambda, schema)
        }
        Command::Report { input, common } => commands::report(&input, &common),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
