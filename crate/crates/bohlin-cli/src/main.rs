//! Command-line front end for the planar duality engine.
//!
//! Exit codes: 0 success, 2 configuration or input error, 3 integration
//! error, 4 branch-jump detection, 5 verification failure.

mod commands;
mod config;
mod csvio;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration, malformed input files, metadata mismatches.
    Config(String),
    /// The integrator failed (origin singularity, step underflow).
    Integration(String),
    /// The conformal map could not track the branch.
    Branch(String),
    /// One or more verification checks failed.
    Verification(String),
}

impl CliError {
    /// Classify a library error by failure class.
    pub fn from_lib(e: bohlin::Error) -> Self {
        use bohlin::Error::*;
        match e {
            OriginSingularity { .. } | StepFailure { .. } => CliError::Integration(e.to_string()),
            BranchJump { .. } => CliError::Branch(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }

    /// Library errors raised while validating inputs are config errors.
    pub fn config(e: bohlin::Error) -> Self {
        CliError::Config(e.to_string())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Integration(_) => 3,
            CliError::Branch(_) => 4,
            CliError::Verification(_) => 5,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Config(m)
            | CliError::Integration(m)
            | CliError::Branch(m)
            | CliError::Verification(m) => m,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "bohlin",
    about = "Planar central-force motions in complex coordinates: integrate power-law \
             potentials, map trajectories through the conformal duality transform, and \
             verify the conserved quantities on both sides."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a motion described by a JSON config and write a CSV trajectory.
    Simulate {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output CSV path (overrides outputs.trajectory in the config).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Map a trajectory CSV onto its dual.
    Dualize {
        /// Input trajectory CSV.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output dual-trajectory CSV.
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON overriding the derived dual couplings.
        #[arg(long)]
        params: Option<PathBuf>,
    },
    /// Run the verification suites on an (original, dual) pair.
    Verify {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        dual: PathBuf,
        /// Output JSON report path.
        #[arg(long)]
        report: PathBuf,
    },
    /// Full pipeline showcase: simulate, dualize, verify, plot.
    Demo {
        /// Scenario name (available: hooke-kepler).
        scenario: String,
        /// Potential exponent (default 2: oscillator source, Kepler dual).
        #[arg(long, default_value_t = 2.0)]
        nu: f64,
        /// Dual-orbit eccentricity for the nu = 2 scenario, in [0, 1).
        #[arg(long, default_value_t = 0.6)]
        e: f64,
        /// Output directory.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Simulate { config, out } => commands::simulate(config, out.as_deref()),
        Command::Dualize { input, out, params } => commands::dualize(input, out, params.as_deref()),
        Command::Verify {
            original,
            dual,
            report,
        } => commands::verify(original, dual, report),
        Command::Demo {
            scenario,
            nu,
            e,
            out_dir,
        } => {
            let dir = out_dir
                .clone()
                .unwrap_or_else(commands::demo_default_out_dir);
            commands::demo(scenario, *nu, *e, &dir)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
