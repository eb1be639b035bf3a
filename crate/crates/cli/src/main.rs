//! `spin-kelly`: solve, simulate and export the sequential spin-betting game.
//!
//! Exit codes: 0 on success, 2 for usage or configuration errors, 3 when a
//! solver, simulation or file operation fails.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::{Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(name = "spin-kelly", version, about = "Log-optimal betting on sequential spin-1/2 measurements")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    overrides: Overrides,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve for the value function; writes value curves, policy table and manifest
    Solve,
    /// Equal-utility contour lines, one CSV per step (default level: log2 2 = 1)
    Contours,
    /// Monte Carlo batch for one policy (default: optimal)
    Simulate,
    /// Exact and Monte Carlo comparison of two or more policies
    Compare,
    /// Full figure dataset: contours for 7.5/30/60/90 degrees, heat maps at
    /// the --delta-deg angle, and the information-angle report
    FiguresData,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl From<anyhow::Error> for CliError {
    fn from(e: anyhow::Error) -> Self {
        CliError::Runtime(e)
    }
}

impl From<spin_kelly::Error> for CliError {
    fn from(e: spin_kelly::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = RunConfig::resolve(&cli.overrides)?;
    if cfg.params.is_degenerate() {
        eprintln!("warning: delta = 0 makes the two preparations identical; every round is a sure win");
    }
    match cli.command {
        Command::Solve => commands::solve(&cfg),
        Command::Contours => commands::contours(&cfg),
        Command::Simulate => commands::simulate(&cfg),
        Command::Compare => commands::compare(&cfg),
        Command::FiguresData => commands::figures_data(&cfg),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(3)
        }
    }
}
