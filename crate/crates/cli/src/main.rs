//! Command-line surface for the phase-transition toolkit: theoretical
//! curves, radar observation budgets with closed-form approximations,
//! budget inversion for target counts, and seeded Monte Carlo grids.

mod commands;
mod config;
mod errors;
mod manifest;
mod range;
mod svg;

use clap::{Parser, Subcommand};
use std::process::ExitCode;

#[derive(Debug, Parser)]
#[command(
    name = "phasetrans",
    version,
    about = "Phase-transition curves and Monte Carlo experiments for sparse recovery",
    after_help = "Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 i/o error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate a theoretical phase-transition curve over a sparsity sweep
    Curve(commands::curve::CurveArgs),
    /// Exact radar observation budgets with closed-form approximations
    Budget(commands::budget::BudgetArgs),
    /// Number of recoverable targets for a given observation budget
    SolveK(commands::solve_k::SolveKArgs),
    /// Seeded Monte Carlo success grid over (sparsity, measurements)
    Grid(commands::grid::GridArgs),
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Curve(args) => commands::curve::run(args),
        Command::Budget(args) => commands::budget::run(args),
        Command::SolveK(args) => commands::solve_k::run(args),
        Command::Grid(args) => commands::grid::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code())
        }
    }
}
