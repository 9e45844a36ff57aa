//! `solve-k`: invert the observation budget for the number of recoverable
//! targets.

use super::budget::KindArg;
use crate::config::{required, ConfigFile};
use crate::errors::CliError;
use clap::Args;
use phasetrans::statdim::{solve_for_k, RecoveryKind};
use std::path::PathBuf;

#[derive(Debug, Args)]
pub struct SolveKArgs {
    /// Available frequencies M
    #[arg(long = "M")]
    pub m_freqs: Option<usize>,
    /// Pulses per coherent interval N
    #[arg(long = "N")]
    pub n_pulses: Option<usize>,
    /// Observation budget to invert (pulses available)
    #[arg(long)]
    pub budget: Option<f64>,
    /// Recovery kind
    #[arg(long, value_enum)]
    pub kind: Option<KindArg>,
    /// Print full precision instead of one decimal
    #[arg(long)]
    pub precise: bool,
    /// JSON config file supplying any flag; the command line wins
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: SolveKArgs) -> Result<(), CliError> {
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let m = required(cfg.resolve(args.m_freqs, "M")?, "M")?;
    let n = required(cfg.resolve(args.n_pulses, "N")?, "N")?;
    let budget = required(cfg.resolve(args.budget, "budget")?, "budget")?;
    let kind: RecoveryKind = required(cfg.resolve(args.kind, "kind")?, "kind")?.into();
    let precise = cfg.resolve_flag(args.precise, "precise")?;

    let k = solve_for_k::<f64>(m, n, budget, kind)?;
    if precise {
        println!("K\n{k}");
    } else {
        println!("K\n{k:.1}");
    }
    Ok(())
}
