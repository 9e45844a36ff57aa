//! `curve`: evaluate the theoretical transition curve over a sparsity sweep.

use crate::config::{required, ConfigFile};
use crate::errors::CliError;
use crate::manifest::RunManifest;
use crate::range::IntRange;
use clap::Args;
use phasetrans::statdim::{complex_curve_value, curve_value, CurveQuery};
use std::path::PathBuf;
use std::time::Instant;

#[derive(Debug, Args)]
pub struct CurveArgs {
    /// Block width m (entries per block; 1 for standard sparsity)
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of blocks d
    #[arg(long)]
    pub d: Option<usize>,
    /// Block-sparsity sweep, lo:hi[:step]
    #[arg(long = "s-range")]
    pub s_range: Option<IntRange>,
    /// Evaluate the complex-valued curve (values in complex measurements)
    #[arg(long)]
    pub complex: bool,
    /// Output CSV path; stdout when omitted
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
    /// JSON config file supplying any flag; the command line wins
    #[arg(long)]
    pub config: Option<PathBuf>,
}

pub fn run(args: CurveArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let m = required(cfg.resolve(args.m, "m")?, "m")?;
    let d = required(cfg.resolve(args.d, "d")?, "d")?;
    let s_range = required(cfg.resolve_parsed(args.s_range, "s-range")?, "s-range")?;
    let complex = cfg.resolve_flag(args.complex, "complex")?;
    let out = cfg.resolve(args.out, "out")?;

    if s_range.hi > d {
        return Err(CliError::Usage(format!("s-range upper end {} exceeds d = {d}", s_range.hi)));
    }

    let mut csv = String::from("s_B,value,tau_star\n");
    for s in s_range.values() {
        let q = CurveQuery::new(m, d, s).map_err(|e| CliError::Usage(e.to_string()))?;
        let v = if complex { complex_curve_value::<f64>(&q)? } else { curve_value::<f64>(&q)? };
        csv.push_str(&format!("{s},{},{}\n", v.value, v.tau_star));
    }

    let mut manifest = RunManifest::new(
        "curve",
        serde_json::json!({
            "m": m,
            "d": d,
            "s_range": s_range.to_string(),
            "complex": complex,
        }),
        Vec::new(),
    );
    super::emit_csv(&csv, out.as_deref(), Some((&mut manifest, started)))
}
