//! `grid`: seeded Monte Carlo success grids with CSV/JSON output and an
//! optional SVG heatmap carrying the theoretical curve.

use crate::config::{required, ConfigFile};
use crate::errors::CliError;
use crate::manifest::RunManifest;
use crate::range::IntRange;
use crate::svg::render_heatmap;
use clap::{Args, ValueEnum};
use phasetrans::farmodel::FarConfig;
use phasetrans::montecarlo::{run_grid, Ensemble, GridSpec, SuccessGrid, DEFAULT_TRIALS};
use phasetrans::recovery::SolverConfig;
use phasetrans::statdim::{
    complex_curve_value, curve_value, far_budget, CurveQuery, FarBudget, RecoveryKind,
};
use serde::Deserialize;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const THREADS_ENV: &str = "PHASETRANS_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
pub enum EnsembleArg {
    #[value(name = "gauss-real")]
    #[serde(rename = "gauss-real")]
    GaussReal,
    #[value(name = "gauss-complex")]
    #[serde(rename = "gauss-complex")]
    GaussComplex,
    #[value(name = "far")]
    #[serde(rename = "far")]
    Far,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Problem ensemble
    #[arg(long, value_enum)]
    pub ensemble: Option<EnsembleArg>,
    /// Gaussian ensembles: block width m
    #[arg(long)]
    pub m: Option<usize>,
    /// Gaussian ensembles: block count d
    #[arg(long)]
    pub d: Option<usize>,
    /// FAR: available frequencies M
    #[arg(long = "M")]
    pub m_freqs: Option<usize>,
    /// FAR: pulses per coherent interval N
    #[arg(long = "N")]
    pub n_pulses: Option<usize>,
    /// FAR: frequency step over carrier
    #[arg(long = "freq-ratio")]
    pub freq_ratio: Option<f64>,
    /// FAR: use block sparse recovery
    #[arg(long, conflicts_with = "standard")]
    pub block: bool,
    /// FAR: use standard sparse recovery (the default)
    #[arg(long)]
    pub standard: bool,
    /// FAR: keep one code sequence (seeded by --seed) for the whole grid
    /// instead of redrawing codes every trial
    #[arg(long = "fixed-codes")]
    pub fixed_codes: bool,
    /// Sparsity sweep, lo:hi[:step]
    #[arg(long = "s-range")]
    pub s_range: Option<IntRange>,
    /// Measurement-count sweep, lo:hi[:step]
    #[arg(long = "n-range")]
    pub n_range: Option<IntRange>,
    /// Trials per cell
    #[arg(long)]
    pub trials: Option<usize>,
    /// Base seed; every trial derives its own generator from it
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (default: PHASETRANS_THREADS, then all cores)
    #[arg(long)]
    pub threads: Option<usize>,
    /// Output CSV path; stdout when omitted
    #[arg(long, short = 'o')]
    pub out: Option<PathBuf>,
    /// Also write an SVG heatmap with the theoretical curve overlaid
    #[arg(long)]
    pub svg: Option<PathBuf>,
    /// Also write the full grid (with metadata) as JSON
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// JSON config file supplying any flag; the command line wins
    #[arg(long)]
    pub config: Option<PathBuf>,
}

/// Theoretical transition curve matching the ensemble, as (sparsity,
/// measurements) pairs for the heatmap overlay.
fn overlay_curve(ensemble: &Ensemble, s_range: &IntRange) -> Result<Vec<(f64, f64)>, CliError> {
    let mut points = Vec::new();
    match ensemble {
        Ensemble::GaussianReal { block_count, block_width }
        | Ensemble::GaussianComplex { block_count, block_width } => {
            let complex = matches!(ensemble, Ensemble::GaussianComplex { .. });
            for s in s_range.lo..=s_range.hi {
                let q = CurveQuery::new(*block_width, *block_count, s)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let v = if complex { complex_curve_value::<f64>(&q)? } else { curve_value::<f64>(&q)? };
                points.push((s as f64, v.value));
            }
        }
        Ensemble::Far { config, recovery, .. } => {
            let mut k = s_range.lo as f64;
            while k <= s_range.hi as f64 + 1e-9 {
                let b = far_budget::<f64>(&FarBudget {
                    m_freqs: config.m_freqs,
                    n_pulses: config.n_pulses,
                    k,
                    kind: *recovery,
                })?;
                points.push((k, b.value));
                k += 0.5;
            }
        }
    }
    Ok(points)
}

fn remove_partial(written: &[PathBuf]) {
    for path in written {
        let _ = std::fs::remove_file(path);
    }
}

pub fn run(args: GridArgs) -> Result<(), CliError> {
    let started = Instant::now();
    let cfg = ConfigFile::load(args.config.as_deref())?;
    let ensemble_arg = required(cfg.resolve(args.ensemble, "ensemble")?, "ensemble")?;
    let s_range = required(cfg.resolve_parsed(args.s_range, "s-range")?, "s-range")?;
    let n_range = required(cfg.resolve_parsed(args.n_range, "n-range")?, "n-range")?;
    let trials = cfg.resolve(args.trials, "trials")?.unwrap_or(DEFAULT_TRIALS);
    let seed = cfg.resolve(args.seed, "seed")?.unwrap_or(0);
    let threads = match cfg.resolve(args.threads, "threads")? {
        Some(t) => Some(t),
        None => std::env::var(THREADS_ENV)
            .ok()
            .map(|v| {
                v.parse::<usize>()
                    .map_err(|_| CliError::Usage(format!("{THREADS_ENV} must be an integer, got '{v}'")))
            })
            .transpose()?,
    };
    let out: Option<PathBuf> = cfg.resolve(args.out, "out")?;
    let svg_path: Option<PathBuf> = cfg.resolve(args.svg, "svg")?;
    let json_path: Option<PathBuf> = cfg.resolve(args.json, "json")?;

    let ensemble = match ensemble_arg {
        EnsembleArg::GaussReal | EnsembleArg::GaussComplex => {
            let m = cfg.resolve(args.m, "m")?.unwrap_or(1);
            let d = required(cfg.resolve(args.d, "d")?, "d")?;
            if ensemble_arg == EnsembleArg::GaussReal {
                Ensemble::GaussianReal { block_count: d, block_width: m }
            } else {
                Ensemble::GaussianComplex { block_count: d, block_width: m }
            }
        }
        EnsembleArg::Far => {
            let m_freqs = required(cfg.resolve(args.m_freqs, "M")?, "M")?;
            let n_pulses = required(cfg.resolve(args.n_pulses, "N")?, "N")?;
            let freq_ratio = cfg.resolve(args.freq_ratio, "freq-ratio")?.unwrap_or(0.02);
            let block = cfg.resolve_flag(args.block, "block")?;
            let standard = cfg.resolve_flag(args.standard, "standard")?;
            if block && standard {
                return Err(CliError::Usage("--block conflicts with --standard".into()));
            }
            let fixed_codes = cfg.resolve_flag(args.fixed_codes, "fixed-codes")?;
            Ensemble::Far {
                config: FarConfig { m_freqs, n_pulses, freq_ratio, seed },
                recovery: if block { RecoveryKind::Block } else { RecoveryKind::Standard },
                redraw_codes: !fixed_codes,
            }
        }
    };

    let spec = GridSpec {
        sparsities: s_range.values(),
        measurement_counts: n_range.values(),
        trials,
        base_seed: seed,
    };
    let solver = SolverConfig::default();

    let grid: SuccessGrid = match threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?
            .install(|| run_grid(&ensemble, &spec, &solver))?,
        None => run_grid(&ensemble, &spec, &solver)?,
    };

    let csv = grid.to_csv();
    let mut manifest = RunManifest::new(
        "grid",
        serde_json::json!({
            "ensemble": serde_json::to_value(&ensemble).unwrap_or_default(),
            "s_range": s_range.to_string(),
            "n_range": n_range.to_string(),
            "trials": trials,
            "threads": threads,
        }),
        vec![seed],
    );

    // file outputs are all-or-nothing: on failure, drop what was written
    let mut written: Vec<PathBuf> = Vec::new();
    let result = (|| -> Result<(), CliError> {
        if let Some(path) = &out {
            std::fs::write(path, &csv)?;
            written.push(path.clone());
        }
        if let Some(path) = &json_path {
            let text = grid.to_json().map_err(|e| CliError::Io(e.to_string()))?;
            std::fs::write(path, text + "\n")?;
            written.push(path.clone());
        }
        if let Some(path) = &svg_path {
            let curve = overlay_curve(&ensemble, &s_range)?;
            let (title, xl, yl) = match &ensemble {
                Ensemble::GaussianReal { .. } => ("success fraction (real Gaussian)", "s_B", "n"),
                Ensemble::GaussianComplex { .. } => ("success fraction (complex Gaussian)", "s", "n"),
                Ensemble::Far { recovery: RecoveryKind::Block, .. } => {
                    ("success fraction (radar, block recovery)", "K", "n")
                }
                Ensemble::Far { .. } => ("success fraction (radar, standard recovery)", "K", "n"),
            };
            std::fs::write(path, render_heatmap(&grid, &curve, title, xl, yl))?;
            written.push(path.clone());
        }
        Ok(())
    })();
    if let Err(e) = result {
        remove_partial(&written);
        return Err(e);
    }

    // the CSV always lands somewhere: the --out file or stdout
    if out.is_none() {
        print!("{csv}");
    }
    let primary: Option<&Path> =
        out.as_deref().or(json_path.as_deref()).or(svg_path.as_deref());
    if let Some(path) = primary {
        manifest.outputs = written.iter().map(|p| p.display().to_string()).collect();
        manifest.wall_time_secs = started.elapsed().as_secs_f64();
        if let Err(e) = manifest.write(path) {
            remove_partial(&written);
            return Err(e);
        }
    }
    Ok(())
}
