//! Quick timing probe for one FAR Monte Carlo cell.
use phasetrans::montecarlo::{run_cell_counts, Ensemble};
use phasetrans::farmodel::FarConfig;
use phasetrans::recovery::SolverConfig;
use phasetrans::statdim::RecoveryKind;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let alpha: f64 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1.0);
    let trials: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(6);
    let kind = if args.get(3).map(|s| s == "block").unwrap_or(false) {
        RecoveryKind::Block
    } else {
        RecoveryKind::Standard
    };
    let k: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(11);
    let ens = Ensemble::Far {
        config: FarConfig { m_freqs: 4, n_pulses: 128, freq_ratio: 0.02, seed: 0 },
        recovery: kind,
        redraw_codes: true,
    };
    let solver = SolverConfig { over_relaxation: alpha, ..Default::default() };
    let t0 = Instant::now();
    let succ = run_cell_counts(&ens, k, 128, trials, 12345, &solver).unwrap();
    let dt = t0.elapsed().as_secs_f64();
    println!("alpha={alpha} kind={kind:?} K={k}: {succ}/{trials} successes in {dt:.2}s ({:.2}s/trial)", dt / trials as f64);
}
