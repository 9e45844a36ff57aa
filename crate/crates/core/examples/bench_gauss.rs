//! Timing probe for Gaussian Monte Carlo cells near the transition.
use phasetrans::montecarlo::{run_cell_counts, Ensemble};
use phasetrans::recovery::SolverConfig;
use std::time::Instant;

fn main() {
    let solver = SolverConfig::default();
    let cases = [
        ("real d=100 s=20 n=51", Ensemble::GaussianReal { block_count: 100, block_width: 1 }, 20usize, 51usize),
        ("real-block m=4 d=32 s=8 n=63", Ensemble::GaussianReal { block_count: 32, block_width: 4 }, 8, 63),
        ("complex d=100 s=20 n=46", Ensemble::GaussianComplex { block_count: 100, block_width: 1 }, 20, 46),
    ];
    for (name, ens, s, n) in cases {
        let t0 = Instant::now();
        let succ = run_cell_counts(&ens, s, n, 50, 42, &solver).unwrap();
        println!("{name}: {succ}/50 in {:.2}s", t0.elapsed().as_secs_f64());
    }
}
