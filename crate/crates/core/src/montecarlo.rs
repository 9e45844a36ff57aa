//! Seeded success-rate experiments over (sparsity, measurement-count)
//! grids for Gaussian and radar ensembles.
//!
//! Every trial derives its own generator seed from the base seed, the cell
//! coordinates (the sparsity and measurement-count values, not their axis
//! positions), and the trial index. Cells and trials are therefore
//! independent tasks: the grid output is bit-identical regardless of thread
//! count or axis ordering.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;
use std::time::Instant;

use crate::farmodel::{build_theta, generate_codes, generate_scene, subsample_and_measure, FarConfig, FarModelError};
use crate::recovery::{
    adjudicate, solve, solve_complex, ComplexProblem, RealProblem, RecoveryError, SolverConfig,
};
use crate::statdim::RecoveryKind;

/// Trials per cell used throughout the experiments.
pub const DEFAULT_TRIALS: usize = 50;

#[derive(Debug, thiserror::Error)]
pub enum MonteCarloError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("sparsity {0} is not a grid row")]
    UnknownSparsity(usize),
    #[error("success column for sparsity {0} never crosses 0.5")]
    NoCrossing(usize),
    #[error(transparent)]
    Recovery(#[from] RecoveryError),
    #[error(transparent)]
    Far(#[from] FarModelError),
}

/// How nonzero signal entries are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SignalModel {
    /// Entries are 1 or -1 with equal probability (real ensembles).
    PlusMinusOne,
    /// Entries are unit-amplitude with i.i.d. uniform phase (complex ensembles).
    UnitPhase,
}

/// Random problem family a grid draws from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Ensemble {
    GaussianReal {
        block_count: usize,
        block_width: usize,
    },
    GaussianComplex {
        block_count: usize,
        block_width: usize,
    },
    Far {
        config: FarConfig,
        recovery: RecoveryKind,
        /// Redraw the modulation codes every trial (default); when false the
        /// codes are fixed by `config.seed` for the whole grid.
        redraw_codes: bool,
    },
}

impl Ensemble {
    /// The signal model is tied to the ensemble: real Gaussian matrices pair
    /// with sign entries, complex ensembles with unit-phase entries.
    pub fn signal_model(&self) -> SignalModel {
        match self {
            Ensemble::GaussianReal { .. } => SignalModel::PlusMinusOne,
            Ensemble::GaussianComplex { .. } | Ensemble::Far { .. } => SignalModel::UnitPhase,
        }
    }

    /// Largest admissible measurement count.
    pub fn max_measurements(&self) -> usize {
        match self {
            Ensemble::GaussianReal { block_count, block_width }
            | Ensemble::GaussianComplex { block_count, block_width } => block_count * block_width,
            Ensemble::Far { config, .. } => config.n_pulses,
        }
    }

    /// Largest admissible sparsity (blocks / targets).
    pub fn max_sparsity(&self) -> usize {
        match self {
            Ensemble::GaussianReal { block_count, .. }
            | Ensemble::GaussianComplex { block_count, .. } => *block_count,
            Ensemble::Far { config, .. } => config.n_pulses,
        }
    }

    fn validate(&self) -> Result<(), MonteCarloError> {
        match self {
            Ensemble::GaussianReal { block_count, block_width }
            | Ensemble::GaussianComplex { block_count, block_width } => {
                if *block_count == 0 || *block_width == 0 {
                    return Err(MonteCarloError::InvalidGrid(
                        "block count and width must be positive".into(),
                    ));
                }
            }
            Ensemble::Far { config, .. } => {
                config.validate()?;
            }
        }
        Ok(())
    }
}

/// Axes, repetition count, and base seed of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    /// Sparsity values (blocks for Gaussian ensembles, targets for radar).
    pub sparsities: Vec<usize>,
    /// Measurement counts (rows for Gaussian, pulses for radar).
    pub measurement_counts: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
}

impl GridSpec {
    fn validate(&self, ensemble: &Ensemble) -> Result<(), MonteCarloError> {
        if self.sparsities.is_empty() || self.measurement_counts.is_empty() {
            return Err(MonteCarloError::InvalidGrid("grid axes must be non-empty".into()));
        }
        if self.sparsities.windows(2).any(|w| w[0] >= w[1])
            || self.measurement_counts.windows(2).any(|w| w[0] >= w[1])
        {
            return Err(MonteCarloError::InvalidGrid("grid axes must be strictly increasing".into()));
        }
        if self.trials == 0 {
            return Err(MonteCarloError::InvalidGrid("at least one trial per cell".into()));
        }
        let max_s = ensemble.max_sparsity();
        let max_n = ensemble.max_measurements();
        if let Some(&s) = self.sparsities.iter().find(|&&s| s > max_s) {
            return Err(MonteCarloError::InvalidGrid(format!("sparsity {s} exceeds {max_s}")));
        }
        if let Some(&n) = self.measurement_counts.iter().find(|&&n| n > max_n || n == 0) {
            return Err(MonteCarloError::InvalidGrid(format!("measurement count {n} outside 1..={max_n}")));
        }
        Ok(())
    }
}

/// splitmix64 finalizer.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-trial seed: a splitmix64 chain over (base seed, sparsity value,
/// measurement-count value, trial index).
pub fn derive_seed(base_seed: u64, sparsity: u64, n: u64, trial: u64) -> u64 {
    mix64(mix64(mix64(mix64(base_seed) ^ sparsity) ^ n) ^ trial)
}

/// Independent sub-stream of a trial seed (codes / scene / row selection).
fn derive_stream(trial_seed: u64, stream: u64) -> u64 {
    mix64(trial_seed ^ mix64(stream))
}

fn gaussian_real_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<f64> {
    let data: Vec<f64> = (0..rows * cols).map(|_| rng.sample(StandardNormal)).collect();
    DMatrix::from_vec(rows, cols, data)
}

fn gaussian_complex_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> DMatrix<Complex64> {
    let data: Vec<Complex64> = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            Complex64::new(re, im)
        })
        .collect();
    DMatrix::from_vec(rows, cols, data)
}

fn sorted_sample(rng: &mut ChaCha8Rng, population: usize, amount: usize) -> Vec<usize> {
    let mut v = index::sample(rng, population, amount).into_vec();
    v.sort_unstable();
    v
}

/// One seeded trial; factorization failures count as recovery failures.
fn run_trial(
    ensemble: &Ensemble,
    sparsity: usize,
    n: usize,
    trial_seed: u64,
    solver: &SolverConfig,
) -> Result<bool, MonteCarloError> {
    let outcome = match ensemble {
        Ensemble::GaussianReal { block_count, block_width } => {
            let (d, m) = (*block_count, *block_width);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let matrix = gaussian_real_matrix(&mut rng, n, m * d);
            let support = sorted_sample(&mut rng, d, sparsity);
            let mut x = DVector::<f64>::zeros(m * d);
            for &q in &support {
                for j in 0..m {
                    x[q * m + j] = if rng.random::<bool>() { 1.0 } else { -1.0 };
                }
            }
            let y = &matrix * &x;
            let problem = RealProblem::new(matrix, y, m)?;
            match solve(&problem, solver) {
                Ok(res) => Ok(adjudicate(&x, &res.x_hat)?),
                Err(RecoveryError::Factorization) => Err(RecoveryError::Factorization),
                Err(other) => return Err(other.into()),
            }
        }
        Ensemble::GaussianComplex { block_count, block_width } => {
            let (d, m) = (*block_count, *block_width);
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let matrix = gaussian_complex_matrix(&mut rng, n, m * d);
            let support = sorted_sample(&mut rng, d, sparsity);
            let mut x = DVector::<Complex64>::zeros(m * d);
            for &q in &support {
                for j in 0..m {
                    let phase = rng.random_range(0.0..TAU);
                    x[q * m + j] = Complex64::from_polar(1.0, phase);
                }
            }
            let y = &matrix * &x;
            let problem = ComplexProblem::new(matrix, y, m)?;
            match solve_complex(&problem, solver) {
                Ok(res) => Ok(adjudicate(&x, &res.x_hat)?),
                Err(RecoveryError::Factorization) => Err(RecoveryError::Factorization),
                Err(other) => return Err(other.into()),
            }
        }
        Ensemble::Far { config, recovery, redraw_codes } => {
            let trial_config = if *redraw_codes {
                FarConfig { seed: derive_stream(trial_seed, 0), ..*config }
            } else {
                *config
            };
            let codes = generate_codes(&trial_config)?;
            let theta = build_theta(&trial_config, &codes)?;
            let scene = generate_scene(&trial_config, sparsity, derive_stream(trial_seed, 1))?;
            let ms = subsample_and_measure(&theta, &scene, n, derive_stream(trial_seed, 2))?;
            let width = match recovery {
                RecoveryKind::Block => config.m_freqs,
                RecoveryKind::Standard => 1,
            };
            let problem = ComplexProblem::new(ms.matrix, ms.y, width)?;
            match solve_complex(&problem, solver) {
                Ok(res) => Ok(adjudicate(&scene.coefficients, &res.x_hat)?),
                Err(RecoveryError::Factorization) => Err(RecoveryError::Factorization),
                Err(other) => return Err(other.into()),
            }
        }
    };
    match outcome {
        Ok(success) => Ok(success),
        Err(RecoveryError::Factorization) => {
            log::warn!(
                "singular gram matrix at (s = {sparsity}, n = {n}, seed = {trial_seed}); counting the trial as a failure"
            );
            Ok(false)
        }
        Err(other) => Err(other.into()),
    }
}

/// Success count over `trials` seeded trials of one cell.
pub fn run_cell_counts(
    ensemble: &Ensemble,
    sparsity: usize,
    n: usize,
    trials: usize,
    base_seed: u64,
    solver: &SolverConfig,
) -> Result<usize, MonteCarloError> {
    ensemble.validate()?;
    (0..trials)
        .into_par_iter()
        .map(|t| {
            let seed = derive_seed(base_seed, sparsity as u64, n as u64, t as u64);
            run_trial(ensemble, sparsity, n, seed, solver).map(usize::from)
        })
        .try_reduce(|| 0usize, |a, b| Ok(a + b))
}

/// Success fraction of one cell.
pub fn run_cell(
    ensemble: &Ensemble,
    sparsity: usize,
    n: usize,
    trials: usize,
    base_seed: u64,
    solver: &SolverConfig,
) -> Result<f64, MonteCarloError> {
    Ok(run_cell_counts(ensemble, sparsity, n, trials, base_seed, solver)? as f64 / trials as f64)
}

pub const GRID_SCHEMA: &str = "phasetrans/grid/v1";

/// Success fractions over a (sparsity, measurement-count) lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuccessGrid {
    pub schema: String,
    pub ensemble: Ensemble,
    pub sparsities: Vec<usize>,
    pub measurement_counts: Vec<usize>,
    pub trials: usize,
    pub base_seed: u64,
    /// Success counts, `successes[s_index][n_index]`.
    pub successes: Vec<Vec<usize>>,
    /// Wall time of the generating run; provenance only, not reproducible.
    pub wall_time_secs: f64,
}

impl SuccessGrid {
    pub fn fraction(&self, s_index: usize, n_index: usize) -> f64 {
        self.successes[s_index][n_index] as f64 / self.trials as f64
    }

    /// CSV with the stable dialect: header `s,n,trials,successes,fraction`,
    /// comma-separated, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,n,trials,successes,fraction\n");
        for (si, &s) in self.sparsities.iter().enumerate() {
            for (ni, &n) in self.measurement_counts.iter().enumerate() {
                let succ = self.successes[si][ni];
                out.push_str(&format!("{s},{n},{},{succ},{}\n", self.trials, self.fraction(si, ni)));
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Result<String> {
        serde_json::to_string_pretty(self)
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Interpolated measurement count where this sparsity's success column
    /// crosses one half.
    pub fn locate_transition(&self, sparsity: usize) -> Result<f64, MonteCarloError> {
        let si = self
            .sparsities
            .iter()
            .position(|&s| s == sparsity)
            .ok_or(MonteCarloError::UnknownSparsity(sparsity))?;
        for ni in 0..self.measurement_counts.len() - 1 {
            let f0 = self.fraction(si, ni);
            let f1 = self.fraction(si, ni + 1);
            if f0 <= 0.5 && f1 >= 0.5 && f1 > f0 {
                let n0 = self.measurement_counts[ni] as f64;
                let n1 = self.measurement_counts[ni + 1] as f64;
                return Ok(n0 + (0.5 - f0) * (n1 - n0) / (f1 - f0));
            }
        }
        // a column sitting exactly at one half with no strict bracket
        if let Some(ni) = (0..self.measurement_counts.len()).find(|&ni| self.fraction(si, ni) == 0.5) {
            return Ok(self.measurement_counts[ni] as f64);
        }
        Err(MonteCarloError::NoCrossing(sparsity))
    }
}

/// Runs every cell of the grid. Cells and trials execute in parallel; the
/// result does not depend on scheduling.
pub fn run_grid(
    ensemble: &Ensemble,
    spec: &GridSpec,
    solver: &SolverConfig,
) -> Result<SuccessGrid, MonteCarloError> {
    ensemble.validate()?;
    spec.validate(ensemble)?;
    let start = Instant::now();
    let cells: Vec<(usize, usize)> = spec
        .sparsities
        .iter()
        .flat_map(|&s| spec.measurement_counts.iter().map(move |&n| (s, n)))
        .collect();
    let counts: Vec<usize> = cells
        .par_iter()
        .map(|&(s, n)| run_cell_counts(ensemble, s, n, spec.trials, spec.base_seed, solver))
        .collect::<Result<_, _>>()?;
    let n_cols = spec.measurement_counts.len();
    let successes = counts.chunks(n_cols).map(|row| row.to_vec()).collect();
    Ok(SuccessGrid {
        schema: GRID_SCHEMA.to_string(),
        ensemble: ensemble.clone(),
        sparsities: spec.sparsities.clone(),
        measurement_counts: spec.measurement_counts.clone(),
        trials: spec.trials,
        base_seed: spec.base_seed,
        successes,
        wall_time_secs: start.elapsed().as_secs_f64(),
    })
}
