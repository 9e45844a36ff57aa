//! Frequency-agile radar measurement model: random carrier codes, the
//! structured observation matrix, block sparse target scenes, and
//! compressive row selection.
//!
//! Grid convention: column `q*M + p` of the observation matrix corresponds
//! to the range-frequency/Doppler grid point `(p/M, q/N)`; block `q` is the
//! high-range-resolution profile of the Doppler bin `q`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, thiserror::Error)]
pub enum FarModelError {
    #[error("range error: {0}")]
    Range(String),
    #[error("invalid config: {0}")]
    Config(String),
    #[error("serialization error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Radar parameters. Identical configs generate identical codes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FarConfig {
    /// Available carrier frequencies `M` (range bins per block).
    pub m_freqs: usize,
    /// Pulses per coherent processing interval `N` (Doppler bins).
    pub n_pulses: usize,
    /// Frequency step over carrier, `delta_f / f_c`.
    pub freq_ratio: f64,
    /// Seed for the code sequence.
    pub seed: u64,
}

impl FarConfig {
    pub fn validate(&self) -> Result<(), FarModelError> {
        if self.m_freqs == 0 || self.n_pulses == 0 {
            return Err(FarModelError::Config("M and N must be positive".into()));
        }
        if !(self.freq_ratio > 0.0) {
            return Err(FarModelError::Config(format!(
                "freq_ratio must be positive, got {}",
                self.freq_ratio
            )));
        }
        Ok(())
    }

    pub fn ambient_dim(&self) -> usize {
        self.m_freqs * self.n_pulses
    }
}

/// Per-pulse modulation codes `C_n` and the derived carrier scale factors
/// `eps_n = 1 + C_n * freq_ratio`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeSequence {
    pub codes: Vec<usize>,
    pub eps: Vec<f64>,
}

/// Draws `N` i.i.d. codes uniform on `{0..M-1}` from the seeded generator.
pub fn generate_codes(cfg: &FarConfig) -> Result<CodeSequence, FarModelError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let codes: Vec<usize> = (0..cfg.n_pulses).map(|_| rng.random_range(0..cfg.m_freqs)).collect();
    let eps = codes.iter().map(|&c| 1.0 + c as f64 * cfg.freq_ratio).collect();
    Ok(CodeSequence { codes, eps })
}

/// Builds the full `N x (M*N)` observation matrix.
///
/// Entry `(n, q*M + p)` is `exp(j 2 pi (p/M) C_n + j 2 pi (q/N) eps_n n)`;
/// every entry has unit modulus.
pub fn build_theta(cfg: &FarConfig, codes: &CodeSequence) -> Result<DMatrix<Complex64>, FarModelError> {
    cfg.validate()?;
    if codes.codes.len() != cfg.n_pulses || codes.eps.len() != cfg.n_pulses {
        return Err(FarModelError::Config(format!(
            "code sequence length {} does not match N = {}",
            codes.codes.len(),
            cfg.n_pulses
        )));
    }
    if let Some(bad) = codes.codes.iter().find(|&&c| c >= cfg.m_freqs) {
        return Err(FarModelError::Config(format!("code {bad} out of range 0..{}", cfg.m_freqs)));
    }
    let m = cfg.m_freqs;
    let n = cfg.n_pulses;
    Ok(DMatrix::from_fn(n, m * n, |row, col| {
        let q = col / m;
        let p = col % m;
        let phase = TAU * (p as f64 / m as f64) * codes.codes[row] as f64
            + TAU * (q as f64 / n as f64) * codes.eps[row] * row as f64;
        Complex64::from_polar(1.0, phase)
    }))
}

/// Ground-truth block sparse scattering scene.
#[derive(Debug, Clone, PartialEq)]
pub struct Scene {
    pub config: FarConfig,
    pub seed: u64,
    /// Occupied Doppler bins, sorted ascending.
    pub support: Vec<usize>,
    /// Vectorized scattering coefficients, block-ordered, length `M*N`.
    pub coefficients: DVector<Complex64>,
}

impl Scene {
    /// Which of the `M` entries of block `q` are nonzero.
    pub fn occupancy(&self, block: usize) -> Vec<bool> {
        let m = self.config.m_freqs;
        (0..m).map(|j| self.coefficients[block * m + j] != Complex64::ZERO).collect()
    }

    /// Number of occupied blocks.
    pub fn block_sparsity(&self) -> usize {
        self.support.len()
    }

    pub fn to_json(&self) -> Result<String, FarModelError> {
        Ok(serde_json::to_string_pretty(&SceneRecord::from(self))?)
    }

    pub fn from_json(text: &str) -> Result<Self, FarModelError> {
        let record: SceneRecord = serde_json::from_str(text)?;
        record.try_into()
    }
}

/// Generates a scene with `k` distinct occupied Doppler bins; every entry of
/// an occupied block gets an independent uniform phase and unit amplitude.
pub fn generate_scene(cfg: &FarConfig, k: usize, seed: u64) -> Result<Scene, FarModelError> {
    generate_scene_with_occupancy(cfg, k, cfg.m_freqs, seed)
}

/// Partial-occupancy variant: only `entries_per_block` randomly chosen range
/// bins of each occupied block are nonzero.
pub fn generate_scene_with_occupancy(
    cfg: &FarConfig,
    k: usize,
    entries_per_block: usize,
    seed: u64,
) -> Result<Scene, FarModelError> {
    cfg.validate()?;
    if k > cfg.n_pulses {
        return Err(FarModelError::Range(format!("K = {k} exceeds N = {}", cfg.n_pulses)));
    }
    if entries_per_block == 0 || entries_per_block > cfg.m_freqs {
        return Err(FarModelError::Range(format!(
            "occupancy {entries_per_block} outside 1..={}",
            cfg.m_freqs
        )));
    }
    let m = cfg.m_freqs;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut support = index::sample(&mut rng, cfg.n_pulses, k).into_vec();
    support.sort_unstable();
    let mut coefficients = DVector::from_element(cfg.ambient_dim(), Complex64::ZERO);
    for &q in &support {
        let slots: Vec<usize> = if entries_per_block == m {
            (0..m).collect()
        } else {
            let mut s = index::sample(&mut rng, m, entries_per_block).into_vec();
            s.sort_unstable();
            s
        };
        for j in slots {
            let phase = rng.random_range(0.0..TAU);
            coefficients[q * m + j] = Complex64::from_polar(1.0, phase);
        }
    }
    Ok(Scene { config: *cfg, seed, support, coefficients })
}

/// A compressive observation: selected pulse rows and the exact measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSet {
    pub config: FarConfig,
    pub row_seed: u64,
    /// Row-subsampled observation matrix, `n x (M*N)`.
    pub matrix: DMatrix<Complex64>,
    /// Selected pulse indices, sorted ascending, distinct.
    pub rows: Vec<usize>,
    pub y: DVector<Complex64>,
}

impl MeasurementSet {
    pub fn to_json(&self) -> Result<String, FarModelError> {
        Ok(serde_json::to_string_pretty(&MeasurementRecord::from(self))?)
    }

    /// Rebuilds the measurement from its record; the matrix is regenerated
    /// from the recorded config (codes are a pure function of the seed).
    pub fn from_json(text: &str) -> Result<Self, FarModelError> {
        let record: MeasurementRecord = serde_json::from_str(text)?;
        record.try_into()
    }
}

/// Selects `n` distinct pulses uniformly and measures the scene exactly.
pub fn subsample_and_measure(
    theta: &DMatrix<Complex64>,
    scene: &Scene,
    n: usize,
    seed: u64,
) -> Result<MeasurementSet, FarModelError> {
    let pulses = scene.config.n_pulses;
    if n == 0 || n > pulses {
        return Err(FarModelError::Range(format!("n = {n} outside 1..={pulses}")));
    }
    if theta.nrows() != pulses || theta.ncols() != scene.config.ambient_dim() {
        return Err(FarModelError::Config(format!(
            "theta is {}x{}, expected {}x{}",
            theta.nrows(),
            theta.ncols(),
            pulses,
            scene.config.ambient_dim()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = index::sample(&mut rng, pulses, n).into_vec();
    rows.sort_unstable();
    let matrix = DMatrix::from_fn(n, theta.ncols(), |i, j| theta[(rows[i], j)]);
    let y = &matrix * &scene.coefficients;
    Ok(MeasurementSet { config: scene.config, row_seed: seed, matrix, rows, y })
}

fn interleave(v: &DVector<Complex64>) -> Vec<f64> {
    let mut out = Vec::with_capacity(2 * v.len());
    for z in v.iter() {
        out.push(z.re);
        out.push(z.im);
    }
    out
}

fn deinterleave(raw: &[f64]) -> Result<DVector<Complex64>, FarModelError> {
    if raw.len() % 2 != 0 {
        return Err(FarModelError::Config("interleaved array has odd length".into()));
    }
    Ok(DVector::from_iterator(
        raw.len() / 2,
        raw.chunks_exact(2).map(|c| Complex64::new(c[0], c[1])),
    ))
}

/// On-disk form of a scene: support indices plus interleaved re/im
/// coefficients, with the generating config and seed for replay.
#[derive(Debug, Serialize, Deserialize)]
pub struct SceneRecord {
    pub schema: String,
    pub config: FarConfig,
    pub seed: u64,
    pub support: Vec<usize>,
    /// `[re_0, im_0, re_1, im_1, ...]`, length `2*M*N`.
    pub coefficients: Vec<f64>,
}

pub const SCENE_SCHEMA: &str = "phasetrans/scene/v1";
pub const MEASUREMENT_SCHEMA: &str = "phasetrans/measurement/v1";

impl From<&Scene> for SceneRecord {
    fn from(s: &Scene) -> Self {
        SceneRecord {
            schema: SCENE_SCHEMA.to_string(),
            config: s.config,
            seed: s.seed,
            support: s.support.clone(),
            coefficients: interleave(&s.coefficients),
        }
    }
}

impl TryFrom<SceneRecord> for Scene {
    type Error = FarModelError;

    fn try_from(r: SceneRecord) -> Result<Self, FarModelError> {
        r.config.validate()?;
        let coefficients = deinterleave(&r.coefficients)?;
        if coefficients.len() != r.config.ambient_dim() {
            return Err(FarModelError::Config(format!(
                "coefficient length {} does not match M*N = {}",
                coefficients.len(),
                r.config.ambient_dim()
            )));
        }
        if r.support.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FarModelError::Config("support must be sorted and distinct".into()));
        }
        if r.support.iter().any(|&q| q >= r.config.n_pulses) {
            return Err(FarModelError::Config("support index out of range".into()));
        }
        Ok(Scene { config: r.config, seed: r.seed, support: r.support, coefficients })
    }
}

/// On-disk form of a measurement set; the subsampled matrix is rebuilt from
/// the config and row indices on load.
#[derive(Debug, Serialize, Deserialize)]
pub struct MeasurementRecord {
    pub schema: String,
    pub config: FarConfig,
    pub row_seed: u64,
    pub rows: Vec<usize>,
    /// `[re_0, im_0, ...]`, length `2n`.
    pub y: Vec<f64>,
}

impl From<&MeasurementSet> for MeasurementRecord {
    fn from(m: &MeasurementSet) -> Self {
        MeasurementRecord {
            schema: MEASUREMENT_SCHEMA.to_string(),
            config: m.config,
            row_seed: m.row_seed,
            rows: m.rows.clone(),
            y: interleave(&m.y),
        }
    }
}

impl TryFrom<MeasurementRecord> for MeasurementSet {
    type Error = FarModelError;

    fn try_from(r: MeasurementRecord) -> Result<Self, FarModelError> {
        r.config.validate()?;
        let codes = generate_codes(&r.config)?;
        let theta = build_theta(&r.config, &codes)?;
        if r.rows.windows(2).any(|w| w[0] >= w[1]) {
            return Err(FarModelError::Config("rows must be sorted and distinct".into()));
        }
        if r.rows.iter().any(|&i| i >= r.config.n_pulses) {
            return Err(FarModelError::Config("row index out of range".into()));
        }
        let y = deinterleave(&r.y)?;
        if y.len() != r.rows.len() {
            return Err(FarModelError::Config("y length does not match row count".into()));
        }
        let matrix = DMatrix::from_fn(r.rows.len(), theta.ncols(), |i, j| theta[(r.rows[i], j)]);
        Ok(MeasurementSet { config: r.config, row_seed: r.row_seed, matrix, rows: r.rows, y })
    }
}
