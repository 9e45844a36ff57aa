//! Elementary closed-form approximations of the radar observation budgets,
//! with the chi-moment machinery and regime classification that select
//! between them.
//!
//! Each budget is approximated by expanding around the stationary point of
//! the underlying objective; the normalized offset between that point and
//! the chi mean is absorbed into three closed-form cases, selected by how
//! the per-target pulse ratio `N/K` compares against `mu_M / sigma_M`
//! (roughly `2 sqrt(M)`).

use serde::{Deserialize, Serialize};

use crate::scalar::{count, lit, Real};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ApproxError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("regime violated: {0}")]
    Regime(String),
}

/// Mean and standard deviation of the chi distribution with `dof` degrees
/// of freedom.
pub fn chi_dof_moments<S: Real>(dof: usize) -> (S, S) {
    let half = lit::<S>(0.5);
    let dof_s = count::<S>(dof);
    let mean = S::SQRT_2() * ((half * (dof_s + S::one())).ln_gamma() - (half * dof_s).ln_gamma()).exp();
    let var = dof_s - mean * mean;
    (mean, var.sqrt())
}

/// Moments of the chi distribution with `2M` degrees of freedom, together
/// with their large-`M` elementary approximations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiMoments<S> {
    pub m: usize,
    /// Exact mean `mu_M = sqrt(2) Gamma(M + 1/2) / Gamma(M)`.
    pub mu: S,
    /// Exact variance `sigma_M^2 = 2M - mu_M^2`.
    pub sigma2: S,
    /// Large-`M` approximation of `mu_M^2`, namely `2M - 1/2`.
    pub mu2_approx: S,
    /// Large-`M` approximation of `sigma_M^2`, namely `1/2`.
    pub sigma2_approx: S,
}

pub fn chi_moments<S: Real>(m: usize) -> ChiMoments<S> {
    assert!(m >= 1, "chi_moments requires M >= 1");
    let (mu, sigma) = chi_dof_moments::<S>(2 * m);
    ChiMoments {
        m,
        mu,
        sigma2: sigma * sigma,
        mu2_approx: lit::<S>(2.0) * count::<S>(m) - lit::<S>(0.5),
        sigma2_approx: lit::<S>(0.5),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    /// `N/K` well above `mu_M / sigma_M`: few extended targets.
    Sparse,
    /// `N/K` comparable to `mu_M / sigma_M`.
    Critical,
    /// `N/K` well below `mu_M / sigma_M`: nearly saturated scene.
    Dense,
}

/// Cutoffs on the normalized ratio `(N/K) / (mu_M / sigma_M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeThresholds<S> {
    pub hi: S,
    pub lo: S,
}

impl<S: Real> Default for RegimeThresholds<S> {
    fn default() -> Self {
        Self { hi: lit(4.0), lo: lit(0.25) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RegimeReport<S> {
    /// `(N/K) / (mu_M / sigma_M)`.
    pub ratio: S,
    pub regime: Regime,
    pub thresholds: RegimeThresholds<S>,
}

/// Classifies the scene against the chi-moment ratio.
pub fn classify_regime<S: Real>(
    m_freqs: usize,
    n_pulses: usize,
    k: S,
    thresholds: RegimeThresholds<S>,
) -> RegimeReport<S> {
    assert!(k > S::zero(), "classify_regime requires K >= 1");
    let moments = chi_moments::<S>(m_freqs);
    let ratio = (count::<S>(n_pulses) / k) / (moments.mu / moments.sigma2.sqrt());
    let regime = if ratio > thresholds.hi {
        Regime::Sparse
    } else if ratio < thresholds.lo {
        Regime::Dense
    } else {
        Regime::Critical
    };
    RegimeReport { ratio, regime, thresholds }
}

/// Requested block-budget approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NbCase {
    Auto,
    Case1,
    Case2,
    Case3,
}

/// Requested standard-budget approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NsCase {
    Auto,
    Case1,
    Case2,
}

/// Which closed form produced a value (relevant for `Auto` requests).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Formula {
    Nb1,
    Nb2,
    Nb3,
    Ns1,
    Ns2,
}

/// An approximation result. `value` is the raw closed form (it may exceed
/// `M * N` outside its regime); `clamped` caps it at `M * N` for plotting.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ApproxValue<S> {
    pub value: S,
    pub clamped: S,
    pub formula: Formula,
}

fn clamp_budget<S: Real>(value: S, m_freqs: usize, n_pulses: usize, formula: Formula) -> ApproxValue<S> {
    let max = count::<S>(m_freqs) * count::<S>(n_pulses);
    ApproxValue { value, clamped: value.min(max).max(S::zero()), formula }
}

/// Closed-form approximation of the block-recovery budget `N_b`.
pub fn nb_approx<S: Real>(
    m_freqs: usize,
    n_pulses: usize,
    k: S,
    case: NbCase,
    thresholds: RegimeThresholds<S>,
) -> Result<ApproxValue<S>, ApproxError> {
    let n = count::<S>(n_pulses);
    if k < S::zero() || k > n {
        return Err(ApproxError::Domain(format!("K = {k} outside [0, {n_pulses}]")));
    }
    let resolved = match case {
        NbCase::Auto => {
            if k <= S::zero() {
                return Err(ApproxError::Domain("automatic dispatch requires K >= 1".into()));
            }
            match classify_regime(m_freqs, n_pulses, k, thresholds).regime {
                Regime::Sparse => NbCase::Case1,
                Regime::Critical => NbCase::Case2,
                Regime::Dense => NbCase::Case3,
            }
        }
        other => other,
    };
    let m = count::<S>(m_freqs);
    let two = lit::<S>(2.0);
    let four_m1 = lit::<S>(4.0) * m - S::one();
    match resolved {
        NbCase::Case1 => {
            if k <= S::zero() {
                return Err(ApproxError::Domain("case 1 requires K >= 1".into()));
            }
            let arg = (n - k) / (k * four_m1.sqrt());
            if arg <= S::one() {
                return Err(ApproxError::Regime(format!(
                    "case 1 needs (N-K)/(K sqrt(4M-1)) > 1, got {arg}"
                )));
            }
            let value = two * m * k - k / lit::<S>(4.0)
                + (S::SQRT_2() / two) * k * (four_m1 * arg.ln()).sqrt();
            Ok(clamp_budget(value, m_freqs, n_pulses, Formula::Nb1))
        }
        NbCase::Case2 => {
            if k <= S::zero() {
                return Err(ApproxError::Domain("case 2 requires K >= 1".into()));
            }
            let pi = S::PI();
            let nk_sum = n + k;
            let nk_diff = n - k;
            let xb = two * m - lit::<S>(0.75) + n / (lit::<S>(4.0) * k) - four_m1 * k / nk_sum
                + nk_diff * nk_diff / (two * k * pi * nk_sum)
                - (S::SQRT_2() + S::one()) * nk_diff / (two * nk_sum) * (four_m1 / pi).sqrt();
            let value = k * m + k / two * xb;
            Ok(clamp_budget(value, m_freqs, n_pulses, Formula::Nb2))
        }
        NbCase::Case3 => {
            let nk_diff = n - k;
            let value = m * n - four_m1 * nk_diff * nk_diff / (lit::<S>(4.0) * n);
            Ok(clamp_budget(value, m_freqs, n_pulses, Formula::Nb3))
        }
        NbCase::Auto => unreachable!(),
    }
}

/// Closed-form approximation of the standard-recovery budget `N_s`.
pub fn ns_approx<S: Real>(
    m_freqs: usize,
    n_pulses: usize,
    k: S,
    case: NsCase,
) -> Result<ApproxValue<S>, ApproxError> {
    let n = count::<S>(n_pulses);
    if k < S::zero() || k > n {
        return Err(ApproxError::Domain(format!("K = {k} outside [0, {n_pulses}]")));
    }
    let resolved = match case {
        NsCase::Auto => {
            if k > S::zero() && n / k > lit::<S>(4.0) {
                NsCase::Case1
            } else {
                NsCase::Case2
            }
        }
        other => other,
    };
    let m = count::<S>(m_freqs);
    let two = lit::<S>(2.0);
    match resolved {
        NsCase::Case1 => {
            if k <= S::zero() {
                return Err(ApproxError::Domain("case 1 requires K >= 1".into()));
            }
            if n <= two * k {
                return Err(ApproxError::Regime(format!(
                    "case 1 needs N > 2K, got N = {n_pulses}, K = {k}"
                )));
            }
            let tau = solve_tau_star(n_pulses, k);
            let value = two * m * k + m * k * tau.tau * tau.tau / two;
            Ok(clamp_budget(value, m_freqs, n_pulses, Formula::Ns1))
        }
        NsCase::Case2 => {
            let nk_diff = n - k;
            let value = m * n - S::PI() * m * nk_diff * nk_diff / (lit::<S>(4.0) * n);
            Ok(clamp_budget(value, m_freqs, n_pulses, Formula::Ns2))
        }
        NsCase::Auto => unreachable!(),
    }
}

/// Root of `log(tau^2 + 1) = log((N-K)/K) - tau^2 / 2`, clamped to zero when
/// the scene is too dense for a positive root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TauStar<S> {
    pub tau: S,
    /// Set when `N <= 2K` forced the zero clamp.
    pub clamped: bool,
    /// `|g(tau)|` at the returned point.
    pub residual: S,
}

pub fn solve_tau_star<S: Real>(n_pulses: usize, k: S) -> TauStar<S> {
    assert!(k > S::zero(), "solve_tau_star requires K > 0");
    let n = count::<S>(n_pulses);
    let two = lit::<S>(2.0);
    if n <= two * k {
        let residual = if n > k {
            ((n - k) / k).ln().abs()
        } else {
            S::infinity()
        };
        return TauStar { tau: S::zero(), clamped: true, residual };
    }
    let target = ((n - k) / k).ln();
    // g is strictly increasing; g(0) = -target < 0 and the upper end is
    // positive by construction.
    let g = |t: S| (t * t + S::one()).ln() + t * t / two - target;
    let mut lo = S::zero();
    let mut hi = (two * target).sqrt() + S::one();
    let tol = S::root_tol();
    while hi - lo > tol {
        let mid = lit::<S>(0.5) * (lo + hi);
        if g(mid) < S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let tau = lit::<S>(0.5) * (lo + hi);
    TauStar { tau, clamped: false, residual: g(tau).abs() }
}
