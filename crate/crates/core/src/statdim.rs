//! Exact phase-transition curves for standard and block sparse recovery,
//! their complex-valued counterparts, and the radar observation budgets
//! derived from them.
//!
//! The central object is the curve
//!
//! ```text
//! phi_m(s_B, d) = inf_{tau >= 0} { s_B (m + tau^2) + (d - s_B) * T2(tau, m) }
//! ```
//!
//! where `T2(tau, m)` is the second tail moment of the chi distribution with
//! `m` degrees of freedom. The infimum is located through the stationarity
//! equation `tau * s_B = (d - s_B) * T1(tau, m)`, whose left side increases
//! and right side decreases in `tau`, so the root is unique and bisection
//! converges unconditionally.

use serde::{Deserialize, Serialize};

use crate::approx::chi_dof_moments;
use crate::quad::{integrate, QuadError};
use crate::scalar::{count, lit, Real};

/// Width of the bisection bracket beyond the chi mean, in standard
/// deviations. Past this point the order-1 tail moment is below 1e-14, so
/// the stationarity root cannot lie outside.
const TAIL_SIGMAS: f64 = 12.0;

/// Iteration cap for every bisection in this module.
const MAX_BISECT: usize = 200;

/// Absolute tolerance on the recoverable-target root `K`.
const K_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StatdimError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("bisection failed to bracket a root within {0} iterations")]
    NonConvergence(usize),
    #[error("budget {budget} exceeds the attainable maximum {max} at K = N")]
    BudgetOutOfRange { budget: f64, max: f64 },
    #[error(transparent)]
    Quadrature(#[from] QuadError),
}

/// Identifies one theoretical curve evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveQuery {
    /// Entries per block (`m`); 1 recovers the standard sparse curve.
    pub block_width: usize,
    /// Number of blocks (`d`); the ambient dimension is `block_width * d`.
    pub block_count: usize,
    /// Number of nonzero blocks (`s_B`), in `[0, d]`.
    pub block_sparsity: usize,
}

impl CurveQuery {
    pub fn new(
        block_width: usize,
        block_count: usize,
        block_sparsity: usize,
    ) -> Result<Self, StatdimError> {
        if block_width == 0 || block_count == 0 {
            return Err(StatdimError::Domain(
                "block width and block count must be positive".into(),
            ));
        }
        if block_sparsity > block_count {
            return Err(StatdimError::Domain(format!(
                "block sparsity {block_sparsity} exceeds block count {block_count}"
            )));
        }
        Ok(Self {
            block_width,
            block_count,
            block_sparsity,
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.block_width * self.block_count
    }
}

/// A curve evaluation: the statistical-dimension bound and the minimizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveValue<S> {
    /// Bound value, in units of real measurements (complex for the
    /// complex-valued curve and the radar budgets).
    pub value: S,
    /// Minimizing `tau`; infinite for the fully sparse degenerate case.
    pub tau_star: S,
    pub converged: bool,
    /// Stationarity residual at `tau_star`.
    pub residual: S,
}

/// Which norm the radar budget is stated for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecoveryKind {
    /// l2,1 minimization over blocks of width `M`.
    Block,
    /// Plain l1 minimization.
    Standard,
}

/// Radar observation-budget query: `M` frequencies, `N` pulses, `K` targets.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FarBudget<S> {
    pub m_freqs: usize,
    pub n_pulses: usize,
    /// Number of targets; real-valued so budgets can be inverted for K.
    pub k: S,
    pub kind: RecoveryKind,
}

/// Order of the tail moment `int_tau^inf (u - tau)^order phi_m(u) du`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentOrder {
    Zero,
    One,
    Two,
}

/// Log-density of the chi distribution with `dof` degrees of freedom.
///
/// Computed through the log-gamma function so it stays finite for large
/// `dof`; exponentiating recovers the pdf.
pub fn chi_log_pdf<S: Real>(u: S, dof: usize) -> Result<S, StatdimError> {
    if dof == 0 {
        return Err(StatdimError::Domain("degrees of freedom must be positive".into()));
    }
    if u < S::zero() {
        return Err(StatdimError::Domain(format!("chi pdf argument {u} is negative")));
    }
    let half_dof = lit::<S>(0.5) * count::<S>(dof);
    let norm = (half_dof - S::one()) * lit::<S>(2.0).ln() + half_dof.ln_gamma();
    if u == S::zero() {
        // u^{dof-1} is 1 at dof = 1 and 0 otherwise.
        return Ok(if dof == 1 { -norm } else { S::neg_infinity() });
    }
    Ok(count::<S>(dof - 1) * u.ln() - u * u * lit::<S>(0.5) - norm)
}

/// Upper end of the effective chi support: mean + 12 standard deviations.
fn chi_upper<S: Real>(dof: usize) -> S {
    let (mean, std) = chi_dof_moments::<S>(dof);
    mean + lit::<S>(TAIL_SIGMAS) * std
}

/// Tail moment `int_tau^inf (u - tau)^order phi_dof(u) du`.
///
/// `dof = 2` dispatches to closed forms in the complementary error function;
/// other degrees of freedom go through adaptive quadrature with the
/// integrand evaluated as `exp(chi_log_pdf)`.
pub fn tail_moment<S: Real>(tau: S, dof: usize, order: MomentOrder) -> Result<S, StatdimError> {
    if dof == 0 {
        return Err(StatdimError::Domain("degrees of freedom must be positive".into()));
    }
    if tau < S::zero() {
        return Err(StatdimError::Domain(format!("tail moment lower limit {tau} is negative")));
    }
    if dof == 2 {
        let half = lit::<S>(0.5);
        let gauss = (-tau * tau * half).exp();
        let erfc_term = (tau / S::SQRT_2()).erfc();
        return Ok(match order {
            MomentOrder::Zero => gauss,
            MomentOrder::One => (S::PI() * half).sqrt() * erfc_term,
            MomentOrder::Two => lit::<S>(2.0) * gauss - (lit::<S>(2.0) * S::PI()).sqrt() * tau * erfc_term,
        });
    }
    let hi = chi_upper::<S>(dof);
    if tau >= hi {
        return Ok(S::zero());
    }
    let f = |u: S| {
        let pdf = chi_log_pdf(u, dof).expect("u >= tau >= 0").exp();
        match order {
            MomentOrder::Zero => pdf,
            MomentOrder::One => (u - tau) * pdf,
            MomentOrder::Two => {
                let w = u - tau;
                w * w * pdf
            }
        }
    };
    Ok(integrate(&f, tau, hi, S::quad_tol())?)
}

/// Shared objective: `s (dof + tau^2) + (d - s) T2(tau, dof)` with real-valued
/// block weight `s`. `K` enters affinely, so fractional sparsity is exact.
fn objective<S: Real>(tau: S, dof: usize, d: S, s: S) -> Result<S, StatdimError> {
    let t2 = tail_moment(tau, dof, MomentOrder::Two)?;
    Ok(s * (count::<S>(dof) + tau * tau) + (d - s) * t2)
}

/// Locates the infimum of the shared objective over `tau >= 0`.
///
/// Returns the raw curve value (no complex halving applied).
fn curve_inf<S: Real>(dof: usize, d: S, s: S) -> Result<CurveValue<S>, StatdimError> {
    if s <= S::zero() {
        // Objective tends to zero as tau grows; infimum attained in the limit.
        return Ok(CurveValue {
            value: S::zero(),
            tau_star: S::infinity(),
            converged: true,
            residual: S::zero(),
        });
    }
    if s >= d {
        return Ok(CurveValue {
            value: count::<S>(dof) * d,
            tau_star: S::zero(),
            converged: true,
            residual: S::zero(),
        });
    }
    let stationarity =
        |tau: S| -> Result<S, StatdimError> { Ok(tau * s - (d - s) * tail_moment(tau, dof, MomentOrder::One)?) };

    let mut lo = S::zero();
    let mut hi = chi_upper::<S>(dof);
    if stationarity(lo)? > S::zero() || stationarity(hi)? < S::zero() {
        return Err(StatdimError::NonConvergence(0));
    }
    let tol = S::root_tol();
    let mut iters = 0;
    while hi - lo > tol {
        if iters >= MAX_BISECT {
            return Err(StatdimError::NonConvergence(MAX_BISECT));
        }
        let mid = lit::<S>(0.5) * (lo + hi);
        if stationarity(mid)? < S::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    let tau = lit::<S>(0.5) * (lo + hi);
    Ok(CurveValue {
        value: objective(tau, dof, d, s)?,
        tau_star: tau,
        converged: true,
        residual: stationarity(tau)?.abs(),
    })
}

/// The real-valued curve `phi_m(s_B, d)`.
pub fn curve_value<S: Real>(q: &CurveQuery) -> Result<CurveValue<S>, StatdimError> {
    CurveQuery::new(q.block_width, q.block_count, q.block_sparsity)?;
    curve_inf(q.block_width, count::<S>(q.block_count), count::<S>(q.block_sparsity))
}

/// The complex-valued curve `phi^c_m(s_B, d) = phi_{2m}(s_B, d) / 2`.
///
/// The value is in complex measurements; `tau_star` is passed through from
/// the doubled-width real curve.
pub fn complex_curve_value<S: Real>(q: &CurveQuery) -> Result<CurveValue<S>, StatdimError> {
    let doubled = CurveQuery::new(2 * q.block_width, q.block_count, q.block_sparsity)?;
    let real = curve_value::<S>(&doubled)?;
    Ok(CurveValue {
        value: real.value * lit::<S>(0.5),
        ..real
    })
}

/// Required observation count for exact radar reconstruction, in pulses.
///
/// Block recovery evaluates `phi^c_M(K, N)`; standard recovery evaluates
/// `M * phi^c_1(K, N)` with the target count entering the shared objective
/// directly, so the two coincide at `M = 1`.
pub fn far_budget<S: Real>(b: &FarBudget<S>) -> Result<CurveValue<S>, StatdimError> {
    if b.m_freqs == 0 || b.n_pulses == 0 {
        return Err(StatdimError::Domain("M and N must be positive".into()));
    }
    let n = count::<S>(b.n_pulses);
    if b.k < S::zero() || b.k > n {
        return Err(StatdimError::Domain(format!(
            "target count {} outside [0, {}]",
            b.k, b.n_pulses
        )));
    }
    let half = lit::<S>(0.5);
    match b.kind {
        RecoveryKind::Block => {
            let inner = curve_inf(2 * b.m_freqs, n, b.k)?;
            Ok(CurveValue {
                value: half * inner.value,
                ..inner
            })
        }
        RecoveryKind::Standard => {
            let inner = curve_inf(2, n, b.k)?;
            Ok(CurveValue {
                value: half * count::<S>(b.m_freqs) * inner.value,
                ..inner
            })
        }
    }
}

/// Inverts the budget for the number of recoverable targets `K`.
///
/// Monotonicity of the budget in `K` makes plain bisection on `[0, N]`
/// sufficient; the root is located to 1e-3 in `K`.
pub fn solve_for_k<S: Real>(
    m_freqs: usize,
    n_pulses: usize,
    budget: S,
    kind: RecoveryKind,
) -> Result<S, StatdimError> {
    if budget <= S::zero() {
        return Err(StatdimError::Domain(format!("budget {budget} must be positive")));
    }
    let eval = |k: S| -> Result<S, StatdimError> {
        Ok(far_budget(&FarBudget { m_freqs, n_pulses, k, kind })?.value)
    };
    let n = count::<S>(n_pulses);
    let at_full = eval(n)?;
    if budget > at_full {
        return Err(StatdimError::BudgetOutOfRange {
            budget: budget.to_f64().unwrap_or(f64::NAN),
            max: at_full.to_f64().unwrap_or(f64::NAN),
        });
    }
    let mut lo = S::zero();
    let mut hi = n;
    let tol = lit::<S>(K_TOL);
    let mut iters = 0;
    while hi - lo > tol {
        if iters >= MAX_BISECT {
            return Err(StatdimError::NonConvergence(MAX_BISECT));
        }
        let mid = lit::<S>(0.5) * (lo + hi);
        if eval(mid)? < budget {
            lo = mid;
        } else {
            hi = mid;
        }
        iters += 1;
    }
    Ok(lit::<S>(0.5) * (lo + hi))
}
