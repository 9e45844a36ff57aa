//! Phase-transition curves for standard and block sparse recovery, the
//! observation budgets they imply for frequency-agile radar, closed-form
//! elementary approximations of those budgets, and seeded Monte Carlo
//! experiments that validate the curves against actual solver behavior.
//!
//! The analytic modules ([`statdim`], [`approx`]) are generic over the
//! scalar type through [`scalar::Real`]; the aliases below fix `f64`, the
//! precision all documented tolerances are stated for. The experiment
//! stack ([`farmodel`], [`recovery`], [`montecarlo`]) works in `f64` and
//! `Complex64` throughout.

pub mod approx;
pub mod farmodel;
pub mod montecarlo;
pub mod quad;
pub mod recovery;
pub mod scalar;
pub mod statdim;

pub use statdim::{CurveQuery, RecoveryKind};

/// `f64` curve evaluation result.
pub type CurveValue = statdim::CurveValue<f64>;
/// `f64` radar budget query.
pub type FarBudget = statdim::FarBudget<f64>;
/// `f64` chi moments.
pub type ChiMoments = approx::ChiMoments<f64>;
/// `f64` regime thresholds.
pub type RegimeThresholds = approx::RegimeThresholds<f64>;
/// `f64` regime report.
pub type RegimeReport = approx::RegimeReport<f64>;
/// `f64` approximation value.
pub type ApproxValue = approx::ApproxValue<f64>;
/// `f64` stationary point of the sparse standard-budget objective.
pub type TauStar = approx::TauStar<f64>;
