//! Recovery-threshold arithmetic.
//!
//! The central quantity is the divergence
//!
//! ```text
//! D = n · (α₁p + α₂q − (α₁+α₂) · p^{α₁/(α₁+α₂)} · q^{α₂/(α₁+α₂)})
//! ```
//!
//! over the two smallest community fractions. Spectral Partition is
//! guaranteed fewer than `s` misclassified vertices once
//! `D − np/ln(np) ≥ ln(n/s)`, and asymptotically whenever
//! `D / ln(n/s) > 1`. In the binary symmetric model with
//! `p = a·ln n/n`, `q = b·ln n/n`, `D = ln n · ((a+b)/2 − √(ab))`.

use std::fmt;
use std::str::FromStr;

use super::SbmParams;
use crate::error::{Result, SbmError};

/// The `s` used for exact recovery. Any `s < 1` means zero errors; this
/// keeps `ln(n/s)` finite.
pub const EXACT_RECOVERY_S: f64 = 0.999;

/// The divergence `D` for the two smallest communities.
///
/// Evaluated as `n·q·(α₁+α₂)·(w·expm1(t) − expm1(w·t))` with
/// `t = ln(p/q)` and `w = α₁/(α₁+α₂)`, which is algebraically identical
/// but avoids cancellation when `p ≈ q`. `q = 0` gives the continuous
/// limit `n·α₁·p`.
pub fn divergence(params: &SbmParams) -> f64 {
    let n = params.n() as f64;
    let (a1, a2) = (params.alphas()[0], params.alphas()[1]);
    let (p, q) = (params.p(), params.q());
    if p == q {
        return 0.0;
    }
    if q == 0.0 {
        return n * a1 * p;
    }
    let w = a1 / (a1 + a2);
    let t = ((p - q) / q).ln_1p();
    n * q * (a1 + a2) * (w * t.exp_m1() - (w * t).exp_m1())
}

/// How many misclassified vertices are tolerated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RecoveryTarget {
    /// Zero errors (`s = EXACT_RECOVERY_S`).
    Exact,
    /// `s = n^x`.
    Power(f64),
    Absolute(f64),
}

impl RecoveryTarget {
    pub fn resolve(&self, n: usize) -> f64 {
        match *self {
            RecoveryTarget::Exact => EXACT_RECOVERY_S,
            RecoveryTarget::Power(x) => (n as f64).powf(x),
            RecoveryTarget::Absolute(s) => s,
        }
    }
}

impl fmt::Display for RecoveryTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RecoveryTarget::Exact => write!(f, "exact"),
            RecoveryTarget::Power(x) => write!(f, "n^{x}"),
            RecoveryTarget::Absolute(s) => write!(f, "{s}"),
        }
    }
}

/// Accepts `exact`, `n^x` and plain numbers.
impl FromStr for RecoveryTarget {
    type Err = SbmError;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("exact") {
            return Ok(RecoveryTarget::Exact);
        }
        if let Some(x) = s.strip_prefix("n^") {
            let x: f64 = x
                .parse()
                .map_err(|_| SbmError::Parse(format!("bad exponent in target {s:?}")))?;
            return Ok(RecoveryTarget::Power(x));
        }
        let v: f64 = s
            .parse()
            .map_err(|_| SbmError::Parse(format!("bad recovery target {s:?}")))?;
        if v < 0.0 {
            return Err(SbmError::Parse(format!("negative recovery target {v}")));
        }
        Ok(RecoveryTarget::Absolute(v))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdReport {
    pub s: f64,
    pub divergence: f64,
    /// `np / ln(np)`.
    pub slack: f64,
    /// `ln(n/s)`.
    pub target: f64,
    /// `divergence / target`; above 1 means the asymptotic condition holds.
    pub eq1_ratio: f64,
    /// `divergence − slack ≥ target`.
    pub theorem1_holds: bool,
    /// `p/q − 1`, informational.
    pub epsilon: f64,
    /// `p·ln²n < 1`: the sparse regime the guarantee is stated for.
    pub sparse_regime: bool,
}

/// Evaluates the finite-`n` sufficient condition for at most `s` errors.
/// `s = 0` is read as [`EXACT_RECOVERY_S`].
pub fn check_condition(params: &SbmParams, s: f64) -> Result<ThresholdReport> {
    let n = params.n() as f64;
    if !(0.0..n).contains(&s) {
        return Err(SbmError::param(format!("s={s} must lie in [0, n={n})")));
    }
    let s = if s == 0.0 { EXACT_RECOVERY_S } else { s };
    let np = n * params.p();
    if np <= 1.0 {
        return Err(SbmError::Domain(format!(
            "np={np} ≤ 1, so np/ln(np) is undefined"
        )));
    }
    let divergence = divergence(params);
    let slack = np / np.ln();
    let target = (n / s).ln();
    let ln_n = n.ln();
    Ok(ThresholdReport {
        s,
        divergence,
        slack,
        target,
        eq1_ratio: divergence / target,
        theorem1_holds: divergence - slack >= target,
        epsilon: params.epsilon(),
        sparse_regime: params.p() * ln_n * ln_n < 1.0,
    })
}

/// `(a+b)/2 − √(ab)`, written as `(√a − √b)²/2`.
pub fn log_scaled_margin(a: f64, b: f64) -> f64 {
    let d = a.sqrt() - b.sqrt();
    0.5 * d * d
}
