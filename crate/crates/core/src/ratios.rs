//! Closed-form competitive ratios and self-checks of the identities they satisfy.
//!
//! For additive accuracy `0 < δ < 1/2` with `κ = 2/(1-2δ)`:
//!
//! ```text
//! p = -0.5/⌊κ⌋ + sqrt(1/(4⌊κ⌋²) + (1-2δ)/⌊κ⌋)
//! q = 1 - 2δ - 1/⌈κ⌉
//! c = 1/min(p, q)
//! ```
//!
//! `p` is the positive root of `⌊κ⌋·p/(1-p-2δ) = 1/p`. With removals allowed the
//! ratio is `1/x` with `x = (2-2δ)/(3-2δ)`, capped by the golden ratio.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Largest `δ` where the removability ratio with additive estimates beats `Φ`: `(3 - √5)/4`.
pub fn delta_star_additive() -> f64 {
    (3.0 - 5f64.sqrt()) / 4.0
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RatioError {
    #[error("delta {0} is outside (0, 0.5); no algorithm is competitive for delta >= 0.5")]
    OutOfRange(f64),
}

/// Which of the two lower-bound families is binding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    /// `p <= q`
    P,
    /// `q < p`
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioBundle {
    pub delta: f64,
    pub kappa: f64,
    pub kappa_floor: u64,
    pub kappa_ceil: u64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub c: f64,
    pub greedy_bound: f64,
    pub regime: Regime,
}

impl RatioBundle {
    /// `|⌊κ⌋·p/(1-p-2δ) - 1/p|`
    pub fn eq2_residual(&self) -> f64 {
        let k = self.kappa_floor as f64;
        (k * self.p / (1.0 - self.p - 2.0 * self.delta) - 1.0 / self.p).abs()
    }

    /// Largest violation among `1-p-2δ <= p`, `1-q-2δ = 1/⌈κ⌉` and `1/⌈κ⌉ <= q`.
    pub fn eq3_violation(&self) -> f64 {
        let d = self.delta;
        let inv_ceil = 1.0 / self.kappa_ceil as f64;
        let a = (1.0 - self.p - 2.0 * d - self.p).max(0.0);
        let b = ((1.0 - self.q - 2.0 * d) - inv_ceil).abs();
        let c = (inv_ceil - self.q).max(0.0);
        a.max(b).max(c)
    }
}

/// `⌊κ⌋` and `⌈κ⌉`, treating `κ` within a relative `1e-9` of an integer as that integer.
fn kappa_floor_ceil(kappa: f64) -> (u64, u64) {
    let nearest = kappa.round();
    if (kappa - nearest).abs() <= 1e-9 * kappa {
        (nearest as u64, nearest as u64)
    } else {
        (kappa.floor() as u64, kappa.ceil() as u64)
    }
}

/// All closed-form quantities for additive accuracy `δ ∈ (0, 0.5)`.
pub fn ratio_bundle(delta: f64) -> Result<RatioBundle, RatioError> {
    if !(delta > 0.0 && delta < 0.5) {
        return Err(RatioError::OutOfRange(delta));
    }
    let slack = 1.0 - 2.0 * delta;
    let kappa = 2.0 / slack;
    let (kf, kc) = kappa_floor_ceil(kappa);
    let k = kf as f64;
    let p = -0.5 / k + (1.0 / (4.0 * k * k) + slack / k).sqrt();
    let q = slack - 1.0 / kc as f64;
    let (r, regime) = if p <= q { (p, Regime::P) } else { (q, Regime::Q) };
    Ok(RatioBundle {
        delta,
        kappa,
        kappa_floor: kf,
        kappa_ceil: kc,
        p,
        q,
        r,
        c: 1.0 / r,
        greedy_bound: kappa,
        regime,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemovabilityBundle {
    pub delta: f64,
    pub x_add: f64,
    pub x_mult: f64,
    pub phi: f64,
    pub effective_ratio_add: f64,
    pub effective_ratio_mult: f64,
    pub delta_star_add: f64,
    pub delta_star_mult: f64,
}

/// `x = (2-2δ)/(3-2δ)`: the fill level that the removability algorithm guarantees.
pub fn removability_x_additive(delta: f64) -> f64 {
    (2.0 - 2.0 * delta) / (3.0 - 2.0 * delta)
}

/// Multiplicative counterpart of [`removability_x_additive`],
/// `(sqrt(δ²+10δ+9) + δ - 3)/(4δ)`, evaluated in the cancellation-free form
/// `4/(sqrt(δ²+10δ+9) + 3 - δ)`. Equals `2/3` at `δ = 0`.
pub fn removability_x_multiplicative(delta: f64) -> f64 {
    4.0 / ((delta * delta + 10.0 * delta + 9.0).sqrt() + 3.0 - delta)
}

/// Solves `1/x_mult(δ) = Φ` by bisection; `1/x_mult` is increasing from 1.5 towards 2.
pub fn delta_star_multiplicative() -> f64 {
    let (mut lo, mut hi) = (0.0f64, 16.0f64);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if 1.0 / removability_x_multiplicative(mid) < PHI {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Removability ratios for `δ >= 0`.
pub fn removability_bundle(delta: f64) -> RemovabilityBundle {
    let x_add = removability_x_additive(delta);
    let x_mult = removability_x_multiplicative(delta);
    RemovabilityBundle {
        delta,
        x_add,
        x_mult,
        phi: PHI,
        effective_ratio_add: (1.0 / x_add).min(PHI),
        effective_ratio_mult: (1.0 / x_mult).min(PHI),
        delta_star_add: delta_star_additive(),
        delta_star_mult: delta_star_multiplicative(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub points: usize,
    pub max_eq2_residual: f64,
    pub max_eq3_violation: f64,
    pub passes: bool,
}

/// Checks the defining equation of `p` and the `p`/`q` inequalities on every grid point.
pub fn verify_identities(delta_grid: &[f64]) -> Result<IdentityReport, RatioError> {
    let mut report = IdentityReport { points: 0, max_eq2_residual: 0.0, max_eq3_violation: 0.0, passes: true };
    for &delta in delta_grid {
        let b = ratio_bundle(delta)?;
        report.points += 1;
        report.max_eq2_residual = report.max_eq2_residual.max(b.eq2_residual());
        report.max_eq3_violation = report.max_eq3_violation.max(b.eq3_violation());
    }
    report.passes = report.max_eq2_residual <= 1e-9 && report.max_eq3_violation <= 1e-12;
    Ok(report)
}

/// `(δ, c(δ))` pairs for the additive competitive-ratio curve.
pub fn figure1_curve(delta_grid: &[f64]) -> Result<Vec<(f64, f64)>, RatioError> {
    delta_grid.iter().map(|&d| ratio_bundle(d).map(|b| (d, b.c))).collect()
}

/// Largest `k` listed by [`kappa_breakpoints`]; the breakpoints accumulate at 1/2.
pub const MAX_BREAKPOINT_K: u64 = 1_000_000;

/// `δ` values in `(lo, hi)` where `⌊κ⌋` or `⌈κ⌉` changes, i.e. `δ = 1/2 - 1/k`
/// for `3 <= k <= MAX_BREAKPOINT_K`. These are the only places the curve of
/// `c(δ)` may jump.
pub fn kappa_breakpoints(lo: f64, hi: f64) -> Vec<f64> {
    (3u64..=MAX_BREAKPOINT_K)
        .map(|k| 0.5 - 1.0 / k as f64)
        .take_while(|&d| d < hi)
        .filter(|&d| d > lo)
        .collect()
}

/// Evenly spaced `δ` values from `from` to `to` inclusive, rounded to 12 decimals.
pub fn delta_range(from: f64, to: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || to < from {
        return Vec::new();
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    (0..=n)
        .map(|i| ((from + i as f64 * step) * 1e12).round() / 1e12)
        .collect()
}
