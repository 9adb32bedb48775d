use serde::Serialize;

use super::CharTrace;

pub const RICCATI_TOLERANCE: f64 = 1e-2;
pub const MONOTONE_TOLERANCE: f64 = 1e-3;

/// Checks along one characteristic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiccatiReport {
    pub x0: f64,
    /// `A B < 0` at every sample.
    pub regime: bool,
    pub h0: f64,
    /// `2 / (gamma h(0))` when in the Riccati regime.
    pub bound: Option<f64>,
    /// Smallest `h(t) / (h(0) / (1 - gamma h(0) t / 2))`.
    pub min_ratio: f64,
    /// Largest decrease of `A` between samples, relative to `1 + |A|`.
    pub a_drop: f64,
    /// Largest increase of `B` between samples, relative to `1 + |B|`.
    pub b_rise: f64,
    pub breakdown_before_bound: Option<bool>,
    pub passed: bool,
}

/// Verifies `h(t) >= h(0) / (1 - gamma h(0) t / 2)` within 1% relative, `A`
/// nondecreasing and `B` nonincreasing, and that the observed breakdown time
/// (if given) precedes `2 / (gamma h(0))`. A trace that never has `A B < 0`
/// passes vacuously.
pub fn riccati_check(trace: &CharTrace, gamma: f64, t_obs: Option<f64>) -> RiccatiReport {
    let s = &trace.samples;
    let h0 = s.first().map_or(0.0, |p| p.h);
    let regime = !s.is_empty() && s.iter().all(|p| p.a * p.b < 0.0);
    let mut rep = RiccatiReport {
        x0: trace.x0,
        regime,
        h0,
        bound: None,
        min_ratio: f64::INFINITY,
        a_drop: 0.0,
        b_rise: 0.0,
        breakdown_before_bound: None,
        passed: true,
    };
    if !regime {
        return rep;
    }
    let bound = 2.0 / (gamma * h0);
    rep.bound = Some(bound);
    let mut past_bound = false;
    for p in s {
        let denom = 1.0 - 0.5 * gamma * h0 * p.t;
        if denom <= 0.0 {
            past_bound = true;
            continue;
        }
        rep.min_ratio = rep.min_ratio.min(p.h * denom / h0);
    }
    for w in s.windows(2) {
        rep.a_drop = rep.a_drop.max((w[0].a - w[1].a) / (1.0 + w[0].a.abs()));
        rep.b_rise = rep.b_rise.max((w[1].b - w[0].b) / (1.0 + w[0].b.abs()));
    }
    rep.breakdown_before_bound = t_obs.map(|t| t <= bound);
    rep.passed = !past_bound
        && rep.min_ratio >= 1.0 - RICCATI_TOLERANCE
        && rep.a_drop <= MONOTONE_TOLERANCE
        && rep.b_rise <= MONOTONE_TOLERANCE
        && rep.breakdown_before_bound != Some(false);
    rep
}
