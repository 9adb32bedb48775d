use serde::{Deserialize, Serialize};

use super::{ModelSpec, PresetTag};

/// Admissible Lipschitz bound when `g` attains its minimum.
pub const C1_K_MAX: f64 = 1.0;
/// Admissible Lipschitz bound when `g` attains its maximum (`1/sqrt(8)`).
pub const C2_K_MAX: f64 = 0.353_553_390_593_273_8;

/// Relative excess over the admissible bound tolerated in sampled `K` estimates.
pub const SAMPLED_K_SLACK: f64 = 1e-9;
pub const DEFAULT_LIPSCHITZ_SAMPLES: usize = 100_000;

/// Which extremum of `g` the local criterion is built on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlowupCase {
    /// `g` bounded below, minimum `m = g(c)`.
    C1,
    /// `g` bounded above, maximum `M = g(c)`.
    C2,
    /// Neither extremum has an admissible Lipschitz constant.
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LipschitzSource {
    Analytic,
    Sampled { samples: usize },
}

/// Constants of the local-in-space blowup criterion `u0'(x0) < -beta |u0(x0) - c|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionParams {
    pub case: BlowupCase,
    /// Arg-extremum of `g`.
    pub c: f64,
    /// `m = min g` for C1, `M = max g` for C2.
    pub extremum: f64,
    /// Lipschitz constant of `sqrt((g - m)/gamma)` or `sqrt((M - g)/gamma)`.
    #[serde(rename = "K")]
    pub k: f64,
    pub alpha: f64,
    pub beta: f64,
    pub source: LipschitzSource,
    pub diagnostic: String,
}

impl CriterionParams {
    pub fn is_applicable(&self) -> bool {
        self.case != BlowupCase::None
    }

    fn from_case(case: BlowupCase, c: f64, extremum: f64, k: f64, source: LipschitzSource) -> Self {
        let (alpha, beta) = alpha_beta(case, k);
        Self {
            case,
            // no signed zeros in reports
            c: c + 0.0,
            extremum: extremum + 0.0,
            k,
            alpha,
            beta,
            source,
            diagnostic: String::new(),
        }
    }

    fn inapplicable(diagnostic: String, source: LipschitzSource) -> Self {
        Self {
            case: BlowupCase::None,
            c: f64::NAN,
            extremum: f64::NAN,
            k: f64::NAN,
            alpha: f64::NAN,
            beta: f64::NAN,
            source,
            diagnostic,
        }
    }
}

/// `(alpha, beta)` for a Lipschitz constant `k`, in cancellation-free form.
///
/// C1: `alpha = (sqrt(1+8k^2)-1)/(4k^2) = 2/(1+sqrt(1+8k^2))`, the largest root of
/// `2k^2 a^2 + a - 1 = 0`. C2: `alpha = 2/(1+sqrt(1-8k^2))`, the smallest root of
/// `2k^2 a^2 - a + 1 = 0`. In both, `beta = 2 k^2 alpha`.
pub fn alpha_beta(case: BlowupCase, k: f64) -> (f64, f64) {
    let k2 = k * k;
    let root = match case {
        BlowupCase::C1 => (1.0 + 8.0 * k2).sqrt(),
        BlowupCase::C2 => (1.0 - 8.0 * k2).max(0.0).sqrt(),
        BlowupCase::None => return (f64::NAN, f64::NAN),
    };
    let alpha = 2.0 / (1.0 + root);
    (alpha, 2.0 * k2 * alpha)
}

fn k_max(case: BlowupCase) -> f64 {
    match case {
        BlowupCase::C1 => C1_K_MAX,
        BlowupCase::C2 => C2_K_MAX,
        BlowupCase::None => f64::NAN,
    }
}

fn admissible(case: BlowupCase, k: f64) -> bool {
    let kmax = k_max(case);
    if kmax.is_nan() {
        return false;
    }
    // closed interval; compare squares with a relative slack of a few ulps
    k.is_finite() && k * k <= kmax * kmax * (1.0 + 1e-12)
}

/// Derives the criterion constants for `model`.
///
/// Presets with closed forms (Camassa–Holm, rod, power with `Q = 1`) are
/// analytic; everything else is located on the model range, with `K` estimated
/// from [`DEFAULT_LIPSCHITZ_SAMPLES`] samples.
pub fn derive_criterion_params(model: &ModelSpec) -> CriterionParams {
    derive_with_samples(model, DEFAULT_LIPSCHITZ_SAMPLES)
}

pub(crate) fn derive_with_samples(model: &ModelSpec, samples: usize) -> CriterionParams {
    match model.preset() {
        PresetTag::CamassaHolm { kappa } | PresetTag::Power { q: 1, kappa } => {
            // phi(u) = |u + kappa/2|
            CriterionParams::from_case(
                BlowupCase::C1,
                -0.5 * kappa,
                -0.25 * kappa * kappa,
                1.0,
                LipschitzSource::Analytic,
            )
        }
        PresetTag::Rod { gamma } => rod_params(gamma),
        PresetTag::Power { .. } | PresetTag::Custom => sampled_params(model, samples),
    }
}

fn rod_params(gamma: f64) -> CriterionParams {
    let src = LipschitzSource::Analytic;
    // g = (3 - gamma)/2 u^2, so phi or psi = sqrt(|3 - gamma|/(2 gamma)) |u|
    let k = ((3.0 - gamma).abs() / (2.0 * gamma)).sqrt();
    let case = if gamma <= 3.0 {
        BlowupCase::C1
    } else {
        BlowupCase::C2
    };
    if admissible(case, k) {
        CriterionParams::from_case(case, 0.0, 0.0, k, src)
    } else {
        CriterionParams::inapplicable(
            format!(
                "rod gamma = {gamma}: K = {k:.6} exceeds the admissible bound for {case:?}; \
                 the local criterion needs 1 <= gamma <= 4"
            ),
            src,
        )
    }
}

fn sampled_params(model: &ModelSpec, samples: usize) -> CriterionParams {
    let r = model.range();
    let ext = model.g_poly().extrema_on(r.lo, r.hi, samples);
    let src = LipschitzSource::Sampled { samples };
    let mut notes = Vec::new();
    for case in [BlowupCase::C1, BlowupCase::C2] {
        let (c, e) = match case {
            BlowupCase::C1 => (ext.argmin, ext.min),
            _ => (ext.argmax, ext.max),
        };
        let mut k = estimate_lipschitz(model, case, e, samples);
        // difference quotients of |linear| come out a few ulps above the true slope
        if k > k_max(case) && k <= k_max(case) * (1.0 + SAMPLED_K_SLACK) {
            k = k_max(case);
        }
        if admissible(case, k) {
            return CriterionParams::from_case(case, c, e, k, src);
        }
        notes.push(format!("{case:?}: c = {c}, extremum = {e}, K ~ {k:.6}"));
    }
    CriterionParams::inapplicable(
        format!(
            "no admissible extremum of g on [{}, {}] ({})",
            r.lo,
            r.hi,
            notes.join("; ")
        ),
        src,
    )
}

/// Largest centered-difference slope of `phi = sqrt((g - m)/gamma)` (C1) or
/// `psi = sqrt((M - g)/gamma)` (C2) over `samples` equispaced points of the range.
pub fn estimate_lipschitz(model: &ModelSpec, case: BlowupCase, extremum: f64, samples: usize) -> f64 {
    let r = model.range();
    let gamma = model.gamma();
    let sign = match case {
        BlowupCase::C1 => 1.0,
        BlowupCase::C2 => -1.0,
        BlowupCase::None => return f64::NAN,
    };
    let samples = samples.max(3);
    let h = (r.hi - r.lo) / (samples - 1) as f64;
    let phi = |v: f64| (sign * (model.g(v) - extremum) / gamma).max(0.0).sqrt();
    let vals: Vec<f64> = (0..samples).map(|i| phi(r.lo + i as f64 * h)).collect();
    vals.windows(3)
        .map(|w| (w[2] - w[0]).abs() / (2.0 * h))
        .fold(0.0, f64::max)
}
