//! Equation instances `(f, g)` of the generalized rod equation
//!
//! `u_t + f'(u) u_x + ∂_x p * [g(u) + f''(u)/2 u_x^2] = 0`
//!
//! and the blowup-criterion constants derived from them.

mod params;
mod poly;

pub use params::{
    alpha_beta, derive_criterion_params, estimate_lipschitz, BlowupCase, CriterionParams,
    LipschitzSource, C1_K_MAX, C2_K_MAX, DEFAULT_LIPSCHITZ_SAMPLES,
};
pub use poly::{Extrema, Polynomial};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Points used to certify `f'' >= gamma` on the declared range.
pub const CONVEXITY_SAMPLES: usize = 10_000;

/// Default working range for the certification of model hypotheses.
pub const DEFAULT_RANGE: ValueRange = ValueRange { lo: -8.0, hi: 8.0 };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("gamma must be positive (got {0})")]
    NonPositiveGamma(f64),
    #[error("power preset needs Q >= 1 (got {0})")]
    InvalidPower(u32),
    #[error("invalid range [{lo}, {hi}]")]
    InvalidRange { lo: f64, hi: f64 },
    #[error("f'' is not bounded below by a positive constant on the range (min {min} at v = {at})")]
    NotUniformlyConvex { min: f64, at: f64 },
    #[error("declared gamma {gamma} exceeds the minimum {min} of f'' on the range")]
    GammaTooLarge { gamma: f64, min: f64 },
    #[error("non-finite parameter `{0}`")]
    NonFinite(&'static str),
}

/// Closed interval of solution values on which hypotheses are certified.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ValueRange {
    pub lo: f64,
    pub hi: f64,
}

impl ValueRange {
    pub fn new(lo: f64, hi: f64) -> Result<Self, ModelError> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(ModelError::InvalidRange { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.lo..=self.hi).contains(&v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "snake_case")]
pub enum PresetTag {
    CamassaHolm { kappa: f64 },
    Rod { gamma: f64 },
    Power { q: u32, kappa: f64 },
    Custom,
}

/// One instance of the equation: flux `f`, source `g` and the convexity floor `gamma`.
///
/// Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelSpec {
    f: Polynomial,
    f1: Polynomial,
    f2: Polynomial,
    g: Polynomial,
    g1: Polynomial,
    gamma: f64,
    preset: PresetTag,
    range: ValueRange,
}

impl ModelSpec {
    fn build(
        f: Polynomial,
        g: Polynomial,
        gamma: Option<f64>,
        preset: PresetTag,
        range: ValueRange,
    ) -> Result<Self, ModelError> {
        let f1 = f.derivative();
        let f2 = f1.derivative();
        let g1 = g.derivative();
        let ext = f2.extrema_on(range.lo, range.hi, CONVEXITY_SAMPLES);
        // dense sampling on top of the exact candidate set
        let (mut min, mut at) = (ext.min, ext.argmin);
        let h = (range.hi - range.lo) / CONVEXITY_SAMPLES as f64;
        for i in 0..=CONVEXITY_SAMPLES {
            let v = range.lo + i as f64 * h;
            let y = f2.eval(v);
            if y < min {
                min = y;
                at = v;
            }
        }
        if !(min > 0.0) {
            return Err(ModelError::NotUniformlyConvex { min, at });
        }
        let gamma = match gamma {
            Some(gm) if !gm.is_finite() => return Err(ModelError::NonFinite("gamma")),
            Some(gm) if gm <= 0.0 => return Err(ModelError::NonPositiveGamma(gm)),
            Some(gm) if gm > min * (1.0 + 1e-12) => {
                return Err(ModelError::GammaTooLarge { gamma: gm, min })
            }
            Some(gm) => gm,
            None => min,
        };
        Ok(Self {
            f,
            f1,
            f2,
            g,
            g1,
            gamma,
            preset,
            range,
        })
    }

    /// `f(u) = u^2/2`, `g(u) = kappa u + u^2`.
    pub fn camassa_holm(kappa: f64) -> Result<Self, ModelError> {
        if !kappa.is_finite() {
            return Err(ModelError::NonFinite("kappa"));
        }
        Self::build(
            Polynomial::monomial(0.5, 2),
            Polynomial::new(vec![0.0, kappa, 1.0]),
            Some(1.0),
            PresetTag::CamassaHolm { kappa },
            DEFAULT_RANGE,
        )
    }

    /// Classical rod: `f(u) = gamma u^2/2`, `g(u) = (3 - gamma) u^2/2`.
    pub fn rod(gamma: f64) -> Result<Self, ModelError> {
        if !gamma.is_finite() {
            return Err(ModelError::NonFinite("gamma"));
        }
        if gamma <= 0.0 {
            return Err(ModelError::NonPositiveGamma(gamma));
        }
        Self::build(
            Polynomial::monomial(0.5 * gamma, 2),
            Polynomial::monomial(0.5 * (3.0 - gamma), 2),
            Some(gamma),
            PresetTag::Rod { gamma },
            DEFAULT_RANGE,
        )
    }

    /// `f(u) = u^{Q+1}/(Q+1)`, `g(u) = kappa u + (Q^2+3Q)/(2(Q+1)) u^{Q+1}`.
    ///
    /// `gamma` is certified as the minimum of `f'' = Q u^{Q-1}` on `range`.
    pub fn power(q: u32, kappa: f64, range: ValueRange) -> Result<Self, ModelError> {
        if q == 0 {
            return Err(ModelError::InvalidPower(q));
        }
        if !kappa.is_finite() {
            return Err(ModelError::NonFinite("kappa"));
        }
        let qf = q as f64;
        let k = q as usize + 1;
        let g = Polynomial::monomial((qf * qf + 3.0 * qf) / (2.0 * (qf + 1.0)), k)
            .add(&Polynomial::monomial(kappa, 1));
        Self::build(
            Polynomial::monomial(1.0 / (qf + 1.0), k),
            g,
            None,
            PresetTag::Power { q, kappa },
            range,
        )
    }

    /// Polynomial `f` and `g` given by ascending coefficients. `gamma` defaults to
    /// the certified minimum of `f''` on `range`.
    pub fn custom(
        f_coeffs: Vec<f64>,
        g_coeffs: Vec<f64>,
        range: ValueRange,
        gamma: Option<f64>,
    ) -> Result<Self, ModelError> {
        if f_coeffs.iter().chain(&g_coeffs).any(|c| !c.is_finite()) {
            return Err(ModelError::NonFinite("coefficients"));
        }
        Self::build(
            Polynomial::new(f_coeffs),
            Polynomial::new(g_coeffs),
            gamma,
            PresetTag::Custom,
            range,
        )
    }

    /// Same equation certified on a different range.
    pub fn with_range(&self, range: ValueRange) -> Result<Self, ModelError> {
        let gamma = match self.preset {
            PresetTag::Power { .. } | PresetTag::Custom => None,
            _ => Some(self.gamma),
        };
        Self::build(self.f.clone(), self.g.clone(), gamma, self.preset, range)
    }

    pub fn f(&self, v: f64) -> f64 {
        self.f.eval(v)
    }
    pub fn f_prime(&self, v: f64) -> f64 {
        self.f1.eval(v)
    }
    pub fn f_second(&self, v: f64) -> f64 {
        self.f2.eval(v)
    }
    pub fn g(&self, v: f64) -> f64 {
        self.g.eval(v)
    }
    pub fn g_prime(&self, v: f64) -> f64 {
        self.g1.eval(v)
    }

    pub fn f_poly(&self) -> &Polynomial {
        &self.f
    }
    pub fn f_second_poly(&self) -> &Polynomial {
        &self.f2
    }
    pub fn g_poly(&self) -> &Polynomial {
        &self.g
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn preset(&self) -> PresetTag {
        self.preset
    }
    pub fn range(&self) -> ValueRange {
        self.range
    }

    /// `f` and `g` both even, so that `u -> -u` maps solutions to solutions
    /// after reflecting `x`.
    pub fn is_even(&self) -> bool {
        let odd_zero = |p: &Polynomial| p.coeffs().iter().skip(1).step_by(2).all(|&c| c == 0.0);
        odd_zero(&self.f) && odd_zero(&self.g)
    }
}
