//! Blowup criteria evaluated on a sampled initial datum.
//!
//! Four checks are available: the local-in-space slope condition
//! `u0'(x0) < -beta |u0(x0) - c|`, the global condition built from the H¹ norm,
//! the sign-change obstruction for line-like data, and the monotonicity of
//! `e^{±beta x}(u - c)` that every global solution must satisfy. [`certify`] runs
//! all of them that apply.

mod global;
mod local;
mod shape;

pub use global::{check_tyz, tyz_constant, TyzConstant, TYZ_SAMPLES};
pub use local::{check_local, local_bound, riccati_bound};
pub use shape::{check_decay_monotonicity, check_sign_change, line_tail, monotonicity_violations};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::Field;
use crate::model::{derive_criterion_params, CriterionParams, ModelSpec};

/// Scale of roundoff in spectral slopes: `1e3 eps k_max (1 + max|u|)`.
pub fn noise_floor(u: &Field) -> f64 {
    let g = u.grid();
    let kmax = std::f64::consts::PI * g.n() as f64 / g.length();
    1e3 * f64::EPSILON * kmax * (1.0 + u.max_abs())
}

/// Points of a line-emulating datum must be this close to the tail value.
pub const LINE_TOLERANCE: f64 = 1e-6;
/// Margin by which a sign change has to clear `c`.
pub const SIGN_TOLERANCE: f64 = 1e-12;
/// Sub-cell samples per grid cell when refining a witness.
pub const REFINEMENT: usize = 10;

#[derive(Debug, Error, PartialEq)]
pub enum CriteriaError {
    #[error("{kind} needs an admissible extremum of g: {diagnostic}")]
    Inapplicable {
        kind: CriterionKind,
        diagnostic: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CriterionKind {
    LocalThm2,
    Tyz,
    SignChange,
    DecayMonotonicity,
}

impl std::fmt::Display for CriterionKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::LocalThm2 => "local_thm2",
            Self::Tyz => "tyz",
            Self::SignChange => "sign_change",
            Self::DecayMonotonicity => "decay_monotonicity",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub x0: f64,
    pub u0: f64,
    pub slope: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub kind: CriterionKind,
    pub satisfied: bool,
    pub witness: Option<Witness>,
    pub t_star_bound: Option<f64>,
    /// `2 / (gamma h(0))` at the witness, reported next to the local bound.
    pub riccati_bound: Option<f64>,
    pub detail: String,
}

impl CriterionReport {
    fn unsatisfied(kind: CriterionKind, detail: impl Into<String>) -> Self {
        Self {
            kind,
            satisfied: false,
            witness: None,
            t_star_bound: None,
            riccati_bound: None,
            detail: detail.into(),
        }
    }

    /// JSON certificate row.
    pub fn record(&self, params: &CriterionParams) -> CertificateRecord {
        let finite = |v: f64| v.is_finite().then_some(v);
        let applicable = params.is_applicable() && self.kind != CriterionKind::Tyz;
        CertificateRecord {
            kind: self.kind,
            satisfied: self.satisfied,
            x0: self.witness.map(|w| w.x0),
            u0_at_x0: self.witness.map(|w| w.u0),
            slope_at_x0: self.witness.map(|w| w.slope),
            beta: if applicable { finite(params.beta) } else { None },
            c: if applicable { finite(params.c) } else { None },
            k: if applicable { finite(params.k) } else { None },
            t_star_bound: self.t_star_bound,
            detail: self.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertificateRecord {
    pub kind: CriterionKind,
    pub satisfied: bool,
    pub x0: Option<f64>,
    pub u0_at_x0: Option<f64>,
    pub slope_at_x0: Option<f64>,
    pub beta: Option<f64>,
    pub c: Option<f64>,
    #[serde(rename = "K")]
    pub k: Option<f64>,
    pub t_star_bound: Option<f64>,
    pub detail: String,
}

/// Criterion outcomes for one datum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupReport {
    pub params: CriterionParams,
    pub gamma: f64,
    /// Satisfied certificates first, by increasing bound.
    pub reports: Vec<CriterionReport>,
    /// Smallest upper bound on the breakdown time over satisfied criteria.
    pub best_bound: Option<f64>,
    pub best_witness: Option<Witness>,
    /// Disagreements between criteria, e.g. a global certificate at a point
    /// the local criterion rejects.
    pub inconsistencies: Vec<String>,
}

impl BlowupReport {
    pub fn get(&self, kind: CriterionKind) -> Option<&CriterionReport> {
        self.reports.iter().find(|r| r.kind == kind)
    }

    pub fn certified(&self) -> bool {
        self.best_bound.is_some()
    }

    pub fn records(&self) -> Vec<CertificateRecord> {
        self.reports.iter().map(|r| r.record(&self.params)).collect()
    }
}

/// Runs every applicable criterion on `u0`.
///
/// With no admissible extremum of `g` only the global criterion runs. The
/// sign-change check is skipped unless `u0` is flat at `c` near both ends.
pub fn certify(u0: &Field, model: &ModelSpec) -> BlowupReport {
    let params = derive_criterion_params(model);
    certify_with(u0, model, params)
}

pub fn certify_with(u0: &Field, model: &ModelSpec, params: CriterionParams) -> BlowupReport {
    let gamma = model.gamma();
    let mut reports = vec![check_tyz(u0, model)];
    if params.is_applicable() {
        let ok = |r: Result<CriterionReport, CriteriaError>| r.expect("params are applicable");
        reports.push(ok(check_local(u0, &params, gamma)));
        let line = line_tail(u0).is_some_and(|tail| (tail - params.c).abs() <= LINE_TOLERANCE);
        if line {
            reports.push(ok(check_sign_change(u0, &params)));
        } else {
            reports.push(CriterionReport::unsatisfied(
                CriterionKind::SignChange,
                "skipped: datum is not flat at c near both ends",
            ));
        }
        reports.push(ok(check_decay_monotonicity(u0, &params)));
    }

    let mut inconsistencies = Vec::new();
    let local = reports.iter().find(|r| r.kind == CriterionKind::LocalThm2);
    let tyz = reports.iter().find(|r| r.kind == CriterionKind::Tyz);
    if let (Some(l), Some(t)) = (local, tyz) {
        if let Some(w) = t.witness.filter(|_| t.satisfied) {
            if !l.satisfied {
                inconsistencies.push(format!(
                    "global criterion holds at x0 = {} but the local criterion finds no witness",
                    w.x0
                ));
            } else if !local::holds_at(u0, &params, w.x0) {
                inconsistencies.push(format!(
                    "global criterion holds at x0 = {} where the local condition fails",
                    w.x0
                ));
            }
        }
        for r in [l, t] {
            if let Some(b) = r.t_star_bound {
                if !(b > 0.0 && b.is_finite()) {
                    inconsistencies.push(format!("{} bound {b} is not a positive time", r.kind));
                }
            }
        }
    }

    reports.sort_by(|a, b| {
        let key = |r: &CriterionReport| (!r.satisfied, r.t_star_bound.is_none(), r.t_star_bound.unwrap_or(0.0));
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.cmp(&kb.1))
            .then(ka.2.total_cmp(&kb.2))
            .then(a.kind.cmp(&b.kind))
    });
    let best = reports
        .iter()
        .filter(|r| r.satisfied && r.t_star_bound.is_some())
        .min_by(|a, b| a.t_star_bound.unwrap().total_cmp(&b.t_star_bound.unwrap()));
    BlowupReport {
        best_bound: best.and_then(|r| r.t_star_bound),
        best_witness: best.and_then(|r| r.witness),
        params,
        gamma,
        reports,
        inconsistencies,
    }
}
