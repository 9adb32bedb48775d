use super::{line_tail, local::refine, noise_floor, CriterionKind, CriterionReport, Witness, LINE_TOLERANCE};
use crate::dynamics::energy;
use crate::kernel::{Field, Spectral};
use crate::model::ModelSpec;

/// Sampling density for the suprema over `|v| <= ||u0||_{H^1}`.
pub const TYZ_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TyzConstant {
    pub h1_norm: f64,
    pub sup_abs_g: f64,
    pub sup_f_second: f64,
    /// `2 sup|g| + r^2/2 sup f''` with `r` the H¹ norm.
    pub c0: f64,
    /// `-sqrt(2 C0 / gamma)`.
    pub threshold: f64,
}

pub fn tyz_constant(u0: &Field, model: &ModelSpec) -> TyzConstant {
    let r = energy(u0).sqrt();
    // polynomial extrema: sampled sign changes of the derivative plus bisection
    let ge = model.g_poly().extrema_on(-r, r, TYZ_SAMPLES);
    let fe = model.f_second_poly().extrema_on(-r, r, TYZ_SAMPLES);
    let sup_abs_g = ge.min.abs().max(ge.max.abs());
    let sup_f_second = fe.max;
    let c0 = 2.0 * sup_abs_g + 0.5 * r * r * sup_f_second;
    TyzConstant {
        h1_norm: r,
        sup_abs_g,
        sup_f_second,
        c0,
        threshold: -(2.0 * c0 / model.gamma()).sqrt(),
    }
}

/// `(1/sqrt(2 C0 gamma)) log((sqrt(gamma/2) s - sqrt C0)/(sqrt(gamma/2) s + sqrt C0))`.
fn tyz_bound(c0: f64, gamma: f64, slope: f64) -> f64 {
    let y = -(0.5 * gamma).sqrt() * slope;
    let s = c0.sqrt();
    if s == 0.0 {
        return 2.0 / (gamma * slope.abs());
    }
    // log((y + s)/(y - s)) = 2 atanh(s/y)
    2.0 * (s / y).atanh() / ((2.0 * gamma).sqrt() * s)
}

/// Global slope criterion built from the H¹ norm of `u0`.
pub fn check_tyz(u0: &Field, model: &ModelSpec) -> CriterionReport {
    let kind = CriterionKind::Tyz;
    let k = tyz_constant(u0, model);
    let constants = format!(
        "||u0||_H1 = {:.12}, sup|g| = {:.12}, sup f'' = {:.12}, C0 = {:.12}, threshold = {:.12}",
        k.h1_norm, k.sup_abs_g, k.sup_f_second, k.c0, k.threshold
    );
    if let Some(tail) = line_tail(u0).filter(|t| t.abs() > LINE_TOLERANCE) {
        return CriterionReport::unsatisfied(
            kind,
            format!("line criterion inapplicable: datum tends to {tail} at both ends, not to 0; {constants}"),
        );
    }
    let sp = Spectral::new(*u0.grid());
    let ux = sp.derivative(u0);
    let (j, slope) = ux.argmin();
    let eta = noise_floor(u0);
    if !(slope < k.threshold - eta) {
        return CriterionReport::unsatisfied(
            kind,
            format!("min u0' = {slope:.12} does not fall below the threshold; {constants}"),
        );
    }
    let gamma = model.gamma();
    let start = Witness {
        x0: u0.grid().x(j),
        u0: u0[j],
        slope,
    };
    let (w, _) = refine(u0, &sp.interpolant(u0), j, (start, slope), |_, s| s < k.threshold - eta, |_, s| s);
    CriterionReport {
        kind,
        satisfied: true,
        witness: Some(w),
        t_star_bound: Some(tyz_bound(k.c0, gamma, w.slope)),
        riccati_bound: None,
        detail: constants,
    }
}
