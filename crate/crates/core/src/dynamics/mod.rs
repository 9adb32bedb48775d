//! Method-of-lines integration of the nonlocal equation, with blowup detection,
//! rate-law extrapolation of the breakdown time and characteristic tracking.

mod output;
mod riccati;

pub use output::{write_diagnostics_csv, write_traces_csv};
pub use riccati::{riccati_check, RiccatiReport};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::kernel::{cubic_at, Field, Spectral};
use crate::model::ModelSpec;

#[derive(Debug, Error, PartialEq)]
pub enum SolverConfigError {
    #[error("{field} must be {requirement}, got {value}")]
    Invalid {
        field: &'static str,
        requirement: &'static str,
        value: f64,
    },
    #[error("initial datum contains non-finite values")]
    NonFiniteDatum,
}

/// Time-stepping settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub cfl: f64,
    pub dt_min: f64,
    pub slope_floor: f64,
    pub t_end: f64,
    pub record_every: f64,
    /// 2/3-rule filtering of the right-hand side.
    pub dealias: bool,
    /// Evaluate `u` at characteristic positions with the trigonometric
    /// interpolant instead of cubic interpolation.
    pub trig_interpolation: bool,
    /// Declare breakdown once the fraction of spectral power in modes
    /// `|m| > n/4` exceeds this: the grid no longer resolves the front.
    pub tail_limit: f64,
}

pub const DEFAULT_CFL: f64 = 0.3;
pub const DEFAULT_DT_MIN: f64 = 1e-9;
pub const DEFAULT_SLOPE_FLOOR: f64 = -1e4;
pub const DEFAULT_TAIL_LIMIT: f64 = 1e-9;

impl SolverConfig {
    pub fn new(t_end: f64) -> Self {
        Self {
            cfl: DEFAULT_CFL,
            dt_min: DEFAULT_DT_MIN,
            slope_floor: DEFAULT_SLOPE_FLOOR,
            t_end,
            record_every: t_end,
            dealias: false,
            trig_interpolation: false,
            tail_limit: DEFAULT_TAIL_LIMIT,
        }
    }

    pub fn validate(&self) -> Result<(), SolverConfigError> {
        let bad = |field, requirement, value| {
            Err(SolverConfigError::Invalid {
                field,
                requirement,
                value,
            })
        };
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return bad("cfl", "in (0, 1]", self.cfl);
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return bad("t_end", "positive and finite", self.t_end);
        }
        if !(self.dt_min > 0.0 && self.dt_min < self.t_end) {
            return bad("dt_min", "positive and below t_end", self.dt_min);
        }
        if !(self.slope_floor < 0.0) {
            return bad("slope_floor", "negative", self.slope_floor);
        }
        if !(self.record_every > 0.0 && self.record_every.is_finite()) {
            return bad("record_every", "positive and finite", self.record_every);
        }
        if !(self.tail_limit > 0.0) {
            return bad("tail_limit", "positive", self.tail_limit);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct State {
    pub t: f64,
    pub u: Field,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub t: f64,
    pub energy: f64,
    pub min_ux: f64,
    pub argmin_x: f64,
    pub max_abs_u: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CharSample {
    pub t: f64,
    pub q: f64,
    pub a: f64,
    pub b: f64,
    /// `sqrt(-A B)` when `A B < 0`, else 0.
    pub h: f64,
}

impl CharSample {
    fn new(t: f64, q: f64, u: f64, ux: f64, beta: f64, c: f64) -> Self {
        let a = beta * (u - c) - ux;
        let b = beta * (u - c) + ux;
        let ab = a * b;
        let h = if ab < 0.0 { (-ab).sqrt() } else { 0.0 };
        Self { t, q, a, b, h }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharTrace {
    pub x0: f64,
    pub samples: Vec<CharSample>,
}

/// Characteristic seeds and the constants defining `A` and `B`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tracking {
    pub seeds: Vec<f64>,
    pub beta: f64,
    pub c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    EndTime,
    SlopeFloor,
    StepTooSmall,
    NonFinite,
    Unresolved,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowupObservation {
    pub blew_up: bool,
    pub reason: StopReason,
    pub t_last: f64,
    #[serde(rename = "T_est")]
    pub t_est: Option<f64>,
    /// R² of the linear fit of `-1/min_ux` against `t`.
    pub fit_quality: Option<f64>,
    /// Fitted `d(-1/min_ux)/dt`, so that `min_ux ~ -1/(rate (T - t))`.
    pub rate: Option<f64>,
    pub fit_points: usize,
    /// R² of the same fit over the final decade of `min_ux`.
    pub decade_r2: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Run {
    pub trajectory: Vec<Diagnostics>,
    pub final_state: State,
    pub observation: BlowupObservation,
    pub traces: Vec<CharTrace>,
}

/// Right-hand side evaluator bound to one grid and model.
#[derive(Debug, Clone)]
pub struct Rhs<'a> {
    spectral: Spectral,
    model: &'a ModelSpec,
    dealias: bool,
}

impl<'a> Rhs<'a> {
    pub fn new(spectral: Spectral, model: &'a ModelSpec) -> Self {
        Self {
            spectral,
            model,
            dealias: false,
        }
    }

    pub fn dealiased(mut self, on: bool) -> Self {
        self.dealias = on;
        self
    }

    pub fn spectral(&self) -> &Spectral {
        &self.spectral
    }

    /// Returns `(u_t, u_x)`.
    pub fn eval(&self, u: &Field) -> (Field, Field) {
        let ux = self.spectral.derivative(u);
        let m = self.model;
        let source = u.zip_map(&ux, |v, d| m.g(v) + 0.5 * m.f_second(v) * d * d);
        let nonlocal = self.spectral.convolve_dp(&source);
        let mut out = u.clone();
        for j in 0..u.len() {
            out[j] = -m.f_prime(u[j]) * ux[j] - nonlocal[j];
        }
        if self.dealias {
            out = self.spectral.dealias(&out);
        }
        (out, ux)
    }
}

/// `-f'(u) u_x - ∂_x p * (g(u) + f''(u)/2 u_x^2)`.
pub fn rhs(u: &Field, model: &ModelSpec) -> Field {
    Rhs::new(Spectral::new(*u.grid()), model).eval(u).0
}

/// Rectangle-rule `∫ (u^2 + u_x^2)` with the spectral derivative.
pub fn energy(u: &Field) -> f64 {
    energy_with(u, &Spectral::new(*u.grid()).derivative(u))
}

fn energy_with(u: &Field, ux: &Field) -> f64 {
    let s: f64 = u.values().iter().zip(ux.values()).map(|(a, b)| a * a + b * b).sum();
    s * u.grid().dx()
}

fn diagnostics(t: f64, u: &Field, ux: &Field) -> Diagnostics {
    let (j, min_ux) = ux.argmin();
    Diagnostics {
        t,
        energy: energy_with(u, ux),
        min_ux,
        argmin_x: u.grid().x(j),
        max_abs_u: u.max_abs(),
    }
}

pub fn integrate(u0: &Field, model: &ModelSpec, config: &SolverConfig) -> Result<Run, SolverConfigError> {
    integrate_with(u0, model, config, None, |_| {})
}

/// RK4 with `dt = min(cfl dx / max|f'(u)|, cfl / |min u_x|, time to next record)`.
///
/// `on_record` sees the state at `t = 0`, every multiple of `record_every` and
/// the final time. Characteristics `dq/dt = f'(u(t, q))` are advanced with the
/// same stages as the field.
pub fn integrate_with(
    u0: &Field,
    model: &ModelSpec,
    config: &SolverConfig,
    tracking: Option<&Tracking>,
    mut on_record: impl FnMut(&State),
) -> Result<Run, SolverConfigError> {
    config.validate()?;
    if !u0.is_finite() {
        return Err(SolverConfigError::NonFiniteDatum);
    }
    let grid = *u0.grid();
    let rhs = Rhs::new(Spectral::new(grid), model).dealiased(config.dealias);
    let dx = grid.dx();
    let sample_at = |u: &Field, ux: &Field, q: f64| -> (f64, f64) {
        if config.trig_interpolation {
            let it = rhs.spectral().interpolant(u);
            (it.value(q), it.derivative(q))
        } else {
            (cubic_at(u, q), cubic_at(ux, q))
        }
    };

    let mut u = u0.clone();
    let mut t = 0.0;
    let (mut k1, mut ux) = rhs.eval(&u);
    let mut trajectory = vec![diagnostics(t, &u, &ux)];
    let seeds: &[f64] = tracking.map_or(&[], |tr| &tr.seeds);
    let (beta, c) = tracking.map_or((0.0, 0.0), |tr| (tr.beta, tr.c));
    let mut qs: Vec<f64> = seeds.iter().map(|&x| grid.wrap(x)).collect();
    let mut traces: Vec<CharTrace> = seeds
        .iter()
        .zip(&qs)
        .map(|(&x0, &q)| {
            let (uq, uxq) = sample_at(&u, &ux, q);
            CharTrace {
                x0,
                samples: vec![CharSample::new(t, q, uq, uxq, beta, c)],
            }
        })
        .collect();
    on_record(&State { t, u: u.clone() });
    let mut recorded_at = t;
    let mut next_record = config.record_every;

    let reason = loop {
        let d = *trajectory.last().expect("nonempty");
        if d.min_ux <= config.slope_floor {
            break StopReason::SlopeFloor;
        }
        if rhs.spectral().tail_fraction(&u, 0.25) > config.tail_limit {
            break StopReason::Unresolved;
        }
        let remaining = config.t_end - t;
        if remaining <= 1e-14 * config.t_end {
            break StopReason::EndTime;
        }
        let speed = u.values().iter().map(|&v| model.f_prime(v).abs()).fold(0.0, f64::max);
        let mut dt = remaining.min(next_record - t);
        if speed > 0.0 {
            dt = dt.min(config.cfl * dx / speed);
        }
        if d.min_ux < 0.0 {
            dt = dt.min(config.cfl / -d.min_ux);
        }
        if dt < config.dt_min && dt < remaining && dt < next_record - t {
            break StopReason::StepTooSmall;
        }

        let fq = |u: &Field, ux: &Field, q: f64| model.f_prime(sample_at(u, ux, q).0);
        let q1: Vec<f64> = qs.iter().map(|&q| fq(&u, &ux, q)).collect();
        let u2 = u.zip_map(&k1, |a, b| a + 0.5 * dt * b);
        let (k2, ux2) = rhs.eval(&u2);
        let q2: Vec<f64> = qs.iter().zip(&q1).map(|(&q, &s)| fq(&u2, &ux2, q + 0.5 * dt * s)).collect();
        let u3 = u.zip_map(&k2, |a, b| a + 0.5 * dt * b);
        let (k3, ux3) = rhs.eval(&u3);
        let q3: Vec<f64> = qs.iter().zip(&q2).map(|(&q, &s)| fq(&u3, &ux3, q + 0.5 * dt * s)).collect();
        let u4 = u.zip_map(&k3, |a, b| a + dt * b);
        let (k4, ux4) = rhs.eval(&u4);
        let q4: Vec<f64> = qs.iter().zip(&q3).map(|(&q, &s)| fq(&u4, &ux4, q + dt * s)).collect();

        let mut next = u.clone();
        for j in 0..next.len() {
            next[j] += dt / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if !next.is_finite() {
            break StopReason::NonFinite;
        }
        for (i, q) in qs.iter_mut().enumerate() {
            *q = grid.wrap(*q + dt / 6.0 * (q1[i] + 2.0 * q2[i] + 2.0 * q3[i] + q4[i]));
        }
        t = if (next_record - (t + dt)).abs() <= 1e-12 * next_record.max(1.0) {
            next_record
        } else {
            t + dt
        };
        u = next;
        let (k, d) = rhs.eval(&u);
        k1 = k;
        ux = d;
        trajectory.push(diagnostics(t, &u, &ux));
        for (trace, &q) in traces.iter_mut().zip(&qs) {
            let (uq, uxq) = sample_at(&u, &ux, q);
            trace.samples.push(CharSample::new(t, q, uq, uxq, beta, c));
        }
        if t >= next_record {
            on_record(&State { t, u: u.clone() });
            recorded_at = t;
            next_record += config.record_every;
        }
    };

    let final_state = State { t, u };
    if final_state.t > recorded_at {
        on_record(&final_state);
    }
    let observation = observe(&trajectory, reason);
    Ok(Run {
        trajectory,
        final_state,
        observation,
        traces,
    })
}

fn observe(trajectory: &[Diagnostics], reason: StopReason) -> BlowupObservation {
    let t_last = trajectory.last().map_or(0.0, |d| d.t);
    let mut obs = BlowupObservation {
        blew_up: reason != StopReason::EndTime,
        reason,
        t_last,
        t_est: None,
        fit_quality: None,
        rate: None,
        fit_points: 0,
        decade_r2: None,
    };
    if !obs.blew_up {
        return obs;
    }
    if let Some(fit) = rate_fit(trajectory, ESTIMATE_WINDOW) {
        obs.t_est = Some(fit.root.max(t_last));
        obs.fit_quality = Some(fit.r2);
        obs.rate = Some(fit.rate);
        obs.fit_points = fit.points;
    }
    obs.decade_r2 = rate_fit(trajectory, 10.0).map(|f| f.r2);
    obs
}

/// Least-squares line through `(t, -1/min_ux)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateFit {
    pub root: f64,
    pub rate: f64,
    pub r2: f64,
    pub points: usize,
}

/// Width of the breakdown-time fit window, as a ratio of `min_ux` values.
pub const ESTIMATE_WINDOW: f64 = 2.0;

/// Fits `-1/min_ux` against `t` over the trailing samples with
/// `min_ux <= min_ux_last / ratio`.
pub fn rate_fit(trajectory: &[Diagnostics], ratio: f64) -> Option<RateFit> {
    let last = trajectory.last()?.min_ux;
    if !(last < 0.0) {
        return None;
    }
    let start = trajectory
        .iter()
        .rposition(|d| !(d.min_ux <= last / ratio))
        .map_or(0, |i| i + 1);
    let window = &trajectory[start..];
    if window.len() < 3 {
        return None;
    }
    let pts: Vec<(f64, f64)> = window.iter().map(|d| (d.t, -1.0 / d.min_ux)).collect();
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let stt: f64 = pts.iter().map(|p| (p.0 - mt).powi(2)).sum();
    let sty: f64 = pts.iter().map(|p| (p.0 - mt) * (p.1 - my)).sum();
    let syy: f64 = pts.iter().map(|p| (p.1 - my).powi(2)).sum();
    if stt == 0.0 || syy == 0.0 {
        return None;
    }
    let slope = sty / stt;
    if !(slope < 0.0) {
        return None;
    }
    let intercept = my - slope * mt;
    Some(RateFit {
        root: -intercept / slope,
        rate: -slope,
        r2: sty * sty / (stt * syy),
        points: pts.len(),
    })
}
