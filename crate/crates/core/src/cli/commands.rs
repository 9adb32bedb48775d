use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::mpsc;

use serde::Serialize;

use crate::criteria::{certify, BlowupReport, CertificateRecord, CriterionKind, Witness};
use crate::dynamics::{
    integrate, integrate_with, riccati_check, write_diagnostics_csv, write_traces_csv, BlowupObservation,
    RiccatiReport, Tracking,
};
use crate::kernel::io::{fmt_f64, write_snapshot};
use crate::model::{BlowupCase, CriterionParams, PresetTag};

use super::{CliError, ExperimentConfig};

/// Observed breakdown may exceed a certified bound by this factor before the
/// two are reported as inconsistent.
const BOUND_SLACK: f64 = 1.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimulationSummary {
    pub model: PresetTag,
    pub gamma: f64,
    #[serde(rename = "L")]
    pub length: f64,
    pub n: usize,
    pub steps: usize,
    pub snapshots: usize,
    pub observation: BlowupObservation,
    pub energy_initial: f64,
    /// Largest relative energy change up to 90% of the breakdown time
    /// (or of `t_end` without blowup).
    pub energy_drift_90: f64,
    pub energy_drift_max: f64,
    pub certified: bool,
    pub t_star_bound: Option<f64>,
    pub bound_kind: Option<CriterionKind>,
    /// `certified` implies blowup no later than 1.05 times the bound.
    pub consistent: bool,
    pub riccati: Vec<RiccatiReport>,
}

#[derive(Debug, Serialize)]
struct CertificateFile<'a> {
    model: PresetTag,
    gamma: f64,
    params: &'a CriterionParams,
    best_bound: Option<f64>,
    best_witness: Option<Witness>,
    inconsistencies: &'a [String],
    certificates: Vec<CertificateRecord>,
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path).map_err(|e| {
        CliError::Internal(format!("{}: {e}", path.display()))
    })?))
}

fn consistent(report: &BlowupReport, obs: &BlowupObservation) -> bool {
    match report.best_bound {
        None => true,
        Some(bound) => obs.blew_up && obs.t_est.is_some_and(|t| t <= BOUND_SLACK * bound),
    }
}

fn drift_until(trajectory: &[crate::dynamics::Diagnostics], t_cut: f64) -> f64 {
    let e0 = trajectory.first().map_or(0.0, |d| d.energy);
    let scale = if e0 > 0.0 { e0 } else { 1.0 };
    trajectory
        .iter()
        .filter(|d| d.t <= t_cut)
        .map(|d| ((d.energy - e0) / scale).abs())
        .fold(0.0, f64::max)
}

pub fn simulate(cfg: &ExperimentConfig, out: &Path) -> Result<SimulationSummary, CliError> {
    cfg.validate()?;
    let model = cfg.build_model()?;
    let solver = cfg.solver()?;
    let u0 = cfg.initial_datum()?;
    let report = certify(&u0, &model);
    let params = &report.params;

    let seeds = if cfg.seeds.is_empty() {
        report
            .get(CriterionKind::LocalThm2)
            .and_then(|r| r.witness)
            .or(report.best_witness)
            .map(|w| vec![w.x0])
            .unwrap_or_default()
    } else {
        cfg.seeds.clone()
    };
    let (beta, c) = if params.is_applicable() { (params.beta, params.c) } else { (0.0, 0.0) };
    let tracking = Tracking { seeds, beta, c };

    fs::create_dir_all(out)?;
    let snap_dir = out.join("snapshots");
    if cfg.snapshots {
        if snap_dir.exists() {
            fs::remove_dir_all(&snap_dir)?;
        }
        fs::create_dir_all(&snap_dir)?;
    }
    let mut written = 0usize;
    let mut io_error = None;
    let run = integrate_with(&u0, &model, &solver, Some(&tracking), |state| {
        if !cfg.snapshots || io_error.is_some() {
            return;
        }
        let path = snap_dir.join(format!("snap_{written:05}.bin"));
        let res = create(&path).and_then(|mut w| {
            write_snapshot(&state.u, state.t, &mut w)?;
            w.flush()?;
            Ok(())
        });
        match res {
            Ok(()) => written += 1,
            Err(e) => io_error = Some(e),
        }
    })
    .map_err(|e| CliError::Config(e.to_string()))?;
    if let Some(e) = io_error {
        return Err(e);
    }

    let mut w = create(&out.join("diagnostics.csv"))?;
    write_diagnostics_csv(&run.trajectory, &mut w)?;
    w.flush()?;
    let mut w = create(&out.join("traces.csv"))?;
    write_traces_csv(&run.traces, &mut w)?;
    w.flush()?;

    let obs = run.observation.clone();
    let t_obs = obs.t_est.filter(|_| obs.blew_up);
    let riccati = run
        .traces
        .iter()
        .map(|tr| riccati_check(tr, model.gamma(), t_obs))
        .collect();
    let horizon = if obs.blew_up { obs.t_est.unwrap_or(obs.t_last) } else { solver.t_end };
    let best_kind = report
        .reports
        .iter()
        .find(|r| r.satisfied && r.t_star_bound == report.best_bound && r.t_star_bound.is_some())
        .map(|r| r.kind);
    let summary = SimulationSummary {
        model: model.preset(),
        gamma: model.gamma(),
        length: cfg.length,
        n: cfg.n,
        steps: run.trajectory.len() - 1,
        snapshots: written,
        energy_initial: run.trajectory[0].energy,
        energy_drift_90: drift_until(&run.trajectory, 0.9 * horizon),
        energy_drift_max: drift_until(&run.trajectory, f64::INFINITY),
        certified: report.certified(),
        t_star_bound: report.best_bound,
        bound_kind: best_kind,
        consistent: consistent(&report, &obs),
        observation: obs,
        riccati,
    };
    write_json(&out.join("summary.json"), &summary)?;
    Ok(summary)
}

pub fn analyze(cfg: &ExperimentConfig, out: &Path) -> Result<BlowupReport, CliError> {
    cfg.validate()?;
    let model = cfg.build_model()?;
    let u0 = cfg.initial_datum()?;
    let report = certify(&u0, &model);
    fs::create_dir_all(out)?;
    let file = CertificateFile {
        model: model.preset(),
        gamma: model.gamma(),
        params: &report.params,
        best_bound: report.best_bound,
        best_witness: report.best_witness,
        inconsistencies: &report.inconsistencies,
        certificates: report.records(),
    };
    write_json(&out.join("certificates.json"), &file)?;
    Ok(report)
}

pub const SWEEP_COLUMNS: &[&str] = &[
    "gamma",
    "kappa",
    "amplitude",
    "case",
    "c",
    "K",
    "alpha",
    "beta",
    "local_satisfied",
    "local_bound",
    "riccati_bound",
    "tyz_satisfied",
    "tyz_bound",
    "sign_change",
    "decay_violation",
    "best_bound",
    "blew_up",
    "t_last",
    "T_est",
    "fit_quality",
    "consistent",
];

fn sweep_cells(cfg: &ExperimentConfig) -> Result<Vec<ExperimentConfig>, CliError> {
    let axis = |name: &str, values: &Option<Vec<f64>>| -> Result<Vec<Option<f64>>, CliError> {
        match values {
            None => Ok(vec![None]),
            Some(v) if v.is_empty() => Err(CliError::Config(format!("{name}: empty range"))),
            Some(v) => match v.iter().find(|x| !x.is_finite()) {
                Some(x) => Err(CliError::Config(format!("{name}: non-finite value {x}"))),
                None => Ok(v.iter().map(|&x| Some(x)).collect()),
            },
        }
    };
    if cfg.sweep_gamma.is_none() && cfg.sweep_kappa.is_none() && cfg.sweep_amplitude.is_none() {
        return Err(CliError::Config(
            "sweep: set at least one of sweep_gamma, sweep_kappa, sweep_amplitude".into(),
        ));
    }
    if cfg.sweep_gamma.is_some() && !matches!(cfg.model.as_str(), "rod" | "custom") {
        return Err(CliError::Config("sweep_gamma: requires model = \"rod\" or \"custom\"".into()));
    }
    if cfg.sweep_kappa.is_some() && !matches!(cfg.model.as_str(), "camassa_holm" | "power") {
        return Err(CliError::Config("sweep_kappa: requires model = \"camassa_holm\" or \"power\"".into()));
    }
    if cfg.sweep_amplitude.is_some() && cfg.profile == "constant" {
        return Err(CliError::Config("sweep_amplitude: the constant profile has no amplitude".into()));
    }
    let mut cells = Vec::new();
    for g in axis("sweep_gamma", &cfg.sweep_gamma)? {
        for k in axis("sweep_kappa", &cfg.sweep_kappa)? {
            for a in axis("sweep_amplitude", &cfg.sweep_amplitude)? {
                let mut cell = cfg.clone();
                if g.is_some() {
                    cell.gamma = g;
                }
                if let Some(k) = k {
                    cell.kappa = k;
                }
                if let Some(a) = a {
                    cell.amplitude = a;
                }
                cell.validate()?;
                cells.push(cell);
            }
        }
    }
    Ok(cells)
}

fn opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn sweep_row(cell: &ExperimentConfig) -> Result<String, CliError> {
    let model = cell.build_model()?;
    let u0 = cell.initial_datum()?;
    let report = certify(&u0, &model);
    let p = &report.params;
    let applicable = p.is_applicable();
    let local = report.get(CriterionKind::LocalThm2);
    let tyz = report.get(CriterionKind::Tyz);
    let flag = |k: CriterionKind| report.get(k).map(|r| r.satisfied.to_string()).unwrap_or_default();
    let obs = if cell.sweep_simulate {
        let mut solver = cell.solver()?;
        solver.record_every = solver.t_end;
        Some(integrate(&u0, &model, &solver).map_err(|e| CliError::Config(e.to_string()))?.observation)
    } else {
        None
    };
    let kappa = matches!(model.preset(), PresetTag::CamassaHolm { .. } | PresetTag::Power { .. }).then_some(cell.kappa);
    let amplitude = (cell.profile != "constant").then_some(cell.amplitude);
    let case = match p.case {
        BlowupCase::C1 => "c1",
        BlowupCase::C2 => "c2",
        BlowupCase::None => "none",
    };
    let fields = [
        fmt_f64(model.gamma()),
        opt(kappa),
        opt(amplitude),
        case.to_string(),
        opt(applicable.then_some(p.c)),
        opt(applicable.then_some(p.k)),
        opt(applicable.then_some(p.alpha)),
        opt(applicable.then_some(p.beta)),
        local.map(|r| r.satisfied.to_string()).unwrap_or_default(),
        opt(local.and_then(|r| r.t_star_bound)),
        opt(local.and_then(|r| r.riccati_bound)),
        tyz.map(|r| r.satisfied.to_string()).unwrap_or_default(),
        opt(tyz.and_then(|r| r.t_star_bound)),
        flag(CriterionKind::SignChange),
        flag(CriterionKind::DecayMonotonicity),
        opt(report.best_bound),
        obs.as_ref().map(|o| o.blew_up.to_string()).unwrap_or_default(),
        opt(obs.as_ref().map(|o| o.t_last)),
        opt(obs.as_ref().and_then(|o| o.t_est)),
        opt(obs.as_ref().and_then(|o| o.fit_quality)),
        obs.as_ref().map(|o| consistent(&report, o).to_string()).unwrap_or_default(),
    ];
    Ok(fields.join(","))
}

/// Runs every cell of the sweep on `jobs` threads; rows are written in
/// parameter order as soon as all earlier rows are done.
pub fn sweep(cfg: &ExperimentConfig, out: &Path, jobs: usize) -> Result<(), CliError> {
    cfg.validate()?;
    let cells = sweep_cells(cfg)?;
    fs::create_dir_all(out)?;
    let mut w = create(&out.join("sweep.csv"))?;
    writeln!(w, "{}", SWEEP_COLUMNS.join(","))?;
    w.flush()?;

    let next = AtomicUsize::new(0);
    let (tx, rx) = mpsc::channel::<(usize, Result<String, CliError>)>();
    let mut failure = None;
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1).min(cells.len()) {
            let tx = tx.clone();
            let (next, cells) = (&next, &cells);
            s.spawn(move || loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= cells.len() || tx.send((i, sweep_row(&cells[i]))).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        let mut pending = BTreeMap::new();
        let mut expected = 0;
        for (i, row) in rx {
            pending.insert(i, row);
            while let Some(row) = pending.remove(&expected) {
                let res = row.and_then(|r| {
                    writeln!(w, "{r}")?;
                    w.flush()?;
                    Ok(())
                });
                if let Err(e) = res {
                    failure = Some(e);
                    // stop handing out work
                    next.store(cells.len(), Ordering::Relaxed);
                    return;
                }
                expected += 1;
            }
        }
    });
    match failure {
        Some(e) => Err(e),
        None => Ok(()),
    }
}
