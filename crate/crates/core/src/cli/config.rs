//! Flat experiment configuration.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dynamics::{SolverConfig, DEFAULT_CFL, DEFAULT_DT_MIN, DEFAULT_SLOPE_FLOOR, DEFAULT_TAIL_LIMIT};
use crate::kernel::io::read_csv;
use crate::kernel::{Field, Grid};
use crate::model::{ModelSpec, ValueRange, DEFAULT_RANGE};
use crate::profiles::Profile;

use super::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    pub model: String,
    pub kappa: f64,
    pub gamma: Option<f64>,
    #[serde(rename = "Q")]
    pub q: u32,
    pub f_coeffs: Vec<f64>,
    pub g_coeffs: Vec<f64>,
    pub range: Option<[f64; 2]>,

    #[serde(rename = "L")]
    pub length: f64,
    pub n: usize,

    pub cfl: f64,
    pub dt_min: f64,
    pub slope_floor: f64,
    pub t_end: f64,
    pub record_every: f64,
    pub dealias: bool,
    pub trig_interpolation: bool,
    pub tail_limit: f64,

    pub profile: String,
    pub amplitude: f64,
    pub phase: f64,
    pub wavenumber: u32,
    pub offset_c: f64,
    pub width: f64,
    pub center: Option<f64>,
    pub mollification: f64,
    pub value: f64,
    pub modes: u32,
    pub seed: u64,
    pub samples_path: Option<PathBuf>,

    pub seeds: Vec<f64>,
    pub snapshots: bool,

    pub sweep_gamma: Option<Vec<f64>>,
    pub sweep_kappa: Option<Vec<f64>>,
    pub sweep_amplitude: Option<Vec<f64>>,
    pub sweep_simulate: bool,

    /// Directory that relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            model: "camassa_holm".into(),
            kappa: 0.0,
            gamma: None,
            q: 1,
            f_coeffs: Vec::new(),
            g_coeffs: Vec::new(),
            range: None,
            length: 40.0,
            n: 1024,
            cfl: DEFAULT_CFL,
            dt_min: DEFAULT_DT_MIN,
            slope_floor: DEFAULT_SLOPE_FLOOR,
            t_end: 10.0,
            record_every: 0.1,
            dealias: false,
            trig_interpolation: false,
            tail_limit: DEFAULT_TAIL_LIMIT,
            profile: "sine".into(),
            amplitude: 1.0,
            phase: 0.0,
            wavenumber: 1,
            offset_c: 0.0,
            width: 1.0,
            center: None,
            mollification: 0.05,
            value: 0.0,
            modes: 4,
            seed: 0,
            samples_path: None,
            seeds: Vec::new(),
            snapshots: true,
            sweep_gamma: None,
            sweep_kappa: None,
            sweep_amplitude: None,
            sweep_simulate: true,
            base_dir: PathBuf::new(),
        }
    }
}

fn invalid(field: &str, msg: impl std::fmt::Display) -> CliError {
    CliError::Config(format!("{field}: {msg}"))
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string().trim_end().to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        let mut cfg = Self::from_toml(&text)?;
        cfg.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(cfg)
    }

    pub fn value_range(&self) -> Result<ValueRange, CliError> {
        match self.range {
            None => Ok(DEFAULT_RANGE),
            Some([lo, hi]) => ValueRange::new(lo, hi).map_err(|e| invalid("range", e)),
        }
    }

    pub fn build_model(&self) -> Result<ModelSpec, CliError> {
        let range = self.value_range()?;
        let finite = |name: &str, v: f64| {
            if v.is_finite() {
                Ok(v)
            } else {
                Err(invalid(name, "must be finite"))
            }
        };
        let model = match self.model.as_str() {
            "camassa_holm" => ModelSpec::camassa_holm(finite("kappa", self.kappa)?)
                .and_then(|m| if self.range.is_some() { m.with_range(range) } else { Ok(m) })
                .map_err(|e| invalid("kappa", e))?,
            "rod" => {
                let gamma = self.gamma.ok_or_else(|| invalid("gamma", "required for model = \"rod\""))?;
                ModelSpec::rod(gamma)
                    .and_then(|m| if self.range.is_some() { m.with_range(range) } else { Ok(m) })
                    .map_err(|e| invalid("gamma", e))?
            }
            "power" => ModelSpec::power(self.q, finite("kappa", self.kappa)?, range).map_err(|e| invalid("Q", e))?,
            "custom" => {
                if self.f_coeffs.is_empty() {
                    return Err(invalid("f_coeffs", "required for model = \"custom\""));
                }
                ModelSpec::custom(self.f_coeffs.clone(), self.g_coeffs.clone(), range, self.gamma)
                    .map_err(|e| invalid("f_coeffs", e))?
            }
            other => {
                return Err(invalid(
                    "model",
                    format!("unknown model {other:?}; expected camassa_holm, rod, power or custom"),
                ))
            }
        };
        Ok(model)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        // grid errors already lead with the field name
        Grid::new(self.length, self.n).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn solver(&self) -> Result<SolverConfig, CliError> {
        let cfg = SolverConfig {
            cfl: self.cfl,
            dt_min: self.dt_min,
            slope_floor: self.slope_floor,
            t_end: self.t_end,
            record_every: self.record_every,
            dealias: self.dealias,
            trig_interpolation: self.trig_interpolation,
            tail_limit: self.tail_limit,
        };
        cfg.validate().map_err(|e| CliError::Config(e.to_string()))?;
        Ok(cfg)
    }

    pub fn build_profile(&self) -> Result<Profile, CliError> {
        let center = self.center.unwrap_or(0.5 * self.length);
        for (name, v) in [
            ("amplitude", self.amplitude),
            ("phase", self.phase),
            ("offset_c", self.offset_c),
            ("width", self.width),
            ("center", center),
            ("mollification", self.mollification),
            ("value", self.value),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        let needs_width = matches!(self.profile.as_str(), "gaussian_bump" | "derivative_bump");
        if needs_width && !(self.width > 0.0) {
            return Err(invalid("width", "must be positive"));
        }
        if self.profile == "smoothed_peakon" && self.mollification < 0.0 {
            return Err(invalid("mollification", "must be nonnegative"));
        }
        let profile = match self.profile.as_str() {
            "constant" => Profile::Constant { value: self.value },
            "sine" => Profile::Sine {
                amplitude: self.amplitude,
                phase: self.phase,
                wavenumber: self.wavenumber,
                offset: self.offset_c,
            },
            "gaussian_bump" => Profile::GaussianBump {
                amplitude: self.amplitude,
                width: self.width,
                center,
                offset_c: self.offset_c,
            },
            "derivative_bump" => Profile::DerivativeBump {
                amplitude: self.amplitude,
                width: self.width,
                center,
                offset_c: self.offset_c,
            },
            "smoothed_peakon" => Profile::SmoothedPeakon {
                amplitude: self.amplitude,
                center,
                mollification: self.mollification,
                offset_c: self.offset_c,
            },
            "random_modes" => Profile::RandomModes {
                seed: self.seed,
                modes: self.modes,
                amplitude: self.amplitude,
                offset: self.offset_c,
            },
            "samples" => {
                let path = self
                    .samples_path
                    .as_ref()
                    .ok_or_else(|| invalid("samples_path", "required for profile = \"samples\""))?;
                let path = self.base_dir.join(path);
                let file = std::fs::File::open(&path)
                    .map_err(|e| invalid("samples_path", format!("{}: {e}", path.display())))?;
                let field = read_csv(std::io::BufReader::new(file), self.length)
                    .map_err(|e| invalid("samples_path", e))?;
                if field.len() != self.n {
                    return Err(invalid("samples_path", format!("{} samples but n = {}", field.len(), self.n)));
                }
                let a = self.amplitude;
                Profile::Samples {
                    values: field.values().iter().map(|v| a * v).collect(),
                }
            }
            other => return Err(invalid("profile", format!("unknown profile {other:?}"))),
        };
        Ok(profile)
    }

    pub fn initial_datum(&self) -> Result<Field, CliError> {
        let grid = self.grid()?;
        self.build_profile()?.sample(grid).map_err(|e| invalid("profile", e))
    }

    /// Checks everything a command needs before any work starts.
    pub fn validate(&self) -> Result<(), CliError> {
        self.build_model()?;
        self.grid()?;
        self.solver()?;
        self.initial_datum()?;
        if let Some(x) = self.seeds.iter().find(|x| !x.is_finite()) {
            return Err(invalid("seeds", format!("non-finite seed {x}")));
        }
        Ok(())
    }
}

/// `key = default  # meaning` lines for `--help`.
pub fn reference() -> String {
    let d = ExperimentConfig::default();
    let r = DEFAULT_RANGE;
    let rows: Vec<(String, &str)> = vec![
        (format!("model = {:?}", d.model), "camassa_holm | rod | power | custom"),
        (format!("kappa = {:?}", d.kappa), "camassa_holm and power"),
        ("gamma = (none)".into(), "required for rod; optional convexity floor for custom"),
        (format!("Q = {}", d.q), "power exponent"),
        ("f_coeffs = []".into(), "custom f, ascending coefficients"),
        ("g_coeffs = []".into(), "custom g, ascending coefficients"),
        (format!("range = [{:?}, {:?}]", r.lo, r.hi), "value range where hypotheses are certified"),
        (format!("L = {:?}", d.length), "domain length"),
        (format!("n = {}", d.n), "grid points, power of two >= 16"),
        (format!("cfl = {:?}", d.cfl), "Courant number in (0, 1]"),
        (format!("dt_min = {:?}", d.dt_min), "smallest time step before declaring blowup"),
        (format!("slope_floor = {:?}", d.slope_floor), "min u_x that declares blowup"),
        (format!("t_end = {:?}", d.t_end), "final time"),
        (format!("record_every = {:?}", d.record_every), "snapshot interval"),
        (format!("dealias = {}", d.dealias), "2/3-rule filter on the right-hand side"),
        (format!("trig_interpolation = {}", d.trig_interpolation), "exact interpolation along characteristics"),
        (format!("tail_limit = {:?}", d.tail_limit), "spectral power above n/4 that stops a run"),
        (format!("profile = {:?}", d.profile), "constant | sine | gaussian_bump | derivative_bump | smoothed_peakon | random_modes | samples"),
        (format!("amplitude = {:?}", d.amplitude), "profile amplitude"),
        (format!("phase = {:?}", d.phase), "sine phase"),
        (format!("wavenumber = {}", d.wavenumber), "sine periods per domain"),
        (format!("offset_c = {:?}", d.offset_c), "constant added to the profile"),
        (format!("width = {:?}", d.width), "bump width"),
        ("center = L/2".into(), "bump and peakon center"),
        (format!("mollification = {:?}", d.mollification), "peakon crest smoothing"),
        (format!("value = {:?}", d.value), "constant profile value"),
        (format!("modes = {}", d.modes), "random_modes mode count"),
        (format!("seed = {}", d.seed), "random_modes seed (overridden by --seed)"),
        ("samples_path = (none)".into(), "x,value CSV for profile = \"samples\""),
        ("seeds = []".into(), "characteristic seeds; empty tracks the best local witness"),
        (format!("snapshots = {}", d.snapshots), "write snapshots/*.bin"),
        ("sweep_gamma = (none)".into(), "gamma values (rod, custom)"),
        ("sweep_kappa = (none)".into(), "kappa values (camassa_holm, power)"),
        ("sweep_amplitude = (none)".into(), "amplitude values"),
        (format!("sweep_simulate = {}", d.sweep_simulate), "integrate every sweep cell"),
    ];
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::from("Config keys (TOML, flat) and defaults:\n");
    for (k, v) in rows {
        out.push_str(&format!("  {k:width$}  # {v}\n"));
    }
    out
}
