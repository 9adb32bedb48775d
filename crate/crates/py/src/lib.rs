//! Python module `rodwave`. Fields are passed as lists of samples on `[0, L)`;
//! structured results come back as plain dicts.

use rw::criteria;
use rw::dynamics::{self, SolverConfig, Tracking};
use rw::kernel::{self, Field, Grid};
use rw::model::{derive_criterion_params, ModelSpec, ValueRange, DEFAULT_RANGE};
use rw::profiles::Profile;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(values: Vec<f64>, length: f64) -> PyResult<Field> {
    let grid = Grid::new(length, values.len()).map_err(value_error)?;
    Field::new_finite(grid, values).map_err(value_error)
}

fn to_py<'py, T: Serialize>(py: Python<'py>, value: &T) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(value_error)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn range(lo: Option<f64>, hi: Option<f64>) -> PyResult<ValueRange> {
    ValueRange::new(lo.unwrap_or(DEFAULT_RANGE.lo), hi.unwrap_or(DEFAULT_RANGE.hi)).map_err(value_error)
}

/// An equation instance `(f, g, gamma)`.
#[pyclass(frozen, skip_from_py_object, module = "rodwave")]
struct Model {
    inner: ModelSpec,
}

#[pymethods]
impl Model {
    #[staticmethod]
    #[pyo3(signature = (kappa=0.0))]
    fn camassa_holm(kappa: f64) -> PyResult<Self> {
        ModelSpec::camassa_holm(kappa).map(|inner| Self { inner }).map_err(value_error)
    }

    #[staticmethod]
    fn rod(gamma: f64) -> PyResult<Self> {
        ModelSpec::rod(gamma).map(|inner| Self { inner }).map_err(value_error)
    }

    #[staticmethod]
    #[pyo3(signature = (q, kappa=0.0, lo=None, hi=None))]
    fn power(q: u32, kappa: f64, lo: Option<f64>, hi: Option<f64>) -> PyResult<Self> {
        ModelSpec::power(q, kappa, range(lo, hi)?)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    /// Polynomial model from ascending coefficients of `f` and `g`.
    #[staticmethod]
    #[pyo3(signature = (f, g, lo=None, hi=None, gamma=None))]
    fn custom(f: Vec<f64>, g: Vec<f64>, lo: Option<f64>, hi: Option<f64>, gamma: Option<f64>) -> PyResult<Self> {
        ModelSpec::custom(f, g, range(lo, hi)?, gamma)
            .map(|inner| Self { inner })
            .map_err(value_error)
    }

    #[getter]
    fn gamma(&self) -> f64 {
        self.inner.gamma()
    }

    fn f(&self, v: f64) -> f64 {
        self.inner.f(v)
    }

    fn f_prime(&self, v: f64) -> f64 {
        self.inner.f_prime(v)
    }

    fn f_second(&self, v: f64) -> f64 {
        self.inner.f_second(v)
    }

    fn g(&self, v: f64) -> f64 {
        self.inner.g(v)
    }

    /// Constants of the local criterion: case, c, extremum, K, alpha, beta.
    fn criterion_params<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &derive_criterion_params(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, gamma={})", self.inner.preset(), self.inner.gamma())
    }
}

#[pyfunction]
fn grid_points(length: f64, n: usize) -> PyResult<Vec<f64>> {
    let g = Grid::new(length, n).map_err(value_error)?;
    Ok(g.points().collect())
}

/// Samples a profile given as a dict with key `profile`, e.g.
/// `{"profile": "gaussian_bump", "amplitude": 1, "width": 2, "center": 20, "offset_c": 0}`.
#[pyfunction]
fn sample_profile(py: Python<'_>, spec: Bound<'_, PyAny>, length: f64, n: usize) -> PyResult<Vec<f64>> {
    let text: String = py.import("json")?.call_method1("dumps", (spec,))?.extract()?;
    let profile: Profile = serde_json::from_str(&text).map_err(value_error)?;
    let grid = Grid::new(length, n).map_err(value_error)?;
    Ok(profile.sample(grid).map_err(value_error)?.into_values())
}

macro_rules! operator {
    ($name:ident, $op:path) => {
        #[pyfunction]
        fn $name(values: Vec<f64>, length: f64) -> PyResult<Vec<f64>> {
            Ok($op(&field(values, length)?).into_values())
        }
    };
}

operator!(convolve_p, kernel::convolve_p);
operator!(convolve_dp, kernel::convolve_dp);
operator!(convolve_half_plus, kernel::convolve_half_plus);
operator!(convolve_half_minus, kernel::convolve_half_minus);
operator!(spectral_derivative, kernel::spectral_derivative);

#[pyfunction]
fn rhs(values: Vec<f64>, length: f64, model: &Model) -> PyResult<Vec<f64>> {
    Ok(dynamics::rhs(&field(values, length)?, &model.inner).into_values())
}

#[pyfunction]
fn energy(values: Vec<f64>, length: f64) -> PyResult<f64> {
    Ok(dynamics::energy(&field(values, length)?))
}

#[derive(Serialize)]
struct RunResult {
    trajectory: Vec<dynamics::Diagnostics>,
    t_final: f64,
    u_final: Vec<f64>,
    observation: dynamics::BlowupObservation,
    traces: Vec<dynamics::CharTrace>,
    riccati: Vec<dynamics::RiccatiReport>,
}

/// Integrates to `t_end` or breakdown. `seeds` are characteristic starting
/// points; `A` and `B` use the model's criterion constants.
#[pyfunction]
#[pyo3(signature = (
    values, length, model, t_end, *, cfl=0.3, dt_min=1e-9, slope_floor=-1e4,
    dealias=false, trig_interpolation=false, tail_limit=1e-9, seeds=Vec::new()
))]
#[allow(clippy::too_many_arguments)]
fn integrate<'py>(
    py: Python<'py>,
    values: Vec<f64>,
    length: f64,
    model: &Model,
    t_end: f64,
    cfl: f64,
    dt_min: f64,
    slope_floor: f64,
    dealias: bool,
    trig_interpolation: bool,
    tail_limit: f64,
    seeds: Vec<f64>,
) -> PyResult<Bound<'py, PyAny>> {
    let u0 = field(values, length)?;
    let cfg = SolverConfig {
        cfl,
        dt_min,
        slope_floor,
        t_end,
        record_every: t_end,
        dealias,
        trig_interpolation,
        tail_limit,
    };
    let params = derive_criterion_params(&model.inner);
    let (beta, c) = if params.is_applicable() { (params.beta, params.c) } else { (0.0, 0.0) };
    let tracking = Tracking { seeds, beta, c };
    let run = py
        .detach(|| dynamics::integrate_with(&u0, &model.inner, &cfg, Some(&tracking), |_| {}))
        .map_err(value_error)?;
    let t_obs = run.observation.t_est.filter(|_| run.observation.blew_up);
    let riccati = run
        .traces
        .iter()
        .map(|t| dynamics::riccati_check(t, model.inner.gamma(), t_obs))
        .collect();
    let result = RunResult {
        trajectory: run.trajectory,
        t_final: run.final_state.t,
        u_final: run.final_state.u.into_values(),
        observation: run.observation,
        traces: run.traces,
        riccati,
    };
    to_py(py, &result)
}

#[derive(Serialize)]
struct Certificates {
    certified: bool,
    best_bound: Option<f64>,
    best_witness: Option<criteria::Witness>,
    inconsistencies: Vec<String>,
    certificates: Vec<criteria::CertificateRecord>,
}

/// Runs every applicable blowup criterion on the datum.
#[pyfunction]
fn certify<'py>(py: Python<'py>, values: Vec<f64>, length: f64, model: &Model) -> PyResult<Bound<'py, PyAny>> {
    let report = criteria::certify(&field(values, length)?, &model.inner);
    let out = Certificates {
        certified: report.certified(),
        best_bound: report.best_bound,
        best_witness: report.best_witness,
        certificates: report.records(),
        inconsistencies: report.inconsistencies,
    };
    to_py(py, &out)
}

#[pymodule]
fn rodwave(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Model>()?;
    m.add_function(wrap_pyfunction!(grid_points, m)?)?;
    m.add_function(wrap_pyfunction!(sample_profile, m)?)?;
    m.add_function(wrap_pyfunction!(convolve_p, m)?)?;
    m.add_function(wrap_pyfunction!(convolve_dp, m)?)?;
    m.add_function(wrap_pyfunction!(convolve_half_plus, m)?)?;
    m.add_function(wrap_pyfunction!(convolve_half_minus, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(rhs, m)?)?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(integrate, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    Ok(())
}
