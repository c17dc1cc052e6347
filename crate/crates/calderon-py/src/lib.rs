//! Python bindings: the step-function/rearrangement types plus the norm,
//! gamma and sharpness entry points, mirroring the Rust API with default
//! numerical options.

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use calderon as core;

fn to_py_err(e: core::Error) -> PyErr {
    match e {
        core::Error::Io(err) => PyIOError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "Weight", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyWeight {
    inner: core::Weight,
}

#[pymethods]
impl PyWeight {
    /// w(s) = s^(1/p), p > 1.
    #[staticmethod]
    fn power(p: f64) -> PyResult<Self> {
        core::Weight::power(p)
            .map(|inner| PyWeight { inner })
            .map_err(to_py_err)
    }

    /// w(s) = s^(1/p) (|ln s| + 1)^(1/q), p > 1, q != 0.
    #[staticmethod]
    fn power_log(p: f64, q: f64) -> PyResult<Self> {
        core::Weight::power_log(p, q)
            .map(|inner| PyWeight { inner })
            .map_err(to_py_err)
    }

    /// w(s) = s^(1/p) (|ln s| + 1)^q (ln(|ln s| + 3))^r, p > 1.
    #[staticmethod]
    fn power_log_log(p: f64, q: f64, r: f64) -> PyResult<Self> {
        core::Weight::power_log_log(p, q, r)
            .map(|inner| PyWeight { inner })
            .map_err(to_py_err)
    }

    /// Parse the CLI grammar, e.g. "power:p=2" or "powerloglog:p=2,q=1,r=1".
    #[staticmethod]
    fn parse(spec: &str) -> PyResult<Self> {
        core::cli::parse_weight_spec(spec)
            .map(|inner| PyWeight { inner })
            .map_err(to_py_err)
    }

    fn evaluate(&self, s: f64) -> PyResult<f64> {
        if !(s.is_finite() && s > 0.0) {
            return Err(PyValueError::new_err(format!(
                "weights are defined on (0, inf), got s = {s}"
            )));
        }
        Ok(self.inner.evaluate(s))
    }

    fn is_monotone(&self) -> bool {
        self.inner.is_monotone()
    }

    fn __repr__(&self) -> String {
        format!("Weight({})", self.inner.describe())
    }
}

#[pyclass(name = "StepFunction", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyStepFunction {
    inner: core::StepFunction,
}

#[pymethods]
impl PyStepFunction {
    /// Build from (value, mass) pairs; values enter as |value|.
    #[new]
    fn new(pieces: Vec<(f64, f64)>) -> PyResult<Self> {
        core::StepFunction::new(pieces)
            .map(|inner| PyStepFunction { inner })
            .map_err(to_py_err)
    }

    fn pieces(&self) -> Vec<(f64, f64)> {
        self.inner.pieces().iter().map(|p| (p.value, p.mass)).collect()
    }

    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    fn integral(&self) -> f64 {
        self.inner.integral()
    }

    /// mu{ |f| >= threshold }.
    fn tail(&self, threshold: f64) -> PyResult<f64> {
        self.inner.tail(threshold).map_err(to_py_err)
    }

    fn normalized(&self) -> Self {
        PyStepFunction {
            inner: self.inner.normalized(),
        }
    }

    fn rearrange(&self) -> PyProfile {
        PyProfile {
            inner: self.inner.rearrange(),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!("StepFunction(pieces={})", self.inner.len())
    }
}

#[pyclass(name = "DecreasingProfile", frozen)]
struct PyProfile {
    inner: core::DecreasingProfile,
}

#[pymethods]
impl PyProfile {
    /// f*(t) for t > 0.
    fn value_at(&self, t: f64) -> PyResult<f64> {
        self.inner.value_at(t).map_err(to_py_err)
    }

    /// f**(t) = (1/t) integral_0^t f* for t > 0.
    fn double_star(&self, t: f64) -> PyResult<f64> {
        self.inner.double_star(t).map_err(to_py_err)
    }

    fn prefix_integral(&self, t: f64) -> PyResult<f64> {
        self.inner.prefix_integral(t).map_err(to_py_err)
    }

    fn tail(&self, threshold: f64) -> PyResult<f64> {
        self.inner.tail(threshold).map_err(to_py_err)
    }

    fn total_mass(&self) -> f64 {
        self.inner.total_mass()
    }

    fn total_integral(&self) -> f64 {
        self.inner.total_integral()
    }

    /// (start, end, value) triples of the segments.
    fn segments(&self) -> Vec<(f64, f64, f64)> {
        (0..self.inner.segment_count())
            .map(|i| self.inner.segment(i))
            .collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "DecreasingProfile(segments={}, total_mass={})",
            self.inner.segment_count(),
            self.inner.total_mass()
        )
    }
}

#[pyclass(name = "GammaEstimate", frozen)]
struct PyGammaEstimate {
    #[pyo3(get)]
    value: f64,
    #[pyo3(get)]
    argmax_t: f64,
    #[pyo3(get)]
    grid_size: usize,
    #[pyo3(get)]
    diverged: bool,
}

#[pymethods]
impl PyGammaEstimate {
    fn __repr__(&self) -> String {
        format!(
            "GammaEstimate(value={}, argmax_t={}, diverged={})",
            self.value, self.argmax_t, self.diverged
        )
    }
}

#[pyclass(name = "NormReport", frozen)]
struct PyNormReport {
    #[pyo3(get)]
    weak_norm: f64,
    #[pyo3(get)]
    marcinkiewicz_norm: f64,
    #[pyo3(get)]
    gamma_value: f64,
    #[pyo3(get)]
    ratio: f64,
    #[pyo3(get)]
    lower_ok: bool,
    #[pyo3(get)]
    upper_ok: bool,
    #[pyo3(get)]
    argmax_t_weak: f64,
    #[pyo3(get)]
    argmax_t_marc: f64,
}

impl From<core::NormReport> for PyNormReport {
    fn from(r: core::NormReport) -> Self {
        PyNormReport {
            weak_norm: r.weak_norm,
            marcinkiewicz_norm: r.marcinkiewicz_norm,
            gamma_value: r.gamma_value,
            ratio: r.ratio,
            lower_ok: r.lower_ok,
            upper_ok: r.upper_ok,
            argmax_t_weak: r.argmax_t_weak,
            argmax_t_marc: r.argmax_t_marc,
        }
    }
}

#[pymethods]
impl PyNormReport {
    fn __repr__(&self) -> String {
        format!(
            "NormReport(weak={}, marcinkiewicz={}, ratio={}, lower_ok={}, upper_ok={})",
            self.weak_norm, self.marcinkiewicz_norm, self.ratio, self.lower_ok, self.upper_ok
        )
    }
}

#[pyclass(name = "KappaReport", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyKappaReport {
    #[pyo3(get)]
    kappa: f64,
    #[pyo3(get)]
    g: f64,
    #[pyo3(get)]
    h: f64,
    #[pyo3(get)]
    k: f64,
    #[pyo3(get)]
    closed_form_k: Option<f64>,
    #[pyo3(get)]
    argmax_t_g: f64,
    #[pyo3(get)]
    argmax_t_h: f64,
}

impl From<core::KappaReport> for PyKappaReport {
    fn from(r: core::KappaReport) -> Self {
        PyKappaReport {
            kappa: r.kappa,
            g: r.g,
            h: r.h,
            k: r.k,
            closed_form_k: r.closed_form_k,
            argmax_t_g: r.argmax_t_g,
            argmax_t_h: r.argmax_t_h,
        }
    }
}

#[pymethods]
impl PyKappaReport {
    fn __repr__(&self) -> String {
        format!(
            "KappaReport(kappa={}, G={}, H={}, K={})",
            self.kappa, self.g, self.h, self.k
        )
    }
}

#[pyclass(name = "ThetaSweep", frozen)]
struct PyThetaSweep {
    #[pyo3(get)]
    theta_upper: f64,
    #[pyo3(get)]
    argmin_kappa: f64,
    #[pyo3(get)]
    boundary: bool,
    #[pyo3(get)]
    rows: Vec<PyKappaReport>,
}

#[pymethods]
impl PyThetaSweep {
    fn __repr__(&self) -> String {
        format!(
            "ThetaSweep(theta_upper={}, argmin_kappa={}, boundary={}, rows={})",
            self.theta_upper,
            self.argmin_kappa,
            self.boundary,
            self.rows.len()
        )
    }
}

/// gamma(w) = sup_t (w(t)/t) integral_0^t du/w(u), default search window.
#[pyfunction]
fn gamma(w: &PyWeight) -> PyResult<PyGammaEstimate> {
    let est = core::gamma(&w.inner, core::GammaOptions::default()).map_err(to_py_err)?;
    Ok(PyGammaEstimate {
        value: est.value,
        argmax_t: est.argmax_t,
        grid_size: est.grid_size,
        diverged: est.diverged,
    })
}

/// gamma for pure power weights: p/(p-1).
#[pyfunction]
fn gamma_closed_power(p: f64) -> PyResult<f64> {
    core::gamma_closed_power(p).map_err(to_py_err)
}

/// sup_t w(t) f*(t); returns (value, argmax_t).
#[pyfunction]
fn weak_norm(f: &PyStepFunction, w: &PyWeight) -> PyResult<(f64, f64)> {
    let r = core::weak_norm(&f.inner, &w.inner).map_err(to_py_err)?;
    Ok((r.value, r.argmax_t))
}

/// sup_t w(t) f**(t); returns (value, argmax_t, tail_bounded).
#[pyfunction]
fn marcinkiewicz_norm(f: &PyStepFunction, w: &PyWeight) -> PyResult<(f64, f64, bool)> {
    let r = core::marcinkiewicz_norm(&f.inner, &w.inner).map_err(to_py_err)?;
    Ok((r.value, r.argmax_t, r.tail_bounded))
}

/// The Marcinkiewicz norm recomputed by greedy subset filling.
#[pyfunction]
fn greedy_subset_norm(f: &PyStepFunction, w: &PyWeight) -> PyResult<f64> {
    core::greedy_subset_norm(&f.inner, &w.inner).map_err(to_py_err)
}

/// Exact subset supremum; capped at 20 pieces.
#[pyfunction]
fn exhaustive_subset_norm(f: &PyStepFunction, w: &PyWeight) -> PyResult<f64> {
    core::exhaustive_subset_norm(&f.inner, &w.inner).map_err(to_py_err)
}

/// Sampled lower bound from random subsets (ChaCha8-seeded).
#[pyfunction]
fn random_subset_lower_bound(
    f: &PyStepFunction,
    w: &PyWeight,
    trials: u64,
    seed: u64,
) -> PyResult<f64> {
    let mut rng = core::random::seeded_rng(seed);
    core::random_subset_lower_bound(&f.inner, &w.inner, trials, &mut rng).map_err(to_py_err)
}

/// Check weak <= marcinkiewicz <= gamma * weak for one function.
#[pyfunction]
fn verify_bilateral(f: &PyStepFunction, w: &PyWeight) -> PyResult<PyNormReport> {
    core::verify_bilateral(&f.inner, &w.inner)
        .map(PyNormReport::from)
        .map_err(to_py_err)
}

/// G_kappa(w): sup of w(t)(1 - t^kappa) on (0, 1); returns (value, argmax_t).
#[pyfunction]
fn g_kappa(w: &PyWeight, kappa: f64) -> PyResult<(f64, f64)> {
    let r = core::g_kappa(&w.inner, kappa, core::SharpnessOptions::default()).map_err(to_py_err)?;
    Ok((r.value, r.argmax_t))
}

/// H_kappa(w): sup of w(t)(1 - t^kappa/(kappa+1)); returns (value, argmax_t).
#[pyfunction]
fn h_kappa(w: &PyWeight, kappa: f64) -> PyResult<(f64, f64)> {
    let r = core::h_kappa(&w.inner, kappa, core::SharpnessOptions::default()).map_err(to_py_err)?;
    Ok((r.value, r.argmax_t))
}

/// G, H and the ratio K = H/G at one kappa.
#[pyfunction]
fn k_kappa(w: &PyWeight, kappa: f64) -> PyResult<PyKappaReport> {
    core::k_kappa(&w.inner, kappa, core::SharpnessOptions::default())
        .map(PyKappaReport::from)
        .map_err(to_py_err)
}

/// Closed forms (G, H, K) for power weights.
#[pyfunction]
fn closed_form_ghk_power(p: f64, kappa: f64) -> PyResult<(f64, f64, f64)> {
    core::closed_form_ghk_power(p, kappa).map_err(to_py_err)
}

/// Minimise K_kappa over a geometric kappa grid.
#[pyfunction]
fn theta_upper_bound(
    w: &PyWeight,
    kappa_min: f64,
    kappa_max: f64,
    steps: usize,
) -> PyResult<PyThetaSweep> {
    let sweep = core::theta_upper_bound(
        &w.inner,
        kappa_min,
        kappa_max,
        steps,
        core::SharpnessOptions::default(),
    )
    .map_err(to_py_err)?;
    Ok(PyThetaSweep {
        theta_upper: sweep.theta_upper,
        argmin_kappa: sweep.argmin_kappa,
        boundary: sweep.boundary,
        rows: sweep.rows.into_iter().map(PyKappaReport::from).collect(),
    })
}

/// The extremal profile 1 - t^kappa at t in [0, 1].
#[pyfunction]
fn f_star_kappa(kappa: f64, t: f64) -> PyResult<f64> {
    core::f_star_kappa(kappa, t).map_err(to_py_err)
}

/// Its exact average 1 - t^kappa/(kappa+1) at t in (0, 1].
#[pyfunction]
fn f_double_star_kappa(kappa: f64, t: f64) -> PyResult<f64> {
    core::f_double_star_kappa(kappa, t).map_err(to_py_err)
}

/// Midpoint-sample a Python callable on (0, 1) into n equal-mass pieces.
#[pyfunction]
fn sample_analytic(h: &Bound<'_, PyAny>, n: usize) -> PyResult<PyStepFunction> {
    if n == 0 {
        return Err(PyValueError::new_err("sample count must be positive"));
    }
    let mut values = Vec::with_capacity(n);
    for i in 0..n {
        let t = (i as f64 + 0.5) / n as f64;
        values.push(h.call1((t,))?.extract::<f64>()?);
    }
    core::StepFunction::from_samples(&values)
        .map(|inner| PyStepFunction { inner })
        .map_err(to_py_err)
}

/// A reproducible random step function (<= max_pieces pieces, total mass 1).
#[pyfunction]
fn random_step_function(seed: u64, max_pieces: usize) -> PyResult<PyStepFunction> {
    if max_pieces == 0 {
        return Err(PyValueError::new_err("max_pieces must be positive"));
    }
    let mut rng = core::random::seeded_rng(seed);
    Ok(PyStepFunction {
        inner: core::random::random_step_function(&mut rng, max_pieces),
    })
}

#[pymodule]
fn calderon_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeight>()?;
    m.add_class::<PyStepFunction>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyGammaEstimate>()?;
    m.add_class::<PyNormReport>()?;
    m.add_class::<PyKappaReport>()?;
    m.add_class::<PyThetaSweep>()?;
    m.add_function(wrap_pyfunction!(gamma, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_closed_power, m)?)?;
    m.add_function(wrap_pyfunction!(weak_norm, m)?)?;
    m.add_function(wrap_pyfunction!(marcinkiewicz_norm, m)?)?;
    m.add_function(wrap_pyfunction!(greedy_subset_norm, m)?)?;
    m.add_function(wrap_pyfunction!(exhaustive_subset_norm, m)?)?;
    m.add_function(wrap_pyfunction!(random_subset_lower_bound, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bilateral, m)?)?;
    m.add_function(wrap_pyfunction!(g_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(h_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(k_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_ghk_power, m)?)?;
    m.add_function(wrap_pyfunction!(theta_upper_bound, m)?)?;
    m.add_function(wrap_pyfunction!(f_star_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(f_double_star_kappa, m)?)?;
    m.add_function(wrap_pyfunction!(sample_analytic, m)?)?;
    m.add_function(wrap_pyfunction!(random_step_function, m)?)?;
    Ok(())
}
