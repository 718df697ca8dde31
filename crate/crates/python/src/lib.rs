//! Python bindings for `ik-solitary`.
//!
//! Profiles come back as plain lists so that the module has no NumPy
//! dependency; `numpy.asarray` on any of them gives an array.

use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ik_solitary as core;
use ik_solitary::{Error, ExponentSet, IntegratorConfig};

create_exception!(ik_solitary, SolverError, PyRuntimeError);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::InvalidExponents(_) | Error::SingularMatrix(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => SolverError::new_err(e.to_string()),
    }
}

fn exponents(p: Vec<u32>) -> PyResult<ExponentSet> {
    ExponentSet::new(p).map_err(to_py)
}

fn config(rel_tol: f64, abs_tol: f64, x_max: f64) -> IntegratorConfig {
    IntegratorConfig {
        rel_tol,
        abs_tol,
        x_max,
        ..IntegratorConfig::default()
    }
}

#[pyclass(name = "CrestState", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyCrestState {
    delta: f64,
    c: f64,
    eta0: f64,
    u0: f64,
    phi1_0: f64,
    d0: f64,
    /// `None` when the denominator vanishes at the crest.
    kappa0: Option<f64>,
}

#[pymethods]
impl PyCrestState {
    fn __repr__(&self) -> String {
        format!(
            "CrestState(delta={}, c={}, eta0={}, u0={}, d0={})",
            self.delta, self.c, self.eta0, self.u0, self.d0
        )
    }
}

#[pyclass(name = "CriticalPoint", frozen, get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyCriticalPoint {
    delta_c: f64,
    eta_c0: f64,
    u_c0: f64,
    c_c: f64,
    v_c0: f64,
    slope_nondim: f64,
    slope_dim: f64,
    theta_deg: f64,
}

#[pymethods]
impl PyCriticalPoint {
    fn __repr__(&self) -> String {
        format!(
            "CriticalPoint(delta_c={}, eta_c0={}, u_c0={}, c_c={}, theta_deg={})",
            self.delta_c, self.eta_c0, self.u_c0, self.c_c, self.theta_deg
        )
    }
}

impl From<core::CriticalPoint> for PyCriticalPoint {
    fn from(cp: core::CriticalPoint) -> Self {
        Self {
            delta_c: cp.delta_c,
            eta_c0: cp.eta_c0,
            u_c0: cp.u_c0,
            c_c: cp.c_c,
            v_c0: cp.v_c0,
            slope_nondim: cp.slope_nondim,
            slope_dim: cp.slope_dim,
            theta_deg: cp.theta_deg,
        }
    }
}

#[pyclass(name = "WaveProfile", frozen)]
struct PyWaveProfile {
    inner: core::WaveProfile,
}

#[pymethods]
impl PyWaveProfile {
    #[getter]
    fn delta(&self) -> f64 {
        self.inner.delta
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c
    }

    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.grid.clone()
    }

    #[getter]
    fn eta(&self) -> Vec<f64> {
        self.inner.etas()
    }

    #[getter]
    fn u(&self) -> Vec<f64> {
        self.inner.states.iter().map(|s| s.u).collect()
    }

    #[getter]
    fn phi1(&self) -> Vec<f64> {
        self.inner.states.iter().map(|s| s.phi1).collect()
    }

    #[getter]
    fn eta_prime(&self) -> Vec<f64> {
        self.inner.eta_prime.clone()
    }

    #[getter]
    fn d(&self) -> Vec<f64> {
        self.inner.d_values.clone()
    }

    #[getter]
    fn i1(&self) -> Vec<f64> {
        self.inner.i1.clone()
    }

    #[getter]
    fn i2(&self) -> Vec<f64> {
        self.inner.i2.clone()
    }

    #[getter]
    fn phi0_prime(&self) -> Vec<f64> {
        self.inner.phi0_prime.clone()
    }

    #[getter]
    fn phi1_prime(&self) -> Vec<f64> {
        self.inner.phi1_prime.clone()
    }

    #[getter]
    fn eta_max(&self) -> f64 {
        self.inner.eta_max
    }

    #[getter]
    fn kappa0(&self) -> Option<f64> {
        self.inner.kappa0
    }

    #[getter]
    fn x_end(&self) -> f64 {
        self.inner.half().x_end()
    }

    #[getter]
    fn stop(&self) -> String {
        format!("{:?}", self.inner.stop)
    }

    /// `(max |I1|, max |I2|)` over the profile.
    fn max_identity_residuals(&self) -> (f64, f64) {
        self.inner.max_identity_residuals()
    }

    /// `(eta, u, phi1)` at `x` from the dense output, or `None` outside the span.
    fn state_at(&self, x: f64) -> Option<(f64, f64, f64)> {
        self.inner.state_at(x).map(|s| (s.eta, s.u, s.phi1))
    }

    fn resampled(&self, dx: f64) -> PyResult<Self> {
        Ok(Self {
            inner: self.inner.resampled(dx).map_err(to_py)?,
        })
    }

    /// Profile in physical units for still-water depth `depth`.
    #[pyo3(signature = (depth, gravity = 9.81))]
    fn dimensional<'py>(
        &self,
        py: Python<'py>,
        depth: f64,
        gravity: f64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let dim = core::dimensionalize(&self.inner, depth, gravity).map_err(to_py)?;
        let d = PyDict::new(py);
        d.set_item("x", dim.x.clone())?;
        d.set_item("eta", dim.eta.clone())?;
        d.set_item("u", dim.u.clone())?;
        d.set_item("slope", dim.slope.clone())?;
        d.set_item("c", dim.c)?;
        d.set_item("amplitude", dim.amplitude)?;
        d.set_item("length_scale", dim.wavelength)?;
        d.set_item("long_wave_speed", dim.long_wave_speed())?;
        Ok(d)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "WaveProfile(delta={}, eta_max={}, points={})",
            self.inner.delta,
            self.inner.eta_max,
            self.inner.len()
        )
    }
}

/// Model constants for an exponent set, as a dict.
#[pyfunction]
#[pyo3(signature = (p = vec![2]))]
fn build_params(py: Python<'_>, p: Vec<u32>) -> PyResult<Bound<'_, PyDict>> {
    let params = core::build_params(&exponents(p)?).map_err(to_py)?;
    let pos = core::check_positivity(&params);
    let d = PyDict::new(py);
    d.set_item("p", params.p.as_slice().to_vec())?;
    d.set_item("gamma", params.gamma)?;
    d.set_item(
        "gamma_vec",
        params.gamma_vec.iter().copied().collect::<Vec<_>>(),
    )?;
    d.set_item("kappa1", params.kappa1)?;
    d.set_item("kappa2", params.kappa2)?;
    d.set_item("kappa3", params.kappa3)?;
    d.set_item("a0", params.a0.iter().copied().collect::<Vec<_>>())?;
    d.set_item("min_eig_a1", pos.min_eig_a1)?;
    d.set_item("min_eig_a0_shifted", pos.min_eig_a0_shifted)?;
    d.set_item("positive", pos.is_positive())?;
    Ok(d)
}

#[pyfunction]
fn phase_speed(delta: f64) -> f64 {
    core::phase_speed(delta)
}

/// Crest quartic coefficients in descending degree.
#[pyfunction]
fn quartic_coeffs(c: f64) -> [f64; 5] {
    core::quartic_coeffs(c)
}

#[pyfunction]
fn solve_crest(delta: f64) -> PyResult<PyCrestState> {
    let crest = core::solve_crest(delta).map_err(to_py)?;
    Ok(PyCrestState {
        delta: crest.delta,
        c: crest.c,
        eta0: crest.eta0,
        u0: crest.u0,
        phi1_0: crest.phi1_0,
        d0: crest.denominator(),
        kappa0: core::crest_curvature(&crest).ok(),
    })
}

#[pyfunction]
fn solve_critical() -> PyResult<PyCriticalPoint> {
    Ok(core::solve_critical().map_err(to_py)?.into())
}

#[pyfunction]
fn included_angle(slope_dim: f64) -> f64 {
    core::included_angle(slope_dim)
}

#[pyfunction]
#[pyo3(signature = (delta, dx = None, rel_tol = 1e-10, abs_tol = 1e-12, x_max = 30.0))]
fn solve_solitary(
    delta: f64,
    dx: Option<f64>,
    rel_tol: f64,
    abs_tol: f64,
    x_max: f64,
) -> PyResult<PyWaveProfile> {
    let mut inner = core::solve_solitary(delta, &config(rel_tol, abs_tol, x_max)).map_err(to_py)?;
    if let Some(dx) = dx {
        inner = inner.resampled(dx).map_err(to_py)?;
    }
    Ok(PyWaveProfile { inner })
}

#[pyfunction]
#[pyo3(signature = (dx = None, rel_tol = 1e-10, abs_tol = 1e-12, x_max = 30.0))]
fn extreme_profile(
    dx: Option<f64>,
    rel_tol: f64,
    abs_tol: f64,
    x_max: f64,
) -> PyResult<PyWaveProfile> {
    let cp = core::solve_critical().map_err(to_py)?;
    let mut inner = core::extreme_profile(&cp, &config(rel_tol, abs_tol, x_max)).map_err(to_py)?;
    if let Some(dx) = dx {
        inner = inner.resampled(dx).map_err(to_py)?;
    }
    Ok(PyWaveProfile { inner })
}

#[pyfunction]
fn kdv_profile(delta: f64, grid: Vec<f64>) -> Vec<f64> {
    core::kdv_profile(delta, &grid)
}

#[pyfunction]
fn compare_kdv(profile: &PyWaveProfile) -> f64 {
    core::compare_kdv(&profile.inner)
}

/// Rows `(delta, eta0, -kappa0 or None, d0)` in input order.
#[pyfunction]
fn diagnostics_table(deltas: Vec<f64>) -> PyResult<Vec<(f64, f64, Option<f64>, f64)>> {
    core::diagnostics_table(&deltas)
        .into_iter()
        .map(|r| {
            r.map(|r| (r.delta, r.eta0, r.minus_kappa0, r.d0))
                .map_err(to_py)
        })
        .collect()
}

#[pyfunction]
fn verify_kdv_solution(gamma: f64, grid: Vec<f64>) -> f64 {
    core::verify_kdv_solution(gamma, &grid)
}

#[pyfunction]
fn fundamental_checks(py: Python<'_>, grid: Vec<f64>) -> PyResult<Bound<'_, PyDict>> {
    let r = core::fundamental_checks(&grid);
    let d = PyDict::new(py);
    d.set_item("max_residual_u1", r.max_residual_u1)?;
    d.set_item("max_residual_u2", r.max_residual_u2)?;
    d.set_item("max_wronskian_error", r.max_wronskian_error)?;
    d.set_item("decay_exponent", r.decay_exponent)?;
    d.set_item("growth_exponent", r.growth_exponent)?;
    d.set_item("passes", r.passes())?;
    Ok(d)
}

#[pyfunction]
fn q_symbol(p: Vec<u32>, xi: f64) -> PyResult<f64> {
    let params = core::build_params(&exponents(p)?).map_err(to_py)?;
    Ok(core::q_symbol(&params, xi))
}

#[pyfunction]
#[pyo3(signature = (p, xi_max = 20.0, samples = 100))]
fn q_positivity(p: Vec<u32>, xi_max: f64, samples: usize) -> PyResult<f64> {
    core::q_positivity(&exponents(p)?, xi_max, samples).map_err(to_py)
}

/// `(c, eta, phi0, phi)` of the first-order family on `grid`.
#[pyfunction]
#[pyo3(signature = (delta, alpha, grid, p = vec![2]))]
fn first_order_family(
    delta: f64,
    alpha: f64,
    grid: Vec<f64>,
    p: Vec<u32>,
) -> PyResult<(f64, Vec<f64>, Vec<f64>, Vec<Vec<f64>>)> {
    let params = core::build_params(&exponents(p)?).map_err(to_py)?;
    let fam = core::first_order_family(&params, delta, alpha, &grid).map_err(to_py)?;
    Ok((fam.c, fam.eta, fam.phi0, fam.phi))
}

#[pymodule]
#[pyo3(name = "ik_solitary")]
fn ik_solitary_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("SolverError", m.py().get_type::<SolverError>())?;
    m.add_class::<PyCrestState>()?;
    m.add_class::<PyCriticalPoint>()?;
    m.add_class::<PyWaveProfile>()?;
    m.add_function(wrap_pyfunction!(build_params, m)?)?;
    m.add_function(wrap_pyfunction!(phase_speed, m)?)?;
    m.add_function(wrap_pyfunction!(quartic_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(solve_crest, m)?)?;
    m.add_function(wrap_pyfunction!(solve_critical, m)?)?;
    m.add_function(wrap_pyfunction!(included_angle, m)?)?;
    m.add_function(wrap_pyfunction!(solve_solitary, m)?)?;
    m.add_function(wrap_pyfunction!(extreme_profile, m)?)?;
    m.add_function(wrap_pyfunction!(kdv_profile, m)?)?;
    m.add_function(wrap_pyfunction!(compare_kdv, m)?)?;
    m.add_function(wrap_pyfunction!(diagnostics_table, m)?)?;
    m.add_function(wrap_pyfunction!(verify_kdv_solution, m)?)?;
    m.add_function(wrap_pyfunction!(fundamental_checks, m)?)?;
    m.add_function(wrap_pyfunction!(q_symbol, m)?)?;
    m.add_function(wrap_pyfunction!(q_positivity, m)?)?;
    m.add_function(wrap_pyfunction!(first_order_family, m)?)?;
    Ok(())
}
