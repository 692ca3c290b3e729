//! Python bindings: `import cqnls`.

use cqnls_core::evolve::{self, Perturbation, StabilityConfig};
use cqnls_core::hill::{self, HillOperatorSpec, OperatorKind, Parity};
use cqnls_core::{curve, wavecons, WaveError};
use pyo3::create_exception;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

create_exception!(cqnls, DomainError, PyValueError, "Parameters outside the admissible range.");
create_exception!(cqnls, NumericError, PyRuntimeError, "A computation did not meet its own checks.");

fn to_py(e: WaveError) -> PyErr {
    if e.is_input_error() {
        DomainError::new_err(e.to_string())
    } else {
        NumericError::new_err(e.to_string())
    }
}

#[pyclass(name = "WaveParams", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyWaveParams {
    inner: wavecons::WaveParams,
}

#[pymethods]
impl PyWaveParams {
    #[getter(L)]
    fn l(&self) -> f64 {
        self.inner.l
    }
    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega
    }
    #[getter]
    fn alpha1(&self) -> f64 {
        self.inner.alpha1
    }
    #[getter]
    fn alpha2(&self) -> f64 {
        self.inner.alpha2
    }
    #[getter]
    fn alpha3(&self) -> f64 {
        self.inner.alpha3
    }
    /// Elliptic parameter k².
    #[getter]
    fn m(&self) -> f64 {
        self.inner.m
    }
    #[getter]
    fn g(&self) -> f64 {
        self.inner.g
    }
    #[getter]
    fn beta_sq(&self) -> f64 {
        self.inner.beta_sq
    }
    #[getter]
    fn b(&self) -> f64 {
        self.inner.b
    }
    #[getter]
    fn quarter_period(&self) -> f64 {
        self.inner.quarter_period
    }

    fn phi(&self, x: f64) -> f64 {
        self.inner.phi_at(x)
    }

    fn dphi(&self, x: f64) -> f64 {
        self.inner.dphi_at(x)
    }

    fn __repr__(&self) -> String {
        format!(
            "WaveParams(L={}, omega={}, alpha3={}, m={}, B={})",
            self.inner.l, self.inner.omega, self.inner.alpha3, self.inner.m, self.inner.b
        )
    }
}

#[pyclass(name = "Profile", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyProfile {
    inner: wavecons::Profile,
}

#[pymethods]
impl PyProfile {
    #[getter(L)]
    fn l(&self) -> f64 {
        self.inner.l
    }
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }
    #[getter]
    fn x(&self) -> Vec<f64> {
        self.inner.x.clone()
    }
    #[getter]
    fn phi(&self) -> Vec<f64> {
        self.inner.phi.clone()
    }
    #[getter]
    fn dphi(&self) -> Vec<f64> {
        self.inner.dphi.clone()
    }

    fn evenness_defect(&self) -> f64 {
        self.inner.evenness_defect()
    }

    fn __len__(&self) -> usize {
        self.inner.n
    }
}

#[pyclass(name = "SpectrumReport", frozen, skip_from_py_object)]
pub struct PySpectrumReport {
    inner: hill::SpectrumReport,
}

#[pymethods]
impl PySpectrumReport {
    #[getter]
    fn operator(&self) -> &'static str {
        match self.inner.kind {
            OperatorKind::L1 => "L1",
            OperatorKind::L2 => "L2",
        }
    }
    #[getter]
    fn omega(&self) -> f64 {
        self.inner.omega
    }
    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }
    #[getter]
    fn tol_zero(&self) -> f64 {
        self.inner.tol_zero
    }
    #[getter]
    fn eigenvalues(&self) -> Vec<f64> {
        self.inner.eigenvalues.clone()
    }
    #[getter]
    fn parity(&self) -> Vec<&'static str> {
        self.inner
            .parity
            .iter()
            .map(|p| match p {
                Parity::Even => "even",
                Parity::Odd => "odd",
                Parity::Mixed => "mixed",
            })
            .collect()
    }
    #[getter]
    fn sign_changes(&self) -> Vec<usize> {
        self.inner.sign_changes.clone()
    }
    #[getter]
    fn n_negative(&self) -> usize {
        self.inner.n_negative
    }
    #[getter]
    fn zero_index(&self) -> Option<usize> {
        self.inner.zero_index
    }
    #[getter]
    fn zero_match_error(&self) -> Option<f64> {
        self.inner.zero_match_error
    }

    fn zero_multiplicity(&self) -> usize {
        self.inner.zero_multiplicity()
    }

    /// Eigenvector `i`, unit norm on the grid.
    fn eigenvector(&self, i: usize) -> PyResult<Vec<f64>> {
        self.inner
            .eigenvectors
            .get(i)
            .cloned()
            .ok_or_else(|| PyValueError::new_err(format!("index {i} out of range")))
    }
}

#[pyclass(name = "StabilityReport", frozen, skip_from_py_object)]
pub struct PyStabilityReport {
    inner: evolve::StabilityReport,
}

#[pymethods]
impl PyStabilityReport {
    #[getter]
    fn times(&self) -> Vec<f64> {
        self.inner.times.clone()
    }
    #[getter]
    fn orbital_dist(&self) -> Vec<f64> {
        self.inner.orbital_dist.clone()
    }
    #[getter]
    fn max_dist(&self) -> f64 {
        self.inner.max_dist
    }
    #[getter]
    fn max_parity_defect(&self) -> f64 {
        self.inner.max_parity_defect
    }
    #[getter]
    fn horizon(&self) -> f64 {
        self.inner.horizon
    }
    #[getter]
    fn steps(&self) -> usize {
        self.inner.steps
    }

    fn relative_mass_drift(&self) -> f64 {
        self.inner.relative_mass_drift()
    }

    fn relative_energy_drift(&self) -> f64 {
        self.inner.relative_energy_drift()
    }
}

#[pyfunction]
#[pyo3(name = "omega_threshold", signature = (l))]
fn omega_threshold(l: f64) -> PyResult<f64> {
    wavecons::omega_threshold(l).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (l, omega))]
fn solve_alpha3(l: f64, omega: f64) -> PyResult<f64> {
    wavecons::solve_alpha3(l, omega).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (l, omega, n = cqnls_core::DEFAULT_GRID))]
fn build_wave(l: f64, omega: f64, n: usize) -> PyResult<(PyWaveParams, PyProfile)> {
    let (wp, prof) = wavecons::build_wave(l, omega, n).map_err(to_py)?;
    Ok((PyWaveParams { inner: wp }, PyProfile { inner: prof }))
}

/// `(r_quad, r_ode)` for a wave and its sampled profile.
#[pyfunction]
fn quadrature_residual(params: &PyWaveParams, profile: &PyProfile) -> PyResult<(f64, f64)> {
    let r = wavecons::quadrature_residual(&profile.inner, &params.inner).map_err(to_py)?;
    Ok((r.r_quad, r.r_ode))
}

#[pyfunction]
#[pyo3(signature = (params, profile, operator = "L1"))]
fn spectrum(py: Python<'_>, params: &PyWaveParams, profile: &PyProfile, operator: &str) -> PyResult<PySpectrumReport> {
    let kind = match operator {
        "L1" => OperatorKind::L1,
        "L2" => OperatorKind::L2,
        other => return Err(PyValueError::new_err(format!("operator must be 'L1' or 'L2', got '{other}'"))),
    };
    let (wp, prof) = (&params.inner, &profile.inner);
    let report = py
        .detach(|| hill::spectrum_report(&HillOperatorSpec::new(kind, wp, prof), None))
        .map_err(to_py)?;
    Ok(PySpectrumReport { inner: report })
}

/// `θ` for the wave; `dt` defaults to `L/1e5`.
#[pyfunction]
#[pyo3(signature = (params, dt = None))]
fn theta_constant(py: Python<'_>, params: &PyWaveParams, dt: Option<f64>) -> PyResult<f64> {
    let wp = params.inner;
    let dt = dt.unwrap_or(wp.l / 1e5);
    Ok(py.detach(|| hill::theta_constant(&wp, dt)).map_err(to_py)?.theta)
}

/// `d''(ω)` by a centered difference of the mass.
#[pyfunction]
#[pyo3(signature = (l, omega, h = None))]
fn d2d(l: f64, omega: f64, h: Option<f64>) -> PyResult<f64> {
    curve::d2d_direct(l, omega, h.unwrap_or_else(|| curve::default_step(omega))).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (
    l, omega, delta = 1e-3, perturbation = "mode_cos1", t_end = 50.0, dt = 1e-4,
    n = cqnls_core::DEFAULT_GRID, seed = 0
))]
#[allow(clippy::too_many_arguments)]
fn run_stability(
    py: Python<'_>,
    l: f64,
    omega: f64,
    delta: f64,
    perturbation: &str,
    t_end: f64,
    dt: f64,
    n: usize,
    seed: u64,
) -> PyResult<PyStabilityReport> {
    let perturbation: Perturbation = perturbation.parse().map_err(to_py)?;
    let cfg = StabilityConfig {
        l,
        omega,
        delta,
        perturbation,
        t_end,
        dt,
        n,
        seed,
    };
    let report = py.detach(|| evolve::run_stability(&cfg)).map_err(to_py)?;
    Ok(PyStabilityReport { inner: report })
}

#[pymodule]
pub fn cqnls(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", cqnls_core::VERSION)?;
    m.add("DomainError", m.py().get_type::<DomainError>())?;
    m.add("NumericError", m.py().get_type::<NumericError>())?;
    m.add_class::<PyWaveParams>()?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PySpectrumReport>()?;
    m.add_class::<PyStabilityReport>()?;
    m.add_function(wrap_pyfunction!(omega_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(solve_alpha3, m)?)?;
    m.add_function(wrap_pyfunction!(build_wave, m)?)?;
    m.add_function(wrap_pyfunction!(quadrature_residual, m)?)?;
    m.add_function(wrap_pyfunction!(spectrum, m)?)?;
    m.add_function(wrap_pyfunction!(theta_constant, m)?)?;
    m.add_function(wrap_pyfunction!(d2d, m)?)?;
    m.add_function(wrap_pyfunction!(run_stability, m)?)?;
    Ok(())
}
