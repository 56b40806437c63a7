use pyo3::exceptions::{PyArithmeticError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use ctl_core::equilibrium::{self, CurvatureReport, RhoScan, CURVATURE_STEP};
use ctl_core::expr::{self, Context};
use ctl_core::fd::DEFAULT_STEP;
use ctl_core::flows::{self, ContactHamiltonian, LegendreMap};
use ctl_core::metriclab::{self, GtdPartialParams, GtdTotalParams, MetricFamily, OmegaFunction};
use ctl_core::{phasespace, registry, CtlError};

fn py_err(e: CtlError) -> PyErr {
    match e {
        CtlError::DimensionMismatch { .. }
        | CtlError::ZeroDimension
        | CtlError::DimensionTooLarge { .. }
        | CtlError::IndexOutOfRange { .. }
        | CtlError::InvalidParameter(_) => PyValueError::new_err(e.to_string()),
        CtlError::Expression(ref inner) if !matches!(inner, expr::ExprError::Domain { .. }) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyArithmeticError::new_err(e.to_string()),
    }
}

trait IntoPy<T> {
    fn py(self) -> PyResult<T>;
}

impl<T> IntoPy<T> for ctl_core::Result<T> {
    fn py(self) -> PyResult<T> {
        self.map_err(py_err)
    }
}

/// A point `(Phi, q, p)` in Darboux coordinates.
#[pyclass(name = "DarbouxPoint", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPoint(ctl_core::DarbouxPoint);

#[pymethods]
impl PyPoint {
    #[new]
    fn new(phi: f64, q: Vec<f64>, p: Vec<f64>) -> PyResult<Self> {
        Ok(Self(ctl_core::DarbouxPoint::new(phi, q, p).py()?))
    }

    #[staticmethod]
    fn from_coords(coords: Vec<f64>) -> PyResult<Self> {
        Ok(Self(ctl_core::DarbouxPoint::from_coords(&coords).py()?))
    }

    #[getter]
    fn phi(&self) -> f64 {
        self.0.phi()
    }

    #[getter]
    fn q(&self) -> Vec<f64> {
        self.0.q().to_vec()
    }

    #[getter]
    fn p(&self) -> Vec<f64> {
        self.0.p().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn to_list(&self) -> Vec<f64> {
        self.0.to_vec()
    }

    fn __repr__(&self) -> String {
        format!("DarbouxPoint({})", self.0)
    }
}

/// A phase-space metric function built from a registry name such as `pair-norm:1`.
#[pyclass(name = "Omega", frozen)]
struct PyOmega(OmegaFunction);

#[pymethods]
impl PyOmega {
    #[new]
    #[pyo3(signature = (name, n = 2))]
    fn new(name: &str, n: usize) -> PyResult<Self> {
        Ok(Self(registry::phase_omega(name, n).py()?))
    }

    #[staticmethod]
    fn invariant_registry() -> PyResult<Vec<Self>> {
        Ok(OmegaFunction::invariant_registry().py()?.into_iter().map(Self).collect())
    }

    #[getter]
    fn label(&self) -> String {
        self.0.label().to_string()
    }

    fn value(&self, x: &PyPoint) -> PyResult<f64> {
        self.0.value(&x.0).py()
    }

    /// `{h, Omega}` for the total Legendre generator.
    #[pyo3(signature = (x, h_fd = DEFAULT_STEP))]
    fn poisson_residual(&self, x: &PyPoint, h_fd: f64) -> PyResult<f64> {
        metriclab::poisson_constraint_residual(&self.0, &x.0, h_fd).py()
    }

    fn __repr__(&self) -> String {
        format!("Omega('{}')", self.0.label())
    }
}

/// A parsed arithmetic expression over named variables.
#[pyclass(name = "Expression", frozen)]
struct PyExpression(expr::Expression);

#[pymethods]
impl PyExpression {
    #[new]
    fn new(text: &str, variables: Vec<String>) -> PyResult<Self> {
        expr::parse_expression(text, &Context::new(variables))
            .map(Self)
            .map_err(|e| py_err(e.into()))
    }

    fn eval(&self, bindings: Vec<f64>) -> PyResult<f64> {
        self.0.eval(&bindings).map_err(|e| py_err(e.into()))
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }
}

fn legendre_map(n: usize, pairs: Option<Vec<usize>>) -> PyResult<LegendreMap> {
    match pairs {
        Some(p) => LegendreMap::new(n, &p).py(),
        None => LegendreMap::total(n).py(),
    }
}

fn family(name: &str, omega: &str, n: usize, k: u32) -> PyResult<MetricFamily> {
    let w = registry::phase_omega(omega, n).py()?;
    match name {
        "epsilon" => Ok(MetricFamily::Epsilon(w)),
        "gtd_total" => Ok(MetricFamily::GtdTotal(GtdTotalParams::identity(w))),
        "gtd_partial" => Ok(MetricFamily::GtdPartial(GtdPartialParams { k, omega: w })),
        other => Err(PyValueError::new_err(format!("unknown family '{other}'"))),
    }
}

#[pyfunction]
fn eta(x: &PyPoint) -> Vec<f64> {
    phasespace::eval_eta(&x.0).0.iter().copied().collect()
}

#[pyfunction]
fn reeb(n: usize) -> PyResult<Vec<f64>> {
    Ok(phasespace::reeb(n).py()?.iter().copied().collect())
}

#[pyfunction]
fn volume_form_coefficient(x: &PyPoint) -> PyResult<f64> {
    phasespace::volume_form_coefficient(&x.0).py()
}

/// Applies the discrete Legendre map on `pairs` (1-based; all pairs when omitted).
#[pyfunction]
#[pyo3(signature = (x, pairs = None))]
fn discrete_legendre(x: &PyPoint, pairs: Option<Vec<usize>>) -> PyResult<PyPoint> {
    let m = legendre_map(x.0.n(), pairs)?;
    Ok(PyPoint(flows::discrete_legendre(&x.0, &m).py()?))
}

/// RK4 orbit of the Legendre generator; returns `(times, states)`.
#[pyfunction]
#[pyo3(signature = (x, t_end, dt = 1e-3, pair = None))]
fn integrate_flow(x: &PyPoint, t_end: f64, dt: f64, pair: Option<usize>) -> PyResult<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = x.0.n();
    let field = match pair {
        Some(i) => flows::hamiltonian_vector_field(&ContactHamiltonian::partial_legendre(i, n).py()?),
        None => flows::total_legendre_field(n).py()?,
    };
    let traj = flows::integrate_flow(&field, &x.0, t_end, dt).py()?;
    Ok((traj.times, traj.states.iter().map(|s| s.to_vec()).collect()))
}

#[pyfunction]
fn closed_form_orbit(x: &PyPoint, t: f64) -> PyPoint {
    PyPoint(flows::closed_form_orbit(&x.0, t))
}

/// Killing residual of a metric family along the total Legendre generator.
#[pyfunction]
#[pyo3(signature = (family_name, omega, x, k = 0, h_fd = DEFAULT_STEP))]
fn killing_residual(family_name: &str, omega: &str, x: &PyPoint, k: u32, h_fd: f64) -> PyResult<f64> {
    let metric = metriclab::build_metric(&family(family_name, omega, x.0.n(), k)?).py()?;
    let field = flows::total_legendre_field(x.0.n()).py()?;
    metriclab::killing_residual(&field, &metric, &x.0, h_fd).py()
}

#[pyfunction]
#[pyo3(signature = (family_name, omega, x, pairs = None, k = 0))]
fn isometry_residual(family_name: &str, omega: &str, x: &PyPoint, pairs: Option<Vec<usize>>, k: u32) -> PyResult<f64> {
    let metric = metriclab::build_metric(&family(family_name, omega, x.0.n(), k)?).py()?;
    metriclab::discrete_isometry_residual(&metric, &legendre_map(x.0.n(), pairs)?, &x.0).py()
}

fn report_dict<'py>(py: Python<'py>, r: &CurvatureReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    d.set_item("rho", r.rho)?;
    d.set_item("u", r.u)?;
    d.set_item("v", r.v)?;
    d.set_item("R_analytic", r.r_analytic)?;
    d.set_item("R_numeric", r.r_numeric)?;
    d.set_item("rel_error", r.rel_error)?;
    d.set_item("near_singularity", r.near_singularity)?;
    Ok(d)
}

/// Closed-form scalar curvature of the ideal gas.
#[pyfunction]
#[pyo3(signature = (u, v, c_v, omega = "const:1"))]
fn ideal_gas_curvature(u: f64, v: f64, c_v: f64, omega: &str) -> PyResult<f64> {
    let w = registry::equilibrium_omega(omega, c_v).py()?;
    equilibrium::scalar_curvature_ideal_gas(u, v, c_v, &w).py()
}

#[pyfunction]
#[pyo3(signature = (u, v, c_v, omega = "const:1", h_fd = CURVATURE_STEP))]
fn curvature_report<'py>(
    py: Python<'py>,
    u: f64,
    v: f64,
    c_v: f64,
    omega: &str,
    h_fd: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let w = registry::equilibrium_omega(omega, c_v).py()?;
    report_dict(py, &equilibrium::curvature_report(u, v, c_v, &w, h_fd).py()?)
}

#[pyfunction]
#[pyo3(signature = (c_v, rho_min, rho_max, steps, omega = "const:1", v_fixed = 1.0))]
fn rho_scan<'py>(
    py: Python<'py>,
    c_v: f64,
    rho_min: f64,
    rho_max: f64,
    steps: usize,
    omega: &str,
    v_fixed: f64,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let w = registry::equilibrium_omega(omega, c_v).py()?;
    let scan = RhoScan {
        v_fixed,
        ..RhoScan::new(c_v, rho_min, rho_max, steps)
    };
    let rows = py.detach(|| equilibrium::rho_scan(&scan, &w)).py()?;
    rows.iter().map(|r| report_dict(py, r)).collect()
}

#[pymodule]
fn ctl(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPoint>()?;
    m.add_class::<PyOmega>()?;
    m.add_class::<PyExpression>()?;
    m.add_function(wrap_pyfunction!(eta, m)?)?;
    m.add_function(wrap_pyfunction!(reeb, m)?)?;
    m.add_function(wrap_pyfunction!(volume_form_coefficient, m)?)?;
    m.add_function(wrap_pyfunction!(discrete_legendre, m)?)?;
    m.add_function(wrap_pyfunction!(integrate_flow, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_orbit, m)?)?;
    m.add_function(wrap_pyfunction!(killing_residual, m)?)?;
    m.add_function(wrap_pyfunction!(isometry_residual, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_gas_curvature, m)?)?;
    m.add_function(wrap_pyfunction!(curvature_report, m)?)?;
    m.add_function(wrap_pyfunction!(rho_scan, m)?)?;
    Ok(())
}
