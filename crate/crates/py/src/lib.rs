//! Python bindings. Reports come back as plain dicts.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde::Serialize;

use psh_forge::certify::{certify_candidate, empirical_threshold, Family};
use psh_forge::levi::{build_candidate, leading_minors, PshCandidate};
use psh_forge::polyalg::serial::real_from_json_infer;
use psh_forge::polyalg::{BivariatePoly, RationalPoly};
use psh_forge::rational::{fmt_q, parse_q};
use psh_forge::retract::{flow, glue, retraction_check, FlowOptions, GluedField};
use psh_forge::subspace::{closed_form_distance, real_distance_form, JordanSpec};
use psh_forge::suite::{run_suite, SuiteConfig, SuiteSizes};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_py<'py>(py: Python<'py>, value: &impl Serialize) -> PyResult<Bound<'py, PyAny>> {
    let text = serde_json::to_string(value).map_err(err)?;
    py.import("json")?.call_method1("loads", (text,))
}

fn parse_poly(name: &str) -> PyResult<BivariatePoly> {
    match name {
        "p21" => Ok(BivariatePoly::p21()),
        "p315" => Ok(BivariatePoly::p315()),
        text if text.trim_start().starts_with('[') => {
            BivariatePoly::new(real_from_json_infer(text).map_err(err)?).map_err(err)
        }
        other => Err(err(format!("unknown polynomial {other}; use p21, p315 or JSON term records"))),
    }
}

fn parse_all(values: &[String]) -> PyResult<Vec<psh_forge::rational::Q>> {
    values.iter().map(|v| parse_q(v).map_err(err)).collect()
}

/// Real Jordan data of `A`. Rationals are passed as strings such as `"1/4"`.
#[pyclass(name = "JordanSpec", module = "psh_forge_py")]
struct PyJordanSpec {
    inner: JordanSpec,
}

#[pymethods]
impl PyJordanSpec {
    #[staticmethod]
    fn diagonal(values: Vec<String>) -> PyResult<Self> {
        Ok(Self { inner: JordanSpec::diagonal(&parse_all(&values)?) })
    }

    #[staticmethod]
    fn uniform(n: usize, a: &str) -> PyResult<Self> {
        Ok(Self { inner: JordanSpec::uniform(n, &parse_q(a).map_err(err)?) })
    }

    #[staticmethod]
    fn complex_pair(b: &str, c: &str) -> PyResult<Self> {
        Ok(Self { inner: JordanSpec::complex_pair(parse_q(b).map_err(err)?, parse_q(c).map_err(err)?) })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Self { inner: JordanSpec::from_json(text).map_err(err)? })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n
    }

    fn is_semisimple(&self) -> bool {
        self.inner.is_semisimple()
    }

    /// `(d_M(w), d_N(w))` for `w = (x₁..xₙ, y₁..yₙ)`.
    fn distances(&self, point: Vec<f64>) -> PyResult<(f64, f64)> {
        if point.len() != 2 * self.inner.n {
            return Err(err(format!("point has {} coordinates, expected {}", point.len(), 2 * self.inner.n)));
        }
        let m = closed_form_distance(&self.inner).map_err(err)?;
        let n = real_distance_form(self.inner.n);
        Ok((m.eval_f64(&point), n.eval_f64(&point)))
    }

    fn __repr__(&self) -> String {
        format!("JordanSpec({})", self.inner.to_json())
    }
}

/// `ρ = P(d_M, d_N)` with its exact symbolic data.
#[pyclass(name = "Candidate", module = "psh_forge_py")]
struct PyCandidate {
    inner: PshCandidate,
    minors: Option<Vec<RationalPoly>>,
}

fn eval(p: &RationalPoly, point: &[f64]) -> PyResult<f64> {
    p.eval_f64(point).map_err(err)
}

#[pymethods]
impl PyCandidate {
    #[new]
    #[pyo3(signature = (spec, poly = "p21"))]
    fn new(spec: &PyJordanSpec, poly: &str) -> PyResult<Self> {
        let inner = build_candidate(&spec.inner, &parse_poly(poly)?).map_err(err)?;
        Ok(Self { inner, minors: None })
    }

    fn rho(&self, point: Vec<f64>) -> PyResult<f64> {
        eval(&self.inner.rho, &point)
    }

    fn rho_string(&self) -> String {
        let names = self.inner.names();
        let names: Vec<&str> = names.iter().map(String::as_str).collect();
        self.inner.rho.display_with(&names)
    }

    /// Leading principal minors of the complex Hessian at `point`.
    fn minors_at(&mut self, point: Vec<f64>) -> PyResult<Vec<f64>> {
        if self.minors.is_none() {
            self.minors = Some(leading_minors(&self.inner).map_err(err)?);
        }
        self.minors.as_ref().unwrap().iter().map(|m| eval(m, &point)).collect()
    }

    #[pyo3(signature = (samples, seed))]
    fn certify<'py>(&self, py: Python<'py>, samples: usize, seed: u64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &certify_candidate(&self.inner, samples, seed).map_err(err)?)
    }

    #[pyo3(signature = (radius = 1.0, epsilon = 0.05, cutoff_order = 2))]
    fn glue(&self, radius: f64, epsilon: f64, cutoff_order: u32) -> PyResult<PyField> {
        Ok(PyField { inner: glue(&self.inner, radius, epsilon, cutoff_order).map_err(err)? })
    }
}

/// Glued field on `B_R ∪ T_ε`.
#[pyclass(name = "GluedField", module = "psh_forge_py")]
struct PyField {
    inner: GluedField,
}

#[pymethods]
impl PyField {
    fn value(&self, point: Vec<f64>) -> Option<f64> {
        self.inner.value(&point)
    }

    fn gradient(&self, point: Vec<f64>) -> Option<Vec<f64>> {
        self.inner.gradient(&point)
    }

    #[pyo3(signature = (start, tol = 1e-6, max_steps = 100_000))]
    fn flow<'py>(&self, py: Python<'py>, start: Vec<f64>, tol: f64, max_steps: usize) -> PyResult<Bound<'py, PyAny>> {
        let opts = FlowOptions { tol, max_steps, ..FlowOptions::default() };
        to_py(py, &flow(&self.inner, &start, &opts).map_err(err)?)
    }

    #[pyo3(signature = (starts, seed, tol = 1e-6))]
    fn retraction_check<'py>(&self, py: Python<'py>, starts: usize, seed: u64, tol: f64) -> PyResult<Bound<'py, PyAny>> {
        to_py(py, &retraction_check(&self.inner, starts, seed, tol).map_err(err)?)
    }
}

#[pyfunction]
#[pyo3(signature = (family, n, poly, samples, seed, tol = 1e-3))]
fn threshold<'py>(
    py: Python<'py>,
    family: &str,
    n: usize,
    poly: &str,
    samples: usize,
    seed: u64,
    tol: f64,
) -> PyResult<Bound<'py, PyAny>> {
    let family: Family = serde_json::from_value(serde_json::Value::String(family.into())).map_err(err)?;
    to_py(py, &empirical_threshold(family, n, &parse_poly(poly)?, samples, seed, tol).map_err(err)?)
}

/// Exact identity suite. `quick` shrinks every group to a smoke-test size.
#[pyfunction]
#[pyo3(signature = (seed = 1, only = None, quick = false))]
fn verify<'py>(py: Python<'py>, seed: u64, only: Option<String>, quick: bool) -> PyResult<Bound<'py, PyAny>> {
    let sizes = if quick { SuiteSizes::quick() } else { SuiteSizes::default() };
    let cfg = SuiteConfig { seed, only, sizes, fault: None };
    to_py(py, &run_suite(&cfg).map_err(err)?)
}

#[pyfunction]
fn normalize_rational(text: &str) -> PyResult<String> {
    Ok(fmt_q(&parse_q(text).map_err(err)?))
}

#[pymodule]
fn psh_forge_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyJordanSpec>()?;
    m.add_class::<PyCandidate>()?;
    m.add_class::<PyField>()?;
    m.add_function(wrap_pyfunction!(threshold, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_rational, m)?)?;
    Ok(())
}
