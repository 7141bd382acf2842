//! Python bindings. Structured results cross the boundary as JSON strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::{json, Value};

use xi_core::pseudocover::verify::verify_bundle as verify_bundle_value;
use xi_core::pseudocover::{self as pc, BuildConfig, TreeAddress};
use xi_core::rational::format_q;
use xi_core::report::Report;
use xi_core::riesz::{self, CoefficientGroup, ElementData, Gamma, InterpolationProblem};
use xi_core::suite;
use xi_core::topology::XiWindow;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_json(v: &impl serde::Serialize) -> PyResult<String> {
    serde_json::to_string(v).map_err(err)
}

fn delta(s: &str) -> PyResult<CoefficientGroup> {
    CoefficientGroup::parse(s).ok_or_else(|| err(format!("unknown coefficient group {s:?}")))
}

/// Axiom report for the window `[lo, hi]` of Ξ(ℤ).
#[pyfunction]
fn xi_check(lo: i64, hi: i64) -> PyResult<String> {
    let w = XiWindow::integer_range(lo, hi).map_err(err)?;
    let checks = suite::xi_window_checks(&w).map_err(err)?;
    to_json(&Report::new(json!({"window": [lo, hi]}), checks, 0))
}

/// Interpolant of `{"rho": [a, b], "sigma": [c, d]}`.
#[pyfunction]
#[pyo3(signature = (problem, delta_name = "Q"))]
fn riesz_interpolate(problem: &str, delta_name: &str) -> PyResult<String> {
    let v: Value = serde_json::from_str(problem).map_err(err)?;
    let parse = |k: &str, i: usize| serde_json::from_value::<ElementData>(v[k][i].clone()).map_err(err);
    let data = [parse("rho", 0)?, parse("rho", 1)?, parse("sigma", 0)?, parse("sigma", 1)?];
    let gamma = Gamma::on_integers(delta(delta_name)?);
    let p = InterpolationProblem::from_data(&gamma, &data).map_err(err)?;
    let r = riesz::riesz_interpolate(&p).map_err(err)?;
    to_json(&r)
}

#[pyfunction]
#[pyo3(signature = (delta_name = "Z", max_r = 5))]
fn riesz_counterexample(delta_name: &str, max_r: i64) -> PyResult<String> {
    let checks = suite::riesz_counterexample(delta(delta_name)?, max_r).map_err(err)?;
    to_json(&Report::new(json!({"delta": delta_name, "max_r": max_r}), checks, 0))
}

/// `f` at a vertex given by sign masks, as `"p/q"` strings.
#[pyfunction]
fn f_eval(n: usize, word: Vec<u32>) -> PyResult<Vec<String>> {
    let v = pc::f_eval(n, &TreeAddress::vertex(word)).map_err(err)?;
    Ok(v.iter().map(format_q).collect())
}

/// Bundle JSON for `h` at the given depth.
#[pyfunction]
#[pyo3(signature = (n, depth, seed = 0, denominator = 1024, budget = 64))]
fn build_h(n: usize, depth: usize, seed: u64, denominator: u64, budget: usize) -> PyResult<String> {
    let cfg = BuildConfig {
        n,
        depth,
        seed,
        denominator,
        budget,
    };
    to_json(&pc::build_h(&cfg).map_err(err)?)
}

/// Independent verification of bundle JSON; returns the failure list.
#[pyfunction]
fn verify_bundle(bundle: &str) -> PyResult<(bool, Vec<String>)> {
    let v: Value = serde_json::from_str(bundle).map_err(err)?;
    let rep = verify_bundle_value(&v);
    Ok((rep.pass(), rep.failures))
}

#[pymodule]
fn xi_workbench(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_function(wrap_pyfunction!(xi_check, m)?)?;
    m.add_function(wrap_pyfunction!(riesz_interpolate, m)?)?;
    m.add_function(wrap_pyfunction!(riesz_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(f_eval, m)?)?;
    m.add_function(wrap_pyfunction!(build_h, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bundle, m)?)?;
    Ok(())
}
