//! Python bindings: the main operations exposed as thin functions over
//! JSON/string wire forms, so every value stays exact on the way out.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use serde_json::Value;

use localtr::cp1::NsPipeline;
use localtr::dictionary::{curve_from_r, r_from_curve, GiventalData};
use localtr::field::{rat_from_str, rat_to_string, FieldElement};
use localtr::graphsum::tr_graph_sum;
use localtr::jsonio;
use localtr::recursion::{required_order, tr_omega};

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_curve(curve_json: &str) -> PyResult<localtr::LocalCurveData> {
    let doc: Value = serde_json::from_str(curve_json).map_err(err)?;
    jsonio::curve_from_json(&doc).map_err(err)
}

/// Exact psi-class intersection number `<tau_{d_1}...tau_{d_n}>_g` as a
/// rational string.
#[pyfunction]
fn psi(g: u32, ds: Vec<u32>) -> PyResult<String> {
    localtr::psi::intersection_number(g, &ds)
        .map(|v| rat_to_string(&v))
        .map_err(err)
}

/// Topological recursion on a curve-spec JSON string; returns the
/// correlation form as canonical JSON.
#[pyfunction]
#[pyo3(signature = (curve_json, g, n, order = 0))]
fn omega(curve_json: &str, g: u32, n: usize, order: i64) -> PyResult<String> {
    let data = parse_curve(curve_json)?;
    let form = tr_omega(&data, g, n, order).map_err(err)?;
    Ok(jsonio::to_canonical_string(&jsonio::form_to_json(&form)))
}

/// Decorated-graph sum of a curve spec, as the `dxi`-basis expansion.
#[pyfunction]
fn graph_sum(curve_json: &str, g: u32, n: usize) -> PyResult<String> {
    let data = parse_curve(curve_json)?;
    let exp = tr_graph_sum(&data, g, n).map_err(err)?;
    Ok(jsonio::to_canonical_string(&jsonio::expansion_to_json(
        &exp,
    )))
}

/// Stationary Gromov-Witten invariant `<prod_j tau_{a_j}(omega)>_g` of CP1,
/// via the Norbury-Scott spectral curve, as a rational string.
#[pyfunction]
fn stationary(g: u32, a: Vec<i64>) -> PyResult<String> {
    let mut pipeline = NsPipeline::new(g, a.len()).map_err(err)?;
    pipeline
        .stationary(g, &a)
        .map(|v| rat_to_string(&v))
        .map_err(err)
}

/// The same invariant from the independent partition-sum oracle.
#[pyfunction]
fn oracle(g: u32, a: Vec<i64>) -> PyResult<String> {
    localtr::oracle::op_oracle(g, &a)
        .map(|v| rat_to_string(&v))
        .map_err(err)
}

/// Build the local spectral curve of an R-series JSON document;
/// `sqrt_delta` entries are rational strings, one per branch.
#[pyfunction]
fn dictionary_to_curve(r_json: &str, sqrt_delta: Vec<String>) -> PyResult<String> {
    let doc: Value = serde_json::from_str(r_json).map_err(err)?;
    let r = jsonio::r_series_from_json(&doc).map_err(err)?;
    let roots = sqrt_delta
        .iter()
        .map(|p| rat_from_str(p).map(FieldElement::from_rat))
        .collect::<localtr::Result<Vec<_>>>()
        .map_err(err)?;
    let gd = GiventalData::new(r, roots).map_err(err)?;
    let curve = curve_from_r(&gd).map_err(err)?;
    Ok(jsonio::to_canonical_string(&jsonio::curve_to_json(&curve)))
}

/// Read the R series back off a curve-spec JSON document.
#[pyfunction]
fn dictionary_from_curve(curve_json: &str) -> PyResult<String> {
    let data = parse_curve(curve_json)?;
    let r = r_from_curve(&data).map_err(err)?;
    Ok(jsonio::to_canonical_string(&jsonio::r_series_to_json(&r)))
}

/// Airy curve spec at the order needed for `omega_{g,n}` to the given
/// regular order.
#[pyfunction]
#[pyo3(signature = (g, n, order = 0))]
fn airy_curve(g: u32, n: usize, order: i64) -> PyResult<String> {
    let data = localtr::LocalCurveData::airy(required_order(g, n, order));
    Ok(jsonio::to_canonical_string(&jsonio::curve_to_json(&data)))
}

/// The Norbury-Scott curve's local data to the given order.
#[pyfunction]
fn ns_curve(order: i64) -> PyResult<String> {
    let data = localtr::cp1::ns_curve(order).map_err(err)?;
    Ok(jsonio::to_canonical_string(&jsonio::curve_to_json(&data)))
}

/// Run a named check suite; returns `(passed, report_lines)`.
#[pyfunction]
#[pyo3(signature = (suite, seed = 0x1ea_f00d))]
fn run_check(suite: &str, seed: u64) -> PyResult<(bool, Vec<String>)> {
    match localtr::check::run_suite(suite, seed) {
        Some(results) => Ok((
            results.iter().all(|r| r.passed),
            results.iter().map(|r| r.line()).collect(),
        )),
        None => Err(PyValueError::new_err(format!("unknown suite {suite:?}"))),
    }
}

#[pymodule]
fn localtr_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(psi, m)?)?;
    m.add_function(wrap_pyfunction!(omega, m)?)?;
    m.add_function(wrap_pyfunction!(graph_sum, m)?)?;
    m.add_function(wrap_pyfunction!(stationary, m)?)?;
    m.add_function(wrap_pyfunction!(oracle, m)?)?;
    m.add_function(wrap_pyfunction!(dictionary_to_curve, m)?)?;
    m.add_function(wrap_pyfunction!(dictionary_from_curve, m)?)?;
    m.add_function(wrap_pyfunction!(airy_curve, m)?)?;
    m.add_function(wrap_pyfunction!(ns_curve, m)?)?;
    m.add_function(wrap_pyfunction!(run_check, m)?)?;
    Ok(())
}
