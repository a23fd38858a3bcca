//! Python bindings: normal forms, Hilbert series, braid images, rule export
//! and the verification suites, all over the built-in completed system.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use awskein::braidaction::{BraidAction, BraidGen};
use awskein::freealg::parse_expr;
use awskein::hilbert::{character_route, closed_form_h, enumerated_series};
use awskein::rewrite::{check_confluence, normal_form as nf, rules_to_json};
use awskein::skein::{build_generator_table, golden_system};
use awskein::uqsl2::verify_hopf;

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// Normal form of an expression such as `"S23*S12"`.
#[pyfunction]
fn normal_form(expr: &str) -> PyResult<String> {
    let table = build_generator_table();
    let x = parse_expr(expr, table).map_err(err)?;
    Ok(nf(&x, golden_system()).map_err(err)?.display(table))
}

/// Hilbert series coefficients up to `t^tmax`, as exact strings.
#[pyfunction]
#[pyo3(signature = (n, tmax, route = "closed"))]
fn hilbert(n: usize, tmax: usize, route: &str) -> PyResult<Vec<String>> {
    let s = match route {
        "closed" => closed_form_h(n, tmax).map_err(err)?,
        "character" => character_route(n, tmax),
        "enumerated" if n == 4 => enumerated_series(golden_system(), tmax),
        _ => return Err(PyValueError::new_err(format!("unsupported route {route} for n={n}"))),
    };
    Ok(s.coeffs().iter().map(|c| c.to_string()).collect())
}

/// Image of an expression under a braid word like `"1 2 -1"`.
#[pyfunction]
fn braid(word: &str, apply: &str) -> PyResult<String> {
    let table = build_generator_table();
    let w = BraidGen::parse_word(word).map_err(err)?;
    let x = parse_expr(apply, table).map_err(err)?;
    let act = BraidAction::new(golden_system()).map_err(err)?;
    let mut red = act.reducer();
    Ok(act.apply_word(&w, &x, &mut red).map_err(err)?.display(table))
}

/// Number of rules in the completed system.
#[pyfunction]
fn rule_count() -> usize {
    golden_system().len()
}

/// The completed system as JSON.
#[pyfunction]
fn export_rules() -> String {
    rules_to_json(golden_system())
}

/// `(ambiguities, failures)` for the completed system.
#[pyfunction]
fn confluence() -> PyResult<(usize, usize)> {
    let r = check_confluence(golden_system()).map_err(err)?;
    Ok((r.ambiguities, r.failures.len()))
}

/// `(checked, failures)` for the quantum-group axiom suite.
#[pyfunction]
fn hopf() -> (usize, Vec<String>) {
    let r = verify_hopf();
    (r.checked, r.failures)
}

#[pymodule]
fn awskein_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(hilbert, m)?)?;
    m.add_function(wrap_pyfunction!(braid, m)?)?;
    m.add_function(wrap_pyfunction!(rule_count, m)?)?;
    m.add_function(wrap_pyfunction!(export_rules, m)?)?;
    m.add_function(wrap_pyfunction!(confluence, m)?)?;
    m.add_function(wrap_pyfunction!(hopf, m)?)?;
    Ok(())
}
