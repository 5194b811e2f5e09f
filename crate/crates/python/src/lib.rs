//! Python bindings. Fans use the same JSON document as the command line;
//! classes are `{"free": [...], "torsion": [...]}` strings.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use torex_cli::figure::{build_figure, render_svg};
use torex_cli::input::FanDocument;
use torex_core::cohomology::CohomologyEngine;
use torex_core::collections::{build_collection_with, verify_strong_exceptional};
use torex_core::{PicClass, PicardGroup, StackyFan};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn load(fan_json: &str) -> PyResult<StackyFan> {
    let doc = FanDocument::parse(fan_json, "<fan>").map_err(err)?;
    Ok(doc.to_fan().map_err(err)?.0)
}

fn class(pic: &PicardGroup, json: &str) -> PyResult<PicClass> {
    let c: PicClass = serde_json::from_str(json).map_err(err)?;
    pic.check_class(&c).map_err(err)?;
    Ok(c)
}

fn engine(fan: &StackyFan) -> PyResult<CohomologyEngine> {
    let pic = PicardGroup::new(fan).map_err(err)?;
    CohomologyEngine::new(&pic).map_err(err)
}

#[pyfunction]
fn version() -> &'static str {
    torex_core::VERSION
}

/// "fano", "nef_fano" or "neither".
#[pyfunction]
fn classify(fan_json: &str) -> PyResult<String> {
    let c = load(fan_json)?.classify().map_err(err)?;
    Ok(serde_json::to_value(c).map_err(err)?.as_str().unwrap_or_default().to_string())
}

/// `[h^0, ..., h^d]`.
#[pyfunction]
fn cohomology(fan_json: &str, class_json: &str) -> PyResult<Vec<usize>> {
    let e = engine(&load(fan_json)?)?;
    let c = class(e.pic(), class_json)?;
    Ok(e.cohomology(&c).map_err(err)?.dims)
}

#[pyfunction]
fn is_acyclic(fan_json: &str, class_json: &str) -> PyResult<bool> {
    let e = engine(&load(fan_json)?)?;
    let c = class(e.pic(), class_json)?;
    e.is_acyclic(&c).map_err(err)
}

#[pyfunction]
fn is_strongly_acyclic(fan_json: &str, class_json: &str) -> PyResult<bool> {
    let e = engine(&load(fan_json)?)?;
    let c = class(e.pic(), class_json)?;
    Ok(e.is_strongly_acyclic_class(&c))
}

/// The collection's classes as a JSON array.
#[pyfunction]
#[pyo3(signature = (fan_json, seed = 0))]
fn collection(fan_json: &str, seed: u64) -> PyResult<String> {
    let pic = PicardGroup::new(&load(fan_json)?).map_err(err)?;
    let c = build_collection_with(&pic, seed).map_err(err)?;
    serde_json::to_string(&c.classes).map_err(err)
}

/// Full-cohomology check of a JSON array of classes, in order.
#[pyfunction]
fn verify(fan_json: &str, classes_json: &str) -> PyResult<bool> {
    let e = engine(&load(fan_json)?)?;
    let classes: Vec<PicClass> = serde_json::from_str(classes_json).map_err(err)?;
    for c in &classes {
        e.pic().check_class(c).map_err(err)?;
    }
    Ok(verify_strong_exceptional(&e, &classes).map_err(err)?.passed)
}

#[pyfunction]
#[pyo3(signature = (fan_json, seed = 0))]
fn figure_svg(fan_json: &str, seed: u64) -> PyResult<String> {
    let e = engine(&load(fan_json)?)?;
    let c = build_collection_with(e.pic(), seed).map_err(err)?;
    let fig = build_figure(&e, &c, None).map_err(err)?;
    Ok(render_svg(&fig))
}

#[pymodule]
fn torex(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(version, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(cohomology, m)?)?;
    m.add_function(wrap_pyfunction!(is_acyclic, m)?)?;
    m.add_function(wrap_pyfunction!(is_strongly_acyclic, m)?)?;
    m.add_function(wrap_pyfunction!(collection, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(figure_svg, m)?)?;
    Ok(())
}
