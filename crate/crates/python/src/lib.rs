//! Python bindings. Models are opaque `Model` objects; feature files,
//! reports and skeletons cross the boundary as text or JSON strings.

use flowspec::iso::isomorphic;
use flowspec::skeleton::skeletons_json;
use flowspec::xml::serialize_xml;
use flowspec::{
    check_suite, classify, emit_feature, emit_skeletons, format_feature, infer_model, lint, parse_dsl, parse_feature,
    parse_xml, render_dot, serialize_dsl, validate, InferenceHints, Mode, ProcessModel, Style,
};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn mode(name: &str) -> PyResult<Mode> {
    match name {
        "paper-exact" => Ok(Mode::PaperExact),
        "strict" => Ok(Mode::Strict),
        other => Err(value_err(format!("unknown mode `{other}`"))),
    }
}

fn style(name: &str) -> PyResult<Style> {
    match name {
        "upper" => Ok(Style::PaperUpper),
        "gherkin" => Ok(Style::Gherkin),
        other => Err(value_err(format!("unknown style `{other}`"))),
    }
}

#[pyclass(name = "Model", module = "flowspec_py", frozen)]
struct PyModel {
    inner: ProcessModel,
}

#[pymethods]
impl PyModel {
    #[staticmethod]
    fn from_dsl(text: &str) -> PyResult<Self> {
        parse_dsl(text).map(|inner| PyModel { inner }).map_err(value_err)
    }

    #[staticmethod]
    fn from_xml(text: &str) -> PyResult<Self> {
        parse_xml(text).map(|inner| PyModel { inner }).map_err(value_err)
    }

    #[getter]
    fn title(&self) -> String {
        self.inner.title.clone()
    }

    #[getter]
    fn states(&self) -> Vec<String> {
        self.inner.state_paths().into_iter().map(|(p, _)| p.to_string()).collect()
    }

    #[getter]
    fn transitions(&self) -> Vec<String> {
        self.inner.transitions.iter().map(|t| t.id.to_string()).collect()
    }

    fn to_dsl(&self) -> String {
        serialize_dsl(&self.inner)
    }

    fn to_xml(&self) -> String {
        serialize_xml(&self.inner)
    }

    fn to_dot(&self) -> String {
        render_dot(&self.inner)
    }

    /// Validation and lint findings as display strings.
    fn diagnostics(&self) -> Vec<String> {
        let mut d = validate(&self.inner);
        d.extend(lint(&self.inner));
        d.iter().map(ToString::to_string).collect()
    }

    /// Transition id to pattern name.
    fn patterns(&self) -> Vec<(String, String)> {
        classify(&self.inner)
            .transitions
            .iter()
            .map(|p| (p.transition_id.to_string(), p.kind.to_string()))
            .collect()
    }

    #[pyo3(signature = (mode="paper-exact", style="upper"))]
    fn emit(&self, mode: &str, style: &str) -> PyResult<String> {
        let doc = emit_feature(&self.inner, self::mode(mode)?).map_err(value_err)?;
        Ok(format_feature(&doc, self::style(style)?))
    }

    /// Replays a feature file and returns the JSON suite report.
    #[pyo3(signature = (feature, mode="paper-exact"))]
    fn check(&self, feature: &str, mode: &str) -> PyResult<String> {
        let doc = parse_feature(feature).map_err(value_err)?;
        let report = check_suite(&self.inner, &doc, self::mode(mode)?);
        serde_json::to_string(&report).map_err(value_err)
    }

    fn isomorphic(&self, other: &PyModel) -> bool {
        isomorphic(&self.inner, &other.inner)
    }

    fn __repr__(&self) -> String {
        format!("Model({:?}, {} transitions)", self.inner.title, self.inner.transitions.len())
    }
}

/// Infers a model from feature text; returns it with diagnostic strings.
#[pyfunction]
fn infer(feature: &str) -> PyResult<(PyModel, Vec<String>)> {
    let doc = parse_feature(feature).map_err(value_err)?;
    let (inner, diags) = infer_model(&doc, &InferenceHints::default());
    Ok((PyModel { inner }, diags.iter().map(ToString::to_string).collect()))
}

/// Step-definition skeletons of a feature file as a JSON array.
#[pyfunction]
fn skeletons(feature: &str) -> PyResult<String> {
    let doc = parse_feature(feature).map_err(value_err)?;
    emit_skeletons(&doc).map(|s| skeletons_json(&s)).map_err(value_err)
}

#[pymodule]
fn flowspec_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyModel>()?;
    m.add_function(wrap_pyfunction!(infer, m)?)?;
    m.add_function(wrap_pyfunction!(skeletons, m)?)?;
    Ok(())
}
