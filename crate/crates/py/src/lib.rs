//! Python bindings.

use hfgraph_core::document::parse_str;
use hfgraph_core::generate::generate_document;
use hfgraph_core::hfg::{Channel, Hfpr};
use hfgraph_core::report::{run_report, to_json};
use hfgraph_core::similarity::{ClosenessMode, Ideal};
use hfgraph_core::spectral::{symmetric_eigenvalues, SquareMatrix};
use hfgraph_core::survey::run_survey;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn channel(name: &str) -> PyResult<Channel> {
    match name {
        "mu" | "membership" => Ok(Channel::Membership),
        "gamma" | "nonmembership" => Ok(Channel::Nonmembership),
        "beta" | "hesitancy" => Ok(Channel::Hesitancy),
        other => Err(value_error(format!("unknown channel `{other}`"))),
    }
}

fn closeness_mode(name: &str) -> PyResult<ClosenessMode> {
    match name {
        "relative" => Ok(ClosenessMode::Relative),
        "ratio" => Ok(ClosenessMode::Ratio),
        other => Err(value_error(format!("unknown closeness mode `{other}`"))),
    }
}

/// Hesitancy fuzzy preference relation: an n x n matrix of
/// `(mu, gamma, beta)` triples with a zero diagonal.
#[pyclass(name = "Hfpr", module = "hfgraph", frozen)]
struct PyHfpr {
    inner: Hfpr,
}

#[pymethods]
impl PyHfpr {
    #[new]
    #[pyo3(signature = (entries, labels=None, vertex_attrs=None, allow_asymmetric=false))]
    fn new(
        entries: Vec<Vec<[f64; 3]>>,
        labels: Option<Vec<String>>,
        vertex_attrs: Option<Vec<[f64; 2]>>,
        allow_asymmetric: bool,
    ) -> PyResult<Self> {
        let mut b = Hfpr::builder(entries).allow_asymmetric(allow_asymmetric);
        if let Some(l) = labels {
            b = b.labels(l);
        }
        if let Some(v) = vertex_attrs {
            b = b.vertex_attrs(v);
        }
        Ok(Self {
            inner: b.build().map_err(value_error)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<(f64, f64, f64)> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(value_error(format!("index ({i}, {j}) outside a {n} x {n} relation")));
        }
        let t = self.inner.entry(i, j);
        Ok((t.mu(), t.gamma(), t.beta()))
    }

    fn to_rows(&self) -> Vec<Vec<[f64; 3]>> {
        self.inner.to_rows()
    }

    /// One channel (`"mu"`, `"gamma"` or `"beta"`) as a list of rows.
    fn channel(&self, name: &str) -> PyResult<Vec<Vec<f64>>> {
        let c = self.inner.channel(channel(name)?);
        Ok(c.values().chunks(c.n().max(1)).map(<[f64]>::to_vec).collect())
    }

    fn energy(&self) -> PyResult<(f64, f64, f64)> {
        energy(self)
    }

    fn laplacian_energy(&self) -> PyResult<(f64, f64, f64)> {
        laplacian_energy(self)
    }

    fn __repr__(&self) -> String {
        format!("Hfpr(n={}, labels={:?})", self.inner.n(), self.inner.labels())
    }
}

#[pyfunction]
fn energy(h: &PyHfpr) -> PyResult<(f64, f64, f64)> {
    let e = hfgraph_core::spectral::energy(&h.inner).map_err(value_error)?;
    Ok((e.mu, e.gamma, e.beta))
}

#[pyfunction]
fn laplacian_energy(h: &PyHfpr) -> PyResult<(f64, f64, f64)> {
    let e = hfgraph_core::spectral::laplacian_energy(&h.inner).map_err(value_error)?;
    Ok((e.mu, e.gamma, e.beta))
}

/// Eigenvalues of a symmetric matrix, descending.
#[pyfunction]
fn eigenvalues(matrix: Vec<Vec<f64>>) -> PyResult<Vec<f64>> {
    if matrix.iter().any(|r| r.len() != matrix.len()) {
        return Err(value_error("matrix must be square"));
    }
    let m = SquareMatrix::from_rows(&matrix);
    Ok(symmetric_eigenvalues(&m).map_err(value_error)?.eigenvalues().to_vec())
}

#[pyfunction]
fn pair_similarity(a: &PyHfpr, b: &PyHfpr) -> PyResult<f64> {
    hfgraph_core::similarity::pair_similarity(&a.inner, &b.inner).map_err(value_error)
}

/// Similarity of row `i` to the `"positive"` or `"negative"` ideal.
#[pyfunction]
#[pyo3(signature = (h, i, ideal="positive"))]
fn ideal_similarity(h: &PyHfpr, i: usize, ideal: &str) -> PyResult<f64> {
    let ideal = match ideal {
        "positive" => Ideal::Positive,
        "negative" => Ideal::Negative,
        other => return Err(value_error(format!("unknown ideal `{other}`"))),
    };
    hfgraph_core::similarity::ideal_similarity(&h.inner, i, ideal).map_err(value_error)
}

#[pyfunction]
#[pyo3(signature = (s_plus, s_minus, mode="relative"))]
fn closeness(s_plus: f64, s_minus: f64, mode: &str) -> PyResult<f64> {
    hfgraph_core::similarity::closeness(s_plus, s_minus, closeness_mode(mode)?).map_err(value_error)
}

/// Runs the ranking pipeline on a JSON input document and returns the JSON
/// report. `override_similarity=True` injects the published pair
/// similarities shipped with the document.
#[pyfunction]
#[pyo3(signature = (document, override_similarity=false))]
fn run(document: &str, override_similarity: bool) -> PyResult<String> {
    let doc = parse_str(document).map_err(value_error)?;
    let mut config = doc.pipeline_config().map_err(value_error)?;
    if override_similarity {
        config.overrides.pair_similarity = Some(
            doc.published_pair_similarity()
                .map_err(value_error)?
                .ok_or_else(|| value_error("document ships no published pair similarities"))?,
        );
    }
    Ok(to_json(&run_report(&doc, &config).map_err(value_error)?))
}

/// Random input document as JSON text.
#[pyfunction]
#[pyo3(signature = (seed, n=4, experts=3))]
fn generate(seed: u64, n: usize, experts: usize) -> PyResult<String> {
    Ok(hfgraph_core::document::emit(&generate_document(seed, n, experts).map_err(value_error)?))
}

/// Number of bound and identity checks and the number violated.
#[pyfunction]
#[pyo3(signature = (seed=42, count=1000, n_min=3, n_max=8))]
fn verify_bounds(seed: u64, count: usize, n_min: usize, n_max: usize) -> PyResult<(usize, usize)> {
    let s = run_survey(seed, count, n_min..=n_max).map_err(value_error)?;
    Ok((s.rows.len(), s.violation_count()))
}

/// The bundled smartphone scenario as JSON text.
#[pyfunction]
fn smartphone_json() -> &'static str {
    hfgraph_core::fixtures::SMARTPHONE_JSON
}

#[pymodule]
fn hfgraph(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyHfpr>()?;
    m.add_function(wrap_pyfunction!(energy, m)?)?;
    m.add_function(wrap_pyfunction!(laplacian_energy, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(pair_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(ideal_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(closeness, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    m.add_function(wrap_pyfunction!(generate, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(smartphone_json, m)?)?;
    Ok(())
}
