//! Python bindings for `anchorlink`.

use std::path::PathBuf;

use anchorlink::anchors::{build_anchor_map, build_eval_samples, build_title_map, AnchorMap};
use anchorlink::cli::open_dump;
use anchorlink::eval::{self, EvalConfig};
use anchorlink::graph::{network_stats, personalized_pagerank, topk_subgraph, PprParams};
use anchorlink::ingest::{build_dataset, parse_dump};
use anchorlink::predictors::{atilp_features, score_lsa, LsaScorer, Method, Mode};
use anchorlink::synthetic::{synthetic_dataset, SyntheticParams};
use anchorlink::text::{self, SvdOptions};
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyIndexError};
use pyo3::prelude::*;
use pyo3::types::PyModule;

create_exception!(anchorlink_py, AnchorlinkError, PyException);

fn err(e: anchorlink::Error) -> PyErr {
    AnchorlinkError::new_err(e.to_string())
}

/// Converts any serializable value into plain Python objects via JSON.
fn to_py<'py>(py: Python<'py>, value: &impl serde::Serialize) -> PyResult<Bound<'py, PyAny>> {
    let s = serde_json::to_string(value).map_err(|e| AnchorlinkError::new_err(e.to_string()))?;
    PyModule::import(py, "json")?.call_method1("loads", (s,))
}

fn check_id(ds: &anchorlink::Dataset, id: usize) -> PyResult<()> {
    if id < ds.articles.len() {
        Ok(())
    } else {
        Err(PyIndexError::new_err(format!("article id {id} out of range ({} articles)", ds.articles.len())))
    }
}

/// Articles plus their anchor-annotated hyperlink network.
#[pyclass(name = "Dataset", module = "anchorlink_py")]
pub struct PyDataset {
    inner: anchorlink::Dataset,
}

#[pymethods]
impl PyDataset {
    /// Reads a dataset directory (`articles.jsonl` + `links.tsv`).
    #[staticmethod]
    fn read(path: PathBuf) -> PyResult<Self> {
        Ok(PyDataset {
            inner: anchorlink::Dataset::read(&path).map_err(err)?,
        })
    }

    /// Parses a MediaWiki XML dump (plain, .bz2 or .gz). Returns the dataset
    /// and the ingest report as a dict.
    #[staticmethod]
    fn ingest<'py>(py: Python<'py>, dump: PathBuf) -> PyResult<(Self, Bound<'py, PyAny>)> {
        let (ds, report) = build_dataset(parse_dump(open_dump(&dump).map_err(err)?)).map_err(err)?;
        Ok((PyDataset { inner: ds }, to_py(py, &report)?))
    }

    /// Parses dump XML held in memory.
    #[staticmethod]
    fn from_xml(xml: &str) -> PyResult<Self> {
        let (ds, _) = build_dataset(parse_dump(xml.as_bytes())).map_err(err)?;
        Ok(PyDataset { inner: ds })
    }

    /// Generated corpus with planted topics and ambiguous names.
    #[staticmethod]
    #[pyo3(signature = (documents = 200, topics = 10, seed = 0))]
    fn synthetic(documents: usize, topics: usize, seed: u64) -> PyResult<(Self, Vec<usize>)> {
        let params = SyntheticParams {
            documents,
            topics,
            seed,
            ..SyntheticParams::default()
        };
        let (ds, topics, _) = synthetic_dataset(&params).map_err(err)?;
        Ok((PyDataset { inner: ds }, topics))
    }

    fn write(&self, path: PathBuf) -> PyResult<()> {
        self.inner.write(&path).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.articles.len()
    }

    fn __repr__(&self) -> String {
        format!("Dataset(articles={}, links={})", self.inner.articles.len(), self.inner.network.edge_count())
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.network.edge_count()
    }

    fn titles(&self) -> Vec<String> {
        self.inner.titles()
    }

    fn text(&self, id: usize) -> PyResult<String> {
        check_id(&self.inner, id)?;
        Ok(self.inner.articles[id].text.clone())
    }

    fn aliases(&self, id: usize) -> PyResult<Vec<String>> {
        check_id(&self.inner, id)?;
        Ok(self.inner.articles[id].aliases.clone())
    }

    /// `(source, target, anchors)` for every link.
    fn edges(&self) -> Vec<(usize, usize, Vec<String>)> {
        self.inner.network.edges().map(|(s, e)| (s, e.target, e.anchors.clone())).collect()
    }

    fn has_edge(&self, source: usize, target: usize) -> bool {
        self.inner.network.has_edge(source, target)
    }

    /// Id of a title or redirect alias, or None.
    fn resolve_title(&self, title: &str) -> Option<usize> {
        self.inner.resolve_title(title)
    }

    #[pyo3(signature = (seed, damping = 0.85))]
    fn pagerank(&self, seed: usize, damping: f64) -> PyResult<Vec<f64>> {
        check_id(&self.inner, seed)?;
        let params = PprParams {
            damping,
            ..PprParams::default()
        };
        Ok(personalized_pagerank(&self.inner.network, seed, &params).map_err(err)?.scores)
    }

    /// Top-`k` PageRank neighborhood of `seed` (a title, alias or id). Returns
    /// the induced dataset and the kept original ids.
    #[pyo3(signature = (seed, k = 1000, damping = 0.85))]
    fn subgraph(&self, seed: &Bound<'_, PyAny>, k: usize, damping: f64) -> PyResult<(Self, Vec<usize>)> {
        let id = match seed.extract::<usize>() {
            Ok(id) => id,
            Err(_) => {
                let title: String = seed.extract()?;
                self.inner.resolve_title(&title).ok_or_else(|| {
                    AnchorlinkError::new_err(format!(
                        "no article titled {title:?}; did you mean: {}",
                        self.inner.near_misses(&title, 5).join(", ")
                    ))
                })?
            }
        };
        check_id(&self.inner, id)?;
        let params = PprParams {
            damping,
            ..PprParams::default()
        };
        let scores = personalized_pagerank(&self.inner.network, id, &params).map_err(err)?;
        let sub = topk_subgraph(&self.inner.network, &scores, &self.inner.titles(), k).map_err(err)?;
        Ok((PyDataset { inner: self.inner.subgraph(&sub) }, sub.kept))
    }

    /// Network and candidate-sample statistics as a dict.
    fn stats<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyAny>> {
        let map = build_anchor_map(&self.inner.network).map_err(err)?;
        let samples = build_eval_samples(&self.inner.network, &map, &self.inner.articles);
        to_py(py, &network_stats(&self.inner.network, &self.inner.articles, Some(&samples)))
    }
}

/// Map from normalized strings (titles or anchor texts) to target articles.
#[pyclass(name = "AnchorMap", module = "anchorlink_py")]
pub struct PyAnchorMap {
    inner: AnchorMap,
}

#[pymethods]
impl PyAnchorMap {
    /// Titles and redirect aliases of every article.
    #[staticmethod]
    fn titles(dataset: &PyDataset) -> PyResult<Self> {
        Ok(PyAnchorMap {
            inner: build_title_map(&dataset.inner.articles).map_err(err)?,
        })
    }

    /// Anchor texts of every link.
    #[staticmethod]
    fn anchors(dataset: &PyDataset) -> PyResult<Self> {
        Ok(PyAnchorMap {
            inner: build_anchor_map(&dataset.inner.network).map_err(err)?,
        })
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn targets(&self, pattern: &str) -> Vec<usize> {
        self.inner.targets(&text::tokenize(pattern).join(" ")).map(<[usize]>::to_vec).unwrap_or_default()
    }

    /// Candidate targets of `text` written by `source`: a list of
    /// `(target, [(pattern, start, end), ...])` with byte offsets.
    #[allow(clippy::type_complexity)]
    fn scan(&self, source: usize, text: &str) -> Vec<(usize, Vec<(String, usize, usize)>)> {
        self.inner
            .scan_text(source, text)
            .into_iter()
            .map(|c| (c.target, c.matched.into_iter().map(|m| (m.pattern, m.span.0, m.span.1)).collect()))
            .collect()
    }
}

/// LSA document embeddings fitted on a dataset's abstracts.
#[pyclass(name = "Lsa", module = "anchorlink_py")]
pub struct PyLsa {
    inner: LsaScorer,
    n: usize,
}

#[pymethods]
impl PyLsa {
    #[new]
    #[pyo3(signature = (dataset, dimension = 512, seed = 0))]
    fn new(dataset: &PyDataset, dimension: usize, seed: u64) -> PyResult<Self> {
        let inner = LsaScorer::fit(&dataset.inner.articles, None, dimension, seed, &SvdOptions::default()).map_err(err)?;
        Ok(PyLsa {
            inner,
            n: dataset.inner.articles.len(),
        })
    }

    fn embedding(&self, id: usize) -> PyResult<Vec<f64>> {
        self.check(id)?;
        Ok(self.inner.doc(id).to_vec())
    }

    fn embed_text(&self, text: &str) -> Vec<f64> {
        self.inner.embed_text(text)
    }

    /// `(1 + cos) / 2` of two document embeddings.
    fn score(&self, source: usize, target: usize) -> PyResult<f64> {
        self.check(source)?;
        self.check(target)?;
        Ok(score_lsa(&self.inner, source, target))
    }

    /// The three cosines `(anchor~source, anchor~target, source~target)`.
    fn atilp_features(&self, source: usize, target: usize, anchor: &str) -> PyResult<(f64, f64, f64)> {
        self.check(source)?;
        self.check(target)?;
        let s = atilp_features(&self.inner, source, target, anchor);
        Ok((s[0], s[1], s[2]))
    }
}

impl PyLsa {
    fn check(&self, id: usize) -> PyResult<()> {
        if id < self.n {
            Ok(())
        } else {
            Err(PyIndexError::new_err(format!("article id {id} out of range")))
        }
    }
}

#[pyfunction]
fn tokenize(text: &str) -> Vec<String> {
    text::tokenize(text)
}

#[pyfunction]
fn cosine(u: Vec<f64>, v: Vec<f64>) -> PyResult<f64> {
    if u.len() != v.len() {
        return Err(AnchorlinkError::new_err("vectors differ in length"));
    }
    Ok(text::cosine(&u, &v))
}

/// Average precision in percent.
#[pyfunction]
fn pr_auc(scores: Vec<f64>, labels: Vec<bool>) -> PyResult<f64> {
    eval::pr_auc(&scores, &labels).map_err(err)
}

/// Precision and recall (percent) of the top `#positives` pairs; ties break
/// by ascending key.
#[pyfunction]
fn precision_recall_at_prevalence(keys: Vec<(usize, usize)>, scores: Vec<f64>, labels: Vec<bool>) -> PyResult<(f64, f64)> {
    eval::precision_recall_at_prevalence(&keys, &scores, &labels).map_err(err)
}

/// Runs the evaluation protocol and returns the report as a dict with
/// `rows` and `per_run`. `out`, when given, receives splits, predictions and
/// report files.
#[pyfunction]
#[pyo3(signature = (dataset, name = "dataset", methods = None, modes = None, runs = 5, base_seed = 0, lsa_dimension = 512, out = None))]
#[allow(clippy::too_many_arguments)]
fn run_eval<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    name: &str,
    methods: Option<Vec<String>>,
    modes: Option<Vec<String>>,
    runs: usize,
    base_seed: u64,
    lsa_dimension: usize,
    out: Option<PathBuf>,
) -> PyResult<Bound<'py, PyAny>> {
    let mut config = EvalConfig {
        runs,
        base_seed,
        lsa_dimension,
        ..EvalConfig::default()
    };
    if let Some(m) = methods {
        config.methods = m.iter().map(|s| s.parse::<Method>()).collect::<Result<_, _>>().map_err(err)?;
    }
    if let Some(m) = modes {
        config.modes = m.iter().map(|s| s.parse::<Mode>()).collect::<Result<_, _>>().map_err(err)?;
    }
    let report = eval::run_eval(&dataset.inner, name, &config, out.as_deref()).map_err(err)?;
    let dict = to_py(py, &report)?;
    dict.set_item("markdown", report.markdown())?;
    Ok(dict)
}

/// Adds every class and function to `m`.
pub fn register(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("AnchorlinkError", m.py().get_type::<AnchorlinkError>())?;
    m.add_class::<PyDataset>()?;
    m.add_class::<PyAnchorMap>()?;
    m.add_class::<PyLsa>()?;
    m.add_function(wrap_pyfunction!(tokenize, m)?)?;
    m.add_function(wrap_pyfunction!(cosine, m)?)?;
    m.add_function(wrap_pyfunction!(pr_auc, m)?)?;
    m.add_function(wrap_pyfunction!(precision_recall_at_prevalence, m)?)?;
    m.add_function(wrap_pyfunction!(run_eval, m)?)?;
    Ok(())
}

#[pymodule]
fn anchorlink_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    register(m)
}
