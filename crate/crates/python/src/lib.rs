//! Python bindings: record types, normalizers, matching, clustering,
//! statistics, parsers and the pipeline commands.

use std::collections::BTreeMap;
use std::path::PathBuf;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use citelink_core::analytics::{self, RegionCounts};
use citelink_core::enrich;
use citelink_core::ingest::{self, ParseOptions, ParseOutcome};
use citelink_core::linkage;
use citelink_core::model::{self, DocumentType, SourceDatabase};
use citelink_core::pipeline;
use citelink_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(py_err)
}

#[pyclass(name = "CitingRecord", module = "citelink", skip_from_py_object)]
#[derive(Clone)]
struct PyCitingRecord {
    inner: model::CitingRecord,
}

#[pymethods]
impl PyCitingRecord {
    #[new]
    #[pyo3(signature = (record_id, source, cited_doc_id, title, authors=None, doi=None, year=None, venue=None, doc_type=None, language=None, citation_count=None))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        record_id: &str,
        source: &str,
        cited_doc_id: &str,
        title: &str,
        authors: Option<Vec<String>>,
        doi: Option<&str>,
        year: Option<i32>,
        venue: Option<String>,
        doc_type: Option<&str>,
        language: Option<String>,
        citation_count: Option<u64>,
    ) -> PyResult<Self> {
        let mut r = model::CitingRecord::new(record_id, parse::<SourceDatabase>(source)?, cited_doc_id, title);
        if let Some(a) = authors {
            r.set_authors(a);
        }
        r.doi = doi.and_then(model::normalize_doi);
        r.year = year;
        r.venue = venue;
        if let Some(t) = doc_type {
            r.doc_type = parse::<DocumentType>(t)?;
        }
        r.language = language;
        r.citation_count = citation_count;
        Ok(PyCitingRecord { inner: r })
    }

    #[getter]
    fn record_id(&self) -> &str {
        &self.inner.record_id
    }
    #[getter]
    fn source(&self) -> &'static str {
        self.inner.source.as_str()
    }
    #[getter]
    fn cited_doc_id(&self) -> &str {
        &self.inner.cited_doc_id
    }
    #[getter]
    fn title_raw(&self) -> &str {
        &self.inner.title_raw
    }
    #[getter]
    fn title_norm(&self) -> &str {
        &self.inner.title_norm
    }
    #[getter]
    fn authors(&self) -> Vec<String> {
        self.inner.authors.clone()
    }
    #[getter]
    fn first_author_key(&self) -> &str {
        &self.inner.first_author_key
    }
    #[getter]
    fn year(&self) -> Option<i32> {
        self.inner.year
    }
    #[getter]
    fn venue(&self) -> Option<&str> {
        self.inner.venue.as_deref()
    }
    #[getter]
    fn doi(&self) -> Option<&str> {
        self.inner.doi.as_deref()
    }
    #[getter]
    fn url(&self) -> Option<&str> {
        self.inner.url.as_deref()
    }
    #[getter]
    fn doc_type(&self) -> &'static str {
        self.inner.doc_type.as_str()
    }
    #[getter]
    fn language(&self) -> Option<&str> {
        self.inner.language.as_deref()
    }
    #[getter]
    fn citation_count(&self) -> Option<u64> {
        self.inner.citation_count
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| py_err(e.into()))
    }

    fn __repr__(&self) -> String {
        format!(
            "CitingRecord({:?}, {}, {:?}, {:?})",
            self.inner.record_id,
            self.inner.source.as_str(),
            self.inner.cited_doc_id,
            self.inner.title_raw
        )
    }
}

#[pyclass(name = "MatchPolicy", module = "citelink", skip_from_py_object)]
#[derive(Clone)]
struct PyMatchPolicy {
    inner: model::MatchPolicy,
}

#[pymethods]
impl PyMatchPolicy {
    #[new]
    #[pyo3(signature = (high_sim_threshold=0.8, low_sim_threshold=0.7, min_title_len=30))]
    fn new(high_sim_threshold: f64, low_sim_threshold: f64, min_title_len: usize) -> PyResult<Self> {
        Ok(PyMatchPolicy {
            inner: model::MatchPolicy::new(high_sim_threshold, low_sim_threshold, min_title_len).map_err(py_err)?,
        })
    }
    #[getter]
    fn high_sim_threshold(&self) -> f64 {
        self.inner.high_sim_threshold
    }
    #[getter]
    fn low_sim_threshold(&self) -> f64 {
        self.inner.low_sim_threshold
    }
    #[getter]
    fn min_title_len(&self) -> usize {
        self.inner.min_title_len
    }
}

fn policy_of(p: Option<PyRef<'_, PyMatchPolicy>>) -> model::MatchPolicy {
    p.map(|p| p.inner).unwrap_or_default()
}

#[pyclass(name = "MatchEdge", module = "citelink", skip_from_py_object)]
#[derive(Clone)]
struct PyMatchEdge {
    inner: linkage::MatchEdge,
}

#[pymethods]
impl PyMatchEdge {
    #[getter]
    fn cited_doc_id(&self) -> &str {
        &self.inner.cited_doc_id
    }
    #[getter]
    fn record_a(&self) -> &str {
        &self.inner.record_a
    }
    #[getter]
    fn record_b(&self) -> &str {
        &self.inner.record_b
    }
    #[getter]
    fn method(&self) -> &'static str {
        self.inner.method.as_str()
    }
    #[getter]
    fn similarity(&self) -> f64 {
        self.inner.similarity
    }
    fn __repr__(&self) -> String {
        format!(
            "MatchEdge({:?}, {:?}, {}, {:.6})",
            self.inner.record_a,
            self.inner.record_b,
            self.inner.method.as_str(),
            self.inner.similarity
        )
    }
}

#[pyclass(name = "CitationCluster", module = "citelink", skip_from_py_object)]
#[derive(Clone)]
struct PyCitationCluster {
    inner: linkage::CitationCluster,
}

#[pymethods]
impl PyCitationCluster {
    #[getter]
    fn cluster_id(&self) -> &str {
        &self.inner.cluster_id
    }
    #[getter]
    fn cited_doc_id(&self) -> &str {
        &self.inner.cited_doc_id
    }
    #[getter]
    fn members(&self) -> Vec<String> {
        self.inner.members.clone()
    }
    #[getter]
    fn presence(&self) -> Vec<&'static str> {
        self.inner.presence.iter().map(|s| s.as_str()).collect()
    }
    #[getter]
    fn flagged(&self) -> bool {
        self.inner.flagged
    }
    fn __repr__(&self) -> String {
        format!("CitationCluster({:?}, members={:?})", self.inner.cluster_id, self.inner.members)
    }
}

fn records_of(list: &[PyRef<'_, PyCitingRecord>]) -> Vec<model::CitingRecord> {
    list.iter().map(|r| r.inner.clone()).collect()
}

#[pyfunction]
fn normalize_doi(raw: &str) -> Option<String> {
    model::normalize_doi(raw)
}

#[pyfunction]
fn normalize_title(raw: &str) -> String {
    model::normalize_title(raw)
}

#[pyfunction]
fn normalize_person(raw: &str) -> String {
    model::normalize_person(raw)
}

#[pyfunction]
#[pyo3(signature = (raw))]
fn classify_doc_type(raw: Option<&str>) -> &'static str {
    model::classify_doc_type(raw).as_str()
}

#[pyfunction]
fn extract_doi_from_url(url: &str) -> Option<String> {
    enrich::extract_doi_from_url(url)
}

#[pyfunction]
#[pyo3(signature = (title, language=None, wos_language=None))]
fn detect_language(title: &str, language: Option<String>, wos_language: Option<&str>) -> Option<String> {
    let mut r = model::CitingRecord::new("", SourceDatabase::Gs, "", title);
    r.language = language;
    enrich::detect_language(&r, wos_language)
}

#[pyfunction]
fn osa_distance(a: &str, b: &str) -> usize {
    linkage::osa_distance(a, b)
}

#[pyfunction]
fn title_similarity(a: &str, b: &str) -> f64 {
    linkage::title_similarity(a, b)
}

#[pyfunction]
#[pyo3(signature = (sim, len_a, len_b, same_first_author, policy=None))]
fn accept_match(
    sim: f64,
    len_a: usize,
    len_b: usize,
    same_first_author: bool,
    policy: Option<PyRef<'_, PyMatchPolicy>>,
) -> bool {
    linkage::accept_match(sim, len_a, len_b, same_first_author, &policy_of(policy))
}

#[pyfunction]
#[pyo3(signature = (list_a, list_b, policy=None))]
fn match_block(
    list_a: Vec<PyRef<'_, PyCitingRecord>>,
    list_b: Vec<PyRef<'_, PyCitingRecord>>,
    policy: Option<PyRef<'_, PyMatchPolicy>>,
) -> PyResult<Vec<PyMatchEdge>> {
    let edges = linkage::match_block(&records_of(&list_a), &records_of(&list_b), &policy_of(policy)).map_err(py_err)?;
    Ok(edges.into_iter().map(|inner| PyMatchEdge { inner }).collect())
}

#[pyfunction]
fn build_clusters(
    edges: Vec<PyRef<'_, PyMatchEdge>>,
    records: Vec<PyRef<'_, PyCitingRecord>>,
) -> PyResult<Vec<PyCitationCluster>> {
    let edges: Vec<linkage::MatchEdge> = edges.iter().map(|e| e.inner.clone()).collect();
    let clusters = linkage::build_clusters(&edges, &records_of(&records)).map_err(py_err)?;
    Ok(clusters.into_iter().map(|inner| PyCitationCluster { inner }).collect())
}

#[pyfunction]
#[pyo3(signature = (records, policy=None))]
fn link_block(
    records: Vec<PyRef<'_, PyCitingRecord>>,
    policy: Option<PyRef<'_, PyMatchPolicy>>,
) -> PyResult<(Vec<PyMatchEdge>, Vec<PyCitationCluster>)> {
    let l = linkage::link_block(&records_of(&records), &policy_of(policy)).map_err(py_err)?;
    Ok((
        l.edges.into_iter().map(|inner| PyMatchEdge { inner }).collect(),
        l.clusters.into_iter().map(|inner| PyCitationCluster { inner }).collect(),
    ))
}

fn region_dict(rc: &RegionCounts) -> BTreeMap<String, u64> {
    let mut m: BTreeMap<String, u64> =
        analytics::Region::ALL.iter().map(|r| (r.as_str().to_string(), rc.get(*r))).collect();
    m.insert("total".into(), rc.total);
    m
}

#[pyfunction]
fn partition_regions(clusters: Vec<PyRef<'_, PyCitationCluster>>) -> BTreeMap<String, u64> {
    region_dict(&analytics::partition_regions(clusters.iter().map(|c| &c.inner)))
}

#[pyfunction]
fn coverage_metrics<'py>(py: Python<'py>, counts: BTreeMap<String, u64>) -> PyResult<Bound<'py, PyDict>> {
    let mut rc = RegionCounts::default();
    for r in analytics::Region::ALL {
        for _ in 0..counts.get(r.as_str()).copied().unwrap_or(0) {
            rc.add(r);
        }
    }
    let c = analytics::coverage_metrics(&rc).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("pct_gs_all", c.pct_gs_all)?;
    d.set_item("pct_wos_all", c.pct_wos_all)?;
    d.set_item("pct_scopus_all", c.pct_scopus_all)?;
    d.set_item("pct_wos_in_gs", c.pct_wos_in_gs)?;
    d.set_item("pct_scopus_in_gs", c.pct_scopus_in_gs)?;
    d.set_item("pct_wos_in_scopus", c.pct_wos_in_scopus)?;
    Ok(d)
}

#[pyfunction]
fn spearman(xs: Vec<f64>, ys: Vec<f64>) -> PyResult<Option<f64>> {
    analytics::spearman(&xs, &ys).map_err(py_err)
}

#[pyfunction]
fn mean_ratio(pairs: Vec<(u64, u64)>) -> PyResult<f64> {
    analytics::mean_ratio(&pairs).map_err(py_err)
}

#[pyfunction]
fn log_summary<'py>(py: Python<'py>, counts: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let s = analytics::log_summary(&counts).map_err(py_err)?;
    let d = PyDict::new(py);
    d.set_item("n", s.n)?;
    d.set_item("median", s.median)?;
    d.set_item("mean", s.mean)?;
    d.set_item("ci_half_width", s.ci_half_width)?;
    Ok(d)
}

fn type_map(m: BTreeMap<String, f64>) -> PyResult<BTreeMap<DocumentType, f64>> {
    m.into_iter().map(|(k, v)| Ok((parse::<DocumentType>(&k)?, v))).collect()
}

#[pyfunction]
fn apply_correction(
    known: BTreeMap<String, f64>,
    unknown_share: f64,
    sample: BTreeMap<String, f64>,
) -> PyResult<BTreeMap<String, f64>> {
    let out = enrich::apply_correction(&type_map(known)?, unknown_share, &type_map(sample)?).map_err(py_err)?;
    Ok(out.into_iter().map(|(t, v)| (t.as_str().to_string(), v)).collect())
}

type Parsed = (Vec<PyCitingRecord>, Vec<(String, u64, String)>);

fn parsed(out: ParseOutcome) -> Parsed {
    (
        out.records.into_iter().map(|inner| PyCitingRecord { inner }).collect(),
        out.rejects.into_iter().map(|r| (r.file, r.line, r.reason)).collect(),
    )
}

fn options(cited_doc_id: Option<String>) -> ParseOptions {
    ParseOptions {
        cited_doc_id,
        ..Default::default()
    }
}

/// Returns `(records, rejects)`; each reject is `(file, line, reason)`.
#[pyfunction]
#[pyo3(signature = (data, name="<gs>", cited_doc_id=None))]
fn parse_gs_dump(data: &[u8], name: &str, cited_doc_id: Option<String>) -> PyResult<Parsed> {
    ingest::parse_gs_dump(data, name, &options(cited_doc_id)).map(parsed).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (data, name="<wos>", cited_doc_id=None))]
fn parse_wos_export(data: &[u8], name: &str, cited_doc_id: Option<String>) -> PyResult<Parsed> {
    ingest::parse_wos_export(data, name, &options(cited_doc_id)).map(parsed).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (data, name="<scopus>", cited_doc_id=None))]
fn parse_scopus_export(data: &[u8], name: &str, cited_doc_id: Option<String>) -> PyResult<Parsed> {
    ingest::parse_scopus_export(data, name, &options(cited_doc_id)).map(parsed).map_err(py_err)
}

/// Runs the whole pipeline and returns its summary as JSON.
#[pyfunction]
#[pyo3(signature = (config_path, output_dir=None, workers=None))]
fn run_pipeline(py: Python<'_>, config_path: PathBuf, output_dir: Option<PathBuf>, workers: Option<usize>) -> PyResult<String> {
    let mut cfg = pipeline::PipelineConfig::load(&config_path).map_err(py_err)?;
    if let Some(d) = output_dir {
        cfg.output_dir = d;
    }
    if let Some(w) = workers {
        cfg.workers = w;
    }
    let summary = py.detach(|| pipeline::cmd_pipeline(&cfg)).map_err(py_err)?;
    serde_json::to_string(&summary).map_err(|e| py_err(e.into()))
}

/// Writes a synthetic corpus from a JSON spec; returns the record count.
#[pyfunction]
fn synth(spec_json: &str, out_dir: PathBuf) -> PyResult<usize> {
    let spec: pipeline::SynthSpec =
        serde_json::from_str(spec_json).map_err(|e| PyValueError::new_err(format!("synth spec: {e}")))?;
    Ok(pipeline::cmd_synth(&spec, &out_dir).map_err(py_err)?.records)
}

#[pymodule]
fn citelink(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyCitingRecord>()?;
    m.add_class::<PyMatchPolicy>()?;
    m.add_class::<PyMatchEdge>()?;
    m.add_class::<PyCitationCluster>()?;
    m.add_function(wrap_pyfunction!(normalize_doi, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_title, m)?)?;
    m.add_function(wrap_pyfunction!(normalize_person, m)?)?;
    m.add_function(wrap_pyfunction!(classify_doc_type, m)?)?;
    m.add_function(wrap_pyfunction!(extract_doi_from_url, m)?)?;
    m.add_function(wrap_pyfunction!(detect_language, m)?)?;
    m.add_function(wrap_pyfunction!(osa_distance, m)?)?;
    m.add_function(wrap_pyfunction!(title_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(accept_match, m)?)?;
    m.add_function(wrap_pyfunction!(match_block, m)?)?;
    m.add_function(wrap_pyfunction!(build_clusters, m)?)?;
    m.add_function(wrap_pyfunction!(link_block, m)?)?;
    m.add_function(wrap_pyfunction!(partition_regions, m)?)?;
    m.add_function(wrap_pyfunction!(coverage_metrics, m)?)?;
    m.add_function(wrap_pyfunction!(spearman, m)?)?;
    m.add_function(wrap_pyfunction!(mean_ratio, m)?)?;
    m.add_function(wrap_pyfunction!(log_summary, m)?)?;
    m.add_function(wrap_pyfunction!(apply_correction, m)?)?;
    m.add_function(wrap_pyfunction!(parse_gs_dump, m)?)?;
    m.add_function(wrap_pyfunction!(parse_wos_export, m)?)?;
    m.add_function(wrap_pyfunction!(parse_scopus_export, m)?)?;
    m.add_function(wrap_pyfunction!(run_pipeline, m)?)?;
    m.add_function(wrap_pyfunction!(synth, m)?)?;
    Ok(())
}
