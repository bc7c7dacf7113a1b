//! Python bindings for the bootnet toolkit: graphs and their measurements,
//! synthetic generators, the link bootstrap sampler, closed-form predictions,
//! and cross-network partition analytics.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use bootnet::clustering::{global_clustering, local_clustering, ClusteringMode};
use bootnet::components::{connected_components, ComponentKind};
use bootnet::crossnet as xnet;
use bootnet::generators as gen;
use bootnet::graph::Graph;
use bootnet::sampling;
use bootnet::stats;
use bootnet::theory;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mode(mode: &str) -> PyResult<ClusteringMode> {
    match mode {
        "mean_local" => Ok(ClusteringMode::MeanLocal),
        "transitivity" => Ok(ClusteringMode::Transitivity),
        other => Err(err(format!("unknown clustering mode `{other}`"))),
    }
}

fn parse_kind(kind: &str) -> PyResult<ComponentKind> {
    match kind {
        "weak" => Ok(ComponentKind::Weak),
        "strong" => Ok(ComponentKind::Strong),
        "undirected" => Ok(ComponentKind::Undirected),
        other => Err(err(format!("unknown component kind `{other}`"))),
    }
}

/// Immutable simple graph (directed or undirected).
#[pyclass(name = "Graph", frozen)]
struct PyGraph {
    inner: Arc<Graph>,
}

impl PyGraph {
    fn wrap(g: Graph) -> Self {
        PyGraph { inner: Arc::new(g) }
    }
}

#[pymethods]
impl PyGraph {
    /// Build from an edge list; duplicates and self-loops are dropped.
    #[new]
    #[pyo3(signature = (edges, directed, node_count=None))]
    fn new(edges: Vec<(u32, u32)>, directed: bool, node_count: Option<usize>) -> PyResult<Self> {
        let result = match node_count {
            Some(n) => Graph::build(directed, n, &edges),
            None => Graph::from_edges(directed, &edges),
        };
        result.map(|(g, _)| PyGraph::wrap(g)).map_err(err)
    }

    /// Load from an edge-list TSV (`src<TAB>dst`, `#` comments allowed).
    #[staticmethod]
    fn from_tsv(path: &str, directed: bool) -> PyResult<Self> {
        bootnet::io::load_graph(std::path::Path::new(path), directed)
            .map(|(g, _, _)| PyGraph::wrap(g))
            .map_err(err)
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn edge_count(&self) -> u64 {
        self.inner.edge_count()
    }

    #[getter]
    fn directed(&self) -> bool {
        self.inner.is_directed()
    }

    fn has_edge(&self, u: u32, v: u32) -> bool {
        self.inner.has_edge(u, v)
    }

    fn out_neighbors(&self, u: u32) -> PyResult<Vec<u32>> {
        if !self.inner.contains(u) {
            return Err(err(format!("node {u} not in graph")));
        }
        Ok(self.inner.out_neighbors(u).to_vec())
    }

    fn in_neighbors(&self, u: u32) -> PyResult<Vec<u32>> {
        if !self.inner.contains(u) {
            return Err(err(format!("node {u} not in graph")));
        }
        Ok(self.inner.in_neighbors(u).to_vec())
    }

    /// Degree distributions and moments as a dict.
    fn degree_stats(&self, py: Python<'_>) -> PyResult<PyObject> {
        let s = stats::degree_stats(&self.inner).map_err(err)?;
        let d = pyo3::types::PyDict::new_bound(py);
        d.set_item("in_pmf", s.in_pmf)?;
        d.set_item("out_pmf", s.out_pmf)?;
        d.set_item(
            "joint_pmf",
            s.joint_pmf.into_iter().collect::<HashMap<_, _>>(),
        )?;
        d.set_item("mean_k", s.mean_k)?;
        d.set_item("mean_k2", s.mean_k2)?;
        d.set_item("mean_jk", s.mean_jk)?;
        Ok(d.into())
    }

    /// Fraction of directed edges whose reverse also exists.
    fn reciprocity(&self) -> PyResult<f64> {
        stats::reciprocity(&self.inner).map_err(err)
    }

    /// Local clustering coefficient; None when degree < 2.
    fn local_clustering(&self, node: u32) -> PyResult<Option<f64>> {
        local_clustering(&self.inner, node).map_err(err)
    }

    /// Global clustering: mode is "mean_local" or "transitivity".
    fn global_clustering(&self, mode: &str) -> PyResult<f64> {
        global_clustering(&self.inner, parse_mode(mode)?).map_err(err)
    }

    /// Component decomposition: kind is "weak", "strong" or "undirected".
    fn connected_components(&self, py: Python<'_>, kind: &str) -> PyResult<PyObject> {
        let r = connected_components(&self.inner, parse_kind(kind)?).map_err(err)?;
        let d = pyo3::types::PyDict::new_bound(py);
        d.set_item("kind", r.kind.as_str())?;
        d.set_item("component_sizes", r.component_sizes)?;
        d.set_item("gcc_size", r.gcc_size)?;
        d.set_item("gcc_fraction_of_nodes", r.gcc_fraction_of_nodes)?;
        Ok(d.into())
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(nodes={}, edges={}, directed={})",
            self.inner.node_count(),
            self.inner.edge_count(),
            self.inner.is_directed()
        )
    }
}

/// Result of one bootstrap sampling run.
#[pyclass(name = "CopiedNetwork", frozen)]
struct PyCopiedNetwork {
    sampled_nodes: Vec<u32>,
    graph: Arc<Graph>,
    measures: sampling::CopiedMeasurements,
}

impl PyCopiedNetwork {
    fn wrap(c: sampling::CopiedNetwork) -> Self {
        let measures = sampling::measure(&c);
        PyCopiedNetwork {
            sampled_nodes: c.sampled_nodes,
            graph: Arc::new(c.graph),
            measures,
        }
    }
}

#[pymethods]
impl PyCopiedNetwork {
    /// Source node ids that self-selected into the sample.
    #[getter]
    fn sampled_nodes(&self) -> Vec<u32> {
        self.sampled_nodes.clone()
    }

    /// The copied subgraph, indexed by rank within `sampled_nodes`.
    #[getter]
    fn graph(&self) -> PyGraph {
        PyGraph {
            inner: Arc::clone(&self.graph),
        }
    }

    /// Structural measurements (GCC fractions, reciprocity, clustering,
    /// out-degree moments) as a dict.
    fn measurements(&self, py: Python<'_>) -> PyResult<PyObject> {
        let m = &self.measures;
        let d = pyo3::types::PyDict::new_bound(py);
        d.set_item("gcc_weak_frac", m.gcc_weak_frac)?;
        d.set_item("gcc_strong_frac", m.gcc_strong_frac)?;
        d.set_item("reciprocity", m.reciprocity)?;
        d.set_item("clustering_mean_local", m.clustering_mean_local)?;
        d.set_item("clustering_transitivity", m.clustering_transitivity)?;
        d.set_item("mean_k", m.mean_k)?;
        d.set_item("mean_k2", m.mean_k2)?;
        Ok(d.into())
    }

    fn __repr__(&self) -> String {
        format!(
            "CopiedNetwork(sampled={}, edges={})",
            self.sampled_nodes.len(),
            self.graph.edge_count()
        )
    }
}

#[pyfunction]
fn generate_erdos_renyi(n: usize, mean_degree: f64, seed: u64) -> PyResult<PyGraph> {
    gen::generate(&gen::GeneratorSpec::erdos_renyi(n, mean_degree, seed))
        .map(PyGraph::wrap)
        .map_err(err)
}

#[pyfunction]
#[pyo3(signature = (n, exponent, k_min, seed, k_max=None))]
fn generate_powerlaw(
    n: usize,
    exponent: f64,
    k_min: u32,
    seed: u64,
    k_max: Option<u32>,
) -> PyResult<PyGraph> {
    gen::generate(&gen::GeneratorSpec::powerlaw_config(
        n, exponent, k_min, k_max, seed,
    ))
    .map(PyGraph::wrap)
    .map_err(err)
}

#[pyfunction]
fn generate_ring(n: usize, lattice_degree: u32, rewire_prob: f64, seed: u64) -> PyResult<PyGraph> {
    gen::generate(&gen::GeneratorSpec::ring_rewire(
        n,
        lattice_degree,
        rewire_prob,
        seed,
    ))
    .map(PyGraph::wrap)
    .map_err(err)
}

/// First and second moments of the truncated power law on k_min..=k_max.
#[pyfunction]
fn truncated_powerlaw_moments(exponent: f64, k_min: u32, k_max: u32) -> (f64, f64) {
    gen::truncated_powerlaw_moments(exponent, k_min, k_max)
}

/// Two-stage bootstrap sample: node rate p1, per-direction link rate p2.
#[pyfunction]
fn sample(source: &PyGraph, p1: f64, p2: f64, seed: u64) -> PyResult<PyCopiedNetwork> {
    let params = sampling::SampleParams::new(p1, p2, seed).map_err(err)?;
    sampling::sample(&source.inner, &params)
        .map(PyCopiedNetwork::wrap)
        .map_err(err)
}

/// Undirected adaptation: each source link copied once with probability p2.
#[pyfunction]
fn sample_undirected(source: &PyGraph, p1: f64, p2: f64, seed: u64) -> PyResult<PyCopiedNetwork> {
    let params = sampling::SampleParams::new(p1, p2, seed).map_err(err)?;
    sampling::sample_undirected(&source.inner, &params)
        .map(PyCopiedNetwork::wrap)
        .map_err(err)
}

/// Node sampling proportional to degree: min(1, base_rate * deg / mean_deg).
#[pyfunction]
fn sample_degree_weighted(
    source: &PyGraph,
    base_rate: f64,
    p2: f64,
    seed: u64,
) -> PyResult<PyCopiedNetwork> {
    sampling::sample_degree_weighted(&source.inner, base_rate, p2, seed)
        .map(PyCopiedNetwork::wrap)
        .map_err(err)
}

/// Sweep the (p1, p2) grid; returns one dict per (cell, replica).
#[pyfunction]
fn sweep(
    py: Python<'_>,
    source: &PyGraph,
    p1_grid: Vec<f64>,
    p2_grid: Vec<f64>,
    replicas: u32,
    seed: u64,
) -> PyResult<Vec<PyObject>> {
    let report =
        sampling::sweep(&source.inner, &p1_grid, &p2_grid, replicas, seed).map_err(err)?;
    report
        .rows
        .iter()
        .map(|row| {
            let d = pyo3::types::PyDict::new_bound(py);
            d.set_item("p1", row.p1)?;
            d.set_item("p2", row.p2)?;
            d.set_item("p_e", row.p_e)?;
            d.set_item("replica", row.replica)?;
            d.set_item("gcc_weak_frac", row.measures.gcc_weak_frac)?;
            d.set_item("gcc_strong_frac", row.measures.gcc_strong_frac)?;
            d.set_item("reciprocity", row.measures.reciprocity)?;
            d.set_item("clustering_mean_local", row.measures.clustering_mean_local)?;
            d.set_item(
                "clustering_transitivity",
                row.measures.clustering_transitivity,
            )?;
            d.set_item("mean_k", row.measures.mean_k)?;
            d.set_item("mean_k2", row.measures.mean_k2)?;
            Ok(d.into())
        })
        .collect()
}

/// Seed for one (cell, replica) job of the derivation tree.
#[pyfunction]
fn derive_seed(base: u64, cell: u64, replica: u64) -> u64 {
    sampling::derive_seed(base, cell, replica)
}

/// Binomially thinned degree pmf; returns (pmf dict, truncated mass).
#[pyfunction]
fn thinned_degree_pmf(
    source_pmf: BTreeMap<u32, f64>,
    copy_prob: f64,
    k_max_out: u32,
) -> PyResult<(BTreeMap<u32, f64>, f64)> {
    theory::thinned_degree_pmf(&source_pmf, copy_prob, k_max_out)
        .map(|t| (t.probs, t.truncated_mass))
        .map_err(err)
}

/// Critical copy probability <k>/<k2>; dict with raw, clamped, achievable.
#[pyfunction]
fn gcc_threshold(py: Python<'_>, mean_k: f64, mean_k2: f64) -> PyResult<PyObject> {
    let t = theory::gcc_threshold(mean_k, mean_k2).map_err(err)?;
    let d = pyo3::types::PyDict::new_bound(py);
    d.set_item("raw", t.raw)?;
    d.set_item("clamped", t.clamped)?;
    d.set_item("achievable", t.achievable)?;
    Ok(d.into())
}

/// Whether a giant component is predicted at the given copy probability.
#[pyfunction]
fn gcc_predicate(mean_k: f64, mean_jk: f64, copy_prob: f64) -> PyResult<bool> {
    theory::gcc_predicate(mean_k, mean_jk, copy_prob).map_err(err)
}

/// Copied-network moments (mean_k, mean_k2) from source moments.
#[pyfunction]
fn predict_moments(mean_k: f64, mean_k2: f64, copy_prob: f64) -> PyResult<(f64, f64)> {
    theory::predict_moments(mean_k, mean_k2, copy_prob).map_err(err)
}

/// Expected copied-network reciprocity (= the link sampling rate).
#[pyfunction]
fn predict_reciprocity(link_rate: f64) -> PyResult<f64> {
    theory::predict_reciprocity(link_rate).map_err(err)
}

/// Uncorrelated-network clustering (1/n)(<k2>-<k>)^2/<k>^3 as (raw, clamped).
#[pyfunction]
fn predict_clustering_uncorrelated(n: u64, mean_k: f64, mean_k2: f64) -> PyResult<(f64, f64)> {
    theory::predict_clustering_uncorrelated(n, mean_k, mean_k2)
        .map(|c| (c.raw, c.clamped))
        .map_err(err)
}

/// Copied-network clustering p2 * C_source.
#[pyfunction]
fn predict_copied_clustering(link_rate: f64, clustering_src: f64) -> PyResult<f64> {
    theory::predict_copied_clustering(link_rate, clustering_src).map_err(err)
}

/// Jaccard similarity of two label sets; None when both are empty.
#[pyfunction]
fn jaccard_similarity(a: BTreeSet<String>, b: BTreeSet<String>) -> Option<f64> {
    xnet::jaccard_similarity(&a, &b).map(|r| r.value())
}

/// Copied/native decomposition of a target graph against a source graph.
#[pyclass(name = "Partition", frozen)]
struct PyPartition {
    part: xnet::NetworkPartition,
    target: Arc<Graph>,
    source: Arc<Graph>,
}

fn ratio_value(r: Option<xnet::Ratio>) -> Option<f64> {
    r.map(|r| r.value())
}

fn ratio_pair(r: Option<xnet::Ratio>) -> Option<(u64, u64)> {
    r.map(|r| (r.num, r.den))
}

#[pymethods]
impl PyPartition {
    /// mapping: dict target node -> source node (injective).
    #[new]
    fn new(target: &PyGraph, source: &PyGraph, mapping: BTreeMap<u32, u32>) -> PyResult<Self> {
        let pairs: Vec<(u32, u32)> = mapping.into_iter().collect();
        let mapping = xnet::AccountMapping::new(pairs).map_err(err)?;
        let part = xnet::partition(&target.inner, &source.inner, &mapping).map_err(err)?;
        Ok(PyPartition {
            part,
            target: Arc::clone(&target.inner),
            source: Arc::clone(&source.inner),
        })
    }

    #[getter]
    fn copied_count(&self) -> u64 {
        self.part.copied_count()
    }

    #[getter]
    fn native_count(&self) -> u64 {
        self.part.native_count()
    }

    #[getter]
    fn copiable_count(&self) -> u64 {
        self.part.copiable_count()
    }

    #[getter]
    fn connected_count(&self) -> usize {
        self.part.connected_count()
    }

    fn is_copied(&self, u: u32, v: u32) -> bool {
        self.part.is_copied(u, v)
    }

    /// (CR, CR_ind, CR_out) as floats; None where undefined.
    fn copy_ratios(&self, node: u32) -> PyResult<(Option<f64>, Option<f64>, Option<f64>)> {
        let (a, b, c) =
            xnet::copy_ratios(&self.part, &self.target, &self.source, node).map_err(err)?;
        Ok((ratio_value(a), ratio_value(b), ratio_value(c)))
    }

    /// CR as an exact (numerator, denominator) pair.
    fn copy_ratio_exact(&self, node: u32) -> PyResult<Option<(u64, u64)>> {
        let (cr, _, _) =
            xnet::copy_ratios(&self.part, &self.target, &self.source, node).map_err(err)?;
        Ok(ratio_pair(cr))
    }

    /// (R_copied, R_native); None where undefined.
    fn reciprocity_ratios(&self, node: u32) -> PyResult<(Option<f64>, Option<f64>)> {
        let (a, b) = xnet::reciprocity_ratios(
            &self.part,
            &self.target,
            &self.source,
            node,
            xnet::FriendSetMode::Copiable,
        )
        .map_err(err)?;
        Ok((ratio_value(a), ratio_value(b)))
    }

    fn copied_fraction_of_reciprocated(&self, node: u32) -> PyResult<Option<f64>> {
        xnet::copied_fraction_of_reciprocated(&self.part, &self.target, &self.source, node)
            .map(ratio_value)
            .map_err(err)
    }

    /// Category string: native / expat / binetworked / undefined.
    fn category(&self, node: u32) -> PyResult<String> {
        let (cr, _, _) =
            xnet::copy_ratios(&self.part, &self.target, &self.source, node).map_err(err)?;
        Ok(xnet::UserCategory::from_copy_ratio(cr).as_str().to_string())
    }

    /// Per-node (copied out-neighbor count, native FoF follower count).
    fn fof_native_follow_stats(&self) -> Vec<(u64, u64)> {
        xnet::fof_native_follow_stats(&self.part, &self.target)
    }

    fn __repr__(&self) -> String {
        format!(
            "Partition(connected={}, copied={}, native={}, copiable={})",
            self.part.connected_count(),
            self.part.copied_count(),
            self.part.native_count(),
            self.part.copiable_count()
        )
    }
}

#[pymodule]
fn bootnet_py(_py: Python<'_>, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyCopiedNetwork>()?;
    m.add_class::<PyPartition>()?;
    m.add_function(wrap_pyfunction!(generate_erdos_renyi, m)?)?;
    m.add_function(wrap_pyfunction!(generate_powerlaw, m)?)?;
    m.add_function(wrap_pyfunction!(generate_ring, m)?)?;
    m.add_function(wrap_pyfunction!(truncated_powerlaw_moments, m)?)?;
    m.add_function(wrap_pyfunction!(sample, m)?)?;
    m.add_function(wrap_pyfunction!(sample_undirected, m)?)?;
    m.add_function(wrap_pyfunction!(sample_degree_weighted, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(derive_seed, m)?)?;
    m.add_function(wrap_pyfunction!(thinned_degree_pmf, m)?)?;
    m.add_function(wrap_pyfunction!(gcc_threshold, m)?)?;
    m.add_function(wrap_pyfunction!(gcc_predicate, m)?)?;
    m.add_function(wrap_pyfunction!(predict_moments, m)?)?;
    m.add_function(wrap_pyfunction!(predict_reciprocity, m)?)?;
    m.add_function(wrap_pyfunction!(predict_clustering_uncorrelated, m)?)?;
    m.add_function(wrap_pyfunction!(predict_copied_clustering, m)?)?;
    m.add_function(wrap_pyfunction!(jaccard_similarity, m)?)?;
    Ok(())
}
