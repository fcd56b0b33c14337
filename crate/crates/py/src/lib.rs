//! Python bindings: graphs, stepping runs, the Dijkstra oracle, k_ρ
//! estimation and the lazy-batched queues.

use std::sync::Arc;

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;

use parsssp::analysis::{compute_r_rho_table, dijkstra_oracle, estimate_k_rho, exact_k_rho};
use parsssp::graph::{build_csr, load_graph, EdgeList};
use parsssp::stepping::{AlgorithmKind, ModeOverride, RhoSelector, DEFAULT_RHO};
use parsssp::{
    checksum, ArrayPq, Backend, DistanceMap, LabPq, NaivePq, Policy, RunConfig, TournamentTree, INF,
};

fn to_py(e: parsssp::Error) -> PyErr {
    match e {
        parsssp::Error::Io(_) | parsssp::Error::Format(_) => PyIOError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn parse<T: std::str::FromStr<Err = parsssp::Error>>(s: &str) -> PyResult<T> {
    s.parse().map_err(to_py)
}

fn json(py: Python<'_>, value: &impl serde::Serialize) -> PyResult<Py<PyAny>> {
    let text = serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))?;
    Ok(py.import("json")?.call_method1("loads", (text,))?.unbind())
}

/// Immutable CSR graph with `u32` weights.
#[pyclass(name = "Graph", module = "parsssp_py", frozen)]
pub struct PyGraph {
    inner: Arc<parsssp::Graph>,
}

#[pymethods]
impl PyGraph {
    /// Builds a graph from `(u, v, w)` triples.
    #[new]
    #[pyo3(signature = (n, edges, directed = false))]
    fn new(py: Python<'_>, n: usize, edges: Vec<(u32, u32, u32)>, directed: bool) -> PyResult<Self> {
        let e = EdgeList::new(n, edges);
        let g = py.detach(|| build_csr(&e, directed)).map_err(to_py)?;
        Ok(Self { inner: Arc::new(g) })
    }

    /// Loads a binary CSR file or a text edge list.
    #[staticmethod]
    #[pyo3(signature = (path, directed = false))]
    fn load(py: Python<'_>, path: std::path::PathBuf, directed: bool) -> PyResult<Self> {
        let g = py.detach(|| load_graph(&path, directed)).map_err(to_py)?;
        Ok(Self { inner: Arc::new(g) })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Stored arcs; an undirected edge counts twice.
    #[getter]
    fn m(&self) -> usize {
        self.inner.m()
    }

    #[getter]
    fn directed(&self) -> bool {
        self.inner.is_directed()
    }

    #[getter]
    fn max_weight(&self) -> u32 {
        self.inner.max_weight()
    }

    fn neighbors(&self, u: u32) -> PyResult<Vec<(u32, u32)>> {
        if u as usize >= self.inner.n() {
            return Err(PyValueError::new_err(format!("vertex {u} out of range")));
        }
        Ok(self.inner.arcs(u).collect())
    }

    fn __repr__(&self) -> String {
        format!("Graph(n={}, m={}, directed={})", self.inner.n(), self.inner.m(), self.inner.is_directed())
    }
}

fn make_policy(
    g: &parsssp::Graph,
    algo: &str,
    delta: Option<u64>,
    rho: Option<usize>,
    selector: &str,
) -> PyResult<Policy> {
    let kind: AlgorithmKind = parse(algo)?;
    let selector = match selector {
        "sampled" => RhoSelector::Sampled,
        "exact" => RhoSelector::Exact,
        other => return Err(PyValueError::new_err(format!("unknown selector {other:?}"))),
    };
    let need_delta = || delta.ok_or_else(|| PyValueError::new_err(format!("delta is required for {kind}")));
    Ok(match kind {
        AlgorithmKind::Dijkstra => Policy::Dijkstra,
        AlgorithmKind::BellmanFord => Policy::BellmanFord,
        AlgorithmKind::Delta => Policy::Delta(need_delta()?),
        AlgorithmKind::DeltaStar => Policy::DeltaStar(need_delta()?),
        AlgorithmKind::Rho => Policy::Rho { rho: rho.unwrap_or(DEFAULT_RHO), selector },
        AlgorithmKind::Radius => {
            let rho = rho.ok_or_else(|| PyValueError::new_err("rho is required for radius"))?;
            Policy::radius(compute_r_rho_table(g, rho.clamp(1, g.n())).map_err(to_py)?)
        }
    })
}

/// Runs one stepping policy. Returns `(dist, stats)` where unreachable
/// vertices hold `INF` and `stats` is a dict.
#[pyfunction]
#[pyo3(signature = (
    graph, source, algo = "rho", *, delta = None, rho = None, selector = "sampled",
    backend = "tree", mode = "auto", fusion = true, bidirectional = true, seed = 1
))]
#[allow(clippy::too_many_arguments)]
fn run_sssp(
    py: Python<'_>,
    graph: &PyGraph,
    source: u32,
    algo: &str,
    delta: Option<u64>,
    rho: Option<usize>,
    selector: &str,
    backend: &str,
    mode: &str,
    fusion: bool,
    bidirectional: bool,
    seed: u64,
) -> PyResult<(Vec<u64>, Py<PyAny>)> {
    let g = graph.inner.clone();
    let policy = make_policy(&g, algo, delta, rho, selector)?;
    let config = RunConfig {
        backend: parse::<Backend>(backend)?,
        mode: parse::<ModeOverride>(mode)?,
        fusion,
        bidirectional,
        seed,
        ..RunConfig::default()
    };
    let out = py.detach(|| parsssp::run_sssp(&g, source, &policy, &config)).map_err(to_py)?;
    let stats = json(py, &out.stats)?;
    Ok((out.dist, stats))
}

/// Sequential Dijkstra. Returns `(dist, hops, k_n)`.
#[pyfunction]
fn dijkstra(py: Python<'_>, graph: &PyGraph, source: u32) -> PyResult<(Vec<u64>, Vec<u32>, u32)> {
    let g = graph.inner.clone();
    let r = py.detach(|| dijkstra_oracle(&g, source)).map_err(to_py)?;
    Ok((r.dist, r.hops, r.k_n))
}

/// Estimates k_ρ from `samples` random vertices, or exactly over all of them.
#[pyfunction]
#[pyo3(signature = (graph, rho, samples = parsssp::analysis::DEFAULT_KRHO_SAMPLES, seed = 1, exact = false))]
fn k_rho(py: Python<'_>, graph: &PyGraph, rho: usize, samples: usize, seed: u64, exact: bool) -> PyResult<Py<PyAny>> {
    let g = graph.inner.clone();
    let est = py
        .detach(|| if exact { exact_k_rho(&g, rho) } else { estimate_k_rho(&g, rho, samples, seed) })
        .map_err(to_py)?;
    json(py, &est)
}

/// Distance from every vertex to its ρ-th nearest vertex (itself included).
#[pyfunction]
fn r_rho(py: Python<'_>, graph: &PyGraph, rho: usize) -> PyResult<Vec<u64>> {
    let g = graph.inner.clone();
    py.detach(|| compute_r_rho_table(&g, rho)).map_err(to_py)
}

#[pyfunction(name = "checksum")]
fn py_checksum(dist: Vec<u64>) -> u64 {
    checksum(&dist)
}

/// A lazy-batched priority queue over ids `0..n` whose keys are set with
/// `set_key` and published with `update`.
#[pyclass(name = "LabPq", module = "parsssp_py")]
pub struct PyLabPq {
    dist: Arc<DistanceMap>,
    queue: Box<dyn LabPq>,
}

#[pymethods]
impl PyLabPq {
    /// `backend` is `tree`, `array` or `naive`.
    #[new]
    #[pyo3(signature = (n, backend = "tree"))]
    fn new(n: usize, backend: &str) -> PyResult<Self> {
        let dist = Arc::new(DistanceMap::new(n));
        let queue: Box<dyn LabPq> = match backend {
            "tree" => Box::new(TournamentTree::new(dist.clone(), n)),
            "array" => Box::new(ArrayPq::new(dist.clone(), n)),
            "naive" => Box::new(NaivePq::new(dist.clone(), None)),
            other => return Err(PyValueError::new_err(format!("unknown backend {other:?}"))),
        };
        Ok(Self { dist, queue })
    }

    fn set_key(&self, id: u32, key: u64) -> PyResult<()> {
        self.check(id)?;
        self.dist.set(id, key);
        Ok(())
    }

    fn key(&self, id: u32) -> PyResult<u64> {
        self.check(id)?;
        Ok(self.dist.get(id))
    }

    fn update(&self, id: u32) -> PyResult<()> {
        self.check(id)?;
        self.queue.update(id);
        Ok(())
    }

    /// Removes and returns every queued id with key at most `theta`.
    fn extract(&mut self, theta: u64) -> Vec<u32> {
        self.queue.extract(theta)
    }

    fn min_key(&mut self) -> u64 {
        self.queue.min_key()
    }

    fn queued(&mut self) -> Vec<u32> {
        self.queue.queued()
    }

    fn __len__(&self) -> usize {
        self.queue.len()
    }
}

impl PyLabPq {
    fn check(&self, id: u32) -> PyResult<()> {
        if (id as usize) < self.dist.len() {
            Ok(())
        } else {
            Err(PyValueError::new_err(format!("id {id} out of range")))
        }
    }
}

#[pymodule]
fn parsssp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("INF", INF)?;
    m.add_class::<PyGraph>()?;
    m.add_class::<PyLabPq>()?;
    m.add_function(wrap_pyfunction!(run_sssp, m)?)?;
    m.add_function(wrap_pyfunction!(dijkstra, m)?)?;
    m.add_function(wrap_pyfunction!(k_rho, m)?)?;
    m.add_function(wrap_pyfunction!(r_rho, m)?)?;
    m.add_function(wrap_pyfunction!(py_checksum, m)?)?;
    Ok(())
}
