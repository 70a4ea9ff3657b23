//! Python bindings: graphs, exact treewidth, decomposition validation,
//! ladder detection and reduction, and display graphs of tree pairs.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use laddertw::decomposition::{self, Budget, ExactOptions};
use laddertw::reducer::{self, ReductionPolicy, ReductionReport};
use laddertw::search::{self, SearchOutcome, SearchParams};

create_exception!(laddertw, BudgetExceeded, PyException);

fn value_err(e: impl ToString) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn budget(max_states: Option<usize>) -> Budget {
    let mut b = Budget::from_env();
    if let Some(n) = max_states {
        b.max_states = n;
    }
    b
}

#[pyclass(name = "Graph", module = "laddertw", from_py_object)]
#[derive(Clone)]
pub struct PyGraph {
    inner: laddertw::Graph,
}

#[pymethods]
impl PyGraph {
    #[new]
    #[pyo3(signature = (edges=Vec::new(), n=0))]
    fn new(edges: Vec<(usize, usize)>, n: usize) -> PyResult<Self> {
        let mut g = laddertw::Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        for (u, v) in edges {
            g.add_vertex(u);
            g.add_vertex(v);
            g.add_edge(u, v).map_err(value_err)?;
        }
        Ok(Self { inner: g })
    }

    /// Parses PACE `.gr` text. Vertices become `0..n`.
    #[staticmethod]
    fn from_gr(text: &str) -> PyResult<Self> {
        let inner = laddertw::io::read_gr(text).map_err(value_err)?;
        Ok(Self { inner })
    }

    fn to_gr(&self) -> String {
        laddertw::io::write_gr(&self.inner)
    }

    fn add_vertex(&mut self, v: usize) -> bool {
        self.inner.add_vertex(v)
    }

    /// Adds the edge, creating missing endpoints.
    fn add_edge(&mut self, u: usize, v: usize) -> PyResult<()> {
        self.inner.add_vertex(u);
        self.inner.add_vertex(v);
        self.inner.add_edge(u, v).map_err(value_err)
    }

    fn remove_edge(&mut self, u: usize, v: usize) -> PyResult<()> {
        self.inner.remove_edge(u, v).map_err(value_err)
    }

    fn vertices(&self) -> Vec<usize> {
        self.inner.vertices().collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges().collect()
    }

    fn neighbors(&self, v: usize) -> Vec<usize> {
        self.inner.neighbors(v).collect()
    }

    fn degree(&self, v: usize) -> usize {
        self.inner.degree(v)
    }

    fn label(&self, v: usize) -> Option<String> {
        self.inner.label(v).map(str::to_string)
    }

    #[getter]
    fn num_vertices(&self) -> usize {
        self.inner.num_vertices()
    }

    #[getter]
    fn num_edges(&self) -> usize {
        self.inner.num_edges()
    }

    fn is_connected(&self) -> bool {
        self.inner.is_connected()
    }

    fn __len__(&self) -> usize {
        self.inner.num_vertices()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.num_vertices(),
            self.inner.num_edges()
        )
    }
}

#[pyclass(name = "TreeDecomposition", module = "laddertw", from_py_object)]
#[derive(Clone)]
pub struct PyTreeDecomposition {
    inner: decomposition::TreeDecomposition,
}

#[pymethods]
impl PyTreeDecomposition {
    #[new]
    fn new(bags: Vec<Vec<usize>>, tree_edges: Vec<(usize, usize)>) -> Self {
        Self {
            inner: decomposition::TreeDecomposition {
                bags: bags.into_iter().map(|b| b.into_iter().collect()).collect(),
                tree_edges,
            },
        }
    }

    /// Parses PACE `.td` text; vertices become `0..n`.
    #[staticmethod]
    fn from_td(text: &str) -> PyResult<Self> {
        let (inner, _) = laddertw::io::read_td(text).map_err(value_err)?;
        Ok(Self { inner })
    }

    fn to_td(&self, graph: &PyGraph) -> String {
        laddertw::io::write_td(&self.inner, &graph.inner)
    }

    #[getter]
    fn bags(&self) -> Vec<Vec<usize>> {
        self.inner.bags.iter().map(|b| b.iter().copied().collect()).collect()
    }

    #[getter]
    fn tree_edges(&self) -> Vec<(usize, usize)> {
        self.inner.tree_edges.clone()
    }

    #[getter]
    fn width(&self) -> usize {
        self.inner.width()
    }

    fn __repr__(&self) -> String {
        format!(
            "TreeDecomposition(bags={}, width={})",
            self.inner.bags.len(),
            self.inner.width()
        )
    }
}

#[pyclass(name = "Ladder", module = "laddertw", from_py_object)]
#[derive(Clone)]
pub struct PyLadder {
    inner: laddertw::Ladder,
}

#[pymethods]
impl PyLadder {
    #[new]
    fn new(top: Vec<usize>, bottom: Vec<usize>) -> PyResult<Self> {
        let inner = laddertw::Ladder::new(top, bottom).map_err(value_err)?;
        Ok(Self { inner })
    }

    #[getter]
    fn top(&self) -> Vec<usize> {
        self.inner.top.clone()
    }

    #[getter]
    fn bottom(&self) -> Vec<usize> {
        self.inner.bottom.clone()
    }

    #[getter]
    fn length(&self) -> usize {
        self.inner.length()
    }

    /// `(a, b, c, d)`: the first and last rung.
    fn corners(&self) -> (usize, usize, usize, usize) {
        let [a, b, c, d] = self.inner.corners();
        (a, b, c, d)
    }

    fn __repr__(&self) -> String {
        format!("Ladder(top={:?}, bottom={:?})", self.inner.top, self.inner.bottom)
    }
}

#[pyclass(name = "PhyloTree", module = "laddertw", from_py_object)]
#[derive(Clone)]
pub struct PyPhyloTree {
    inner: laddertw::phylo::PhyloTree,
}

#[pymethods]
impl PyPhyloTree {
    #[new]
    fn new(newick: &str) -> PyResult<Self> {
        let inner = laddertw::phylo::parse_newick(newick).map_err(value_err)?;
        Ok(Self { inner })
    }

    /// Canonical Newick string.
    fn newick(&self) -> String {
        laddertw::phylo::serialize(&self.inner)
    }

    fn taxa(&self) -> Vec<String> {
        self.inner.taxa().into_iter().collect()
    }

    fn is_chain(&self, taxa: Vec<String>) -> bool {
        laddertw::phylo::is_chain(&self.inner, &taxa)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }

    fn __repr__(&self) -> String {
        format!("PhyloTree({:?})", self.newick())
    }
}

/// Exact treewidth and an optimal decomposition. Raises `BudgetExceeded`
/// with the proven bounds when the search runs out of states.
#[pyfunction]
#[pyo3(signature = (graph, max_states=None))]
fn treewidth(graph: &PyGraph, max_states: Option<usize>) -> PyResult<(usize, PyTreeDecomposition)> {
    let options = ExactOptions {
        budget: budget(max_states),
        suppress_degree2: true,
    };
    match decomposition::exact_treewidth_with(&graph.inner, &options) {
        Ok(sol) => Ok((sol.width, PyTreeDecomposition { inner: sol.decomposition })),
        Err(u) => Err(BudgetExceeded::new_err((u.lower, u.upper))),
    }
}

/// `(ok, violations)` with violations as `(axiom, message)` pairs. Raises
/// `ValueError` when the bags do not form a tree.
#[pyfunction]
fn validate(graph: &PyGraph, td: &PyTreeDecomposition) -> PyResult<(bool, Vec<(String, String)>)> {
    let report = decomposition::validate(&graph.inner, &td.inner).map_err(value_err)?;
    let violations = report
        .violations
        .iter()
        .map(|v| (v.axiom().to_string(), v.to_string()))
        .collect();
    Ok((report.ok, violations))
}

#[pyfunction]
#[pyo3(signature = (graph, min_length=1))]
fn find_ladders(graph: &PyGraph, min_length: usize) -> Vec<PyLadder> {
    laddertw::ladder::find_ladders(&graph.inner, min_length)
        .into_iter()
        .map(|inner| PyLadder { inner })
        .collect()
}

/// `(disconnecting, degree-2 cornerpoints)`.
#[pyfunction]
fn classify(graph: &PyGraph, ladder: &PyLadder) -> PyResult<(bool, Vec<usize>)> {
    let c = laddertw::ladder::classify(&graph.inner, &ladder.inner).map_err(value_err)?;
    Ok((c.disconnecting, c.degree2_cornerpoints))
}

#[pyfunction]
fn shorten(graph: &PyGraph, ladder: &PyLadder, target: usize) -> PyResult<(PyGraph, PyLadder)> {
    let (g, l) = laddertw::ladder::shorten(&graph.inner, &ladder.inner, target).map_err(value_err)?;
    Ok((PyGraph { inner: g }, PyLadder { inner: l }))
}

#[pyfunction]
fn lengthen(graph: &PyGraph, ladder: &PyLadder, extra: usize) -> PyResult<(PyGraph, PyLadder)> {
    let (g, l) = laddertw::ladder::lengthen(&graph.inner, &ladder.inner, extra).map_err(value_err)?;
    Ok((PyGraph { inner: g }, PyLadder { inner: l }))
}

/// Reduces ladders; returns the reduced graph and the JSON report.
#[pyfunction]
#[pyo3(signature = (
    graph,
    aggressive=false,
    general_target=4,
    aggressive_target=3,
    suppress_degree2=false,
    max_states=None,
))]
fn reduce(
    graph: &PyGraph,
    aggressive: bool,
    general_target: usize,
    aggressive_target: usize,
    suppress_degree2: bool,
    max_states: Option<usize>,
) -> PyResult<(PyGraph, String)> {
    let policy = ReductionPolicy {
        general_target,
        aggressive_target,
        allow_aggressive: aggressive,
        suppress_degree2,
        ..ReductionPolicy::default()
    };
    let (g, report) =
        reducer::reduce_with(&graph.inner, &policy, &budget(max_states)).map_err(value_err)?;
    let json = serde_json::to_string(&report).map_err(value_err)?;
    Ok((PyGraph { inner: g }, json))
}

/// Re-applies a JSON report from `reduce` to the original graph.
#[pyfunction]
fn replay(graph: &PyGraph, report: &str) -> PyResult<PyGraph> {
    let report: ReductionReport = serde_json::from_str(report).map_err(value_err)?;
    let inner = reducer::replay(&graph.inner, &report).map_err(value_err)?;
    Ok(PyGraph { inner })
}

#[pyfunction]
#[pyo3(signature = (t1, t2, suppress=false))]
fn display_graph(t1: &PyPhyloTree, t2: &PyPhyloTree, suppress: bool) -> PyResult<PyGraph> {
    let d = laddertw::phylo::display_graph(&t1.inner, &t2.inner, suppress).map_err(value_err)?;
    Ok(PyGraph { inner: d.graph })
}

/// Maximal common chains as lists of taxa.
#[pyfunction]
fn common_chains(t1: &PyPhyloTree, t2: &PyPhyloTree) -> PyResult<Vec<Vec<String>>> {
    let chains = laddertw::phylo::find_common_chains(&t1.inner, &t2.inner).map_err(value_err)?;
    Ok(chains.into_iter().map(|c| c.taxa).collect())
}

/// Subtree and chain reduction to exhaustion; returns both trees and the
/// JSON log.
#[pyfunction]
#[pyo3(signature = (t1, t2, keep=4))]
fn kernelize(t1: &PyPhyloTree, t2: &PyPhyloTree, keep: usize) -> PyResult<(PyPhyloTree, PyPhyloTree, String)> {
    let (a, b, log) = laddertw::phylo::kernelize(&t1.inner, &t2.inner, keep).map_err(value_err)?;
    let json = serde_json::to_string(&log).map_err(value_err)?;
    Ok((PyPhyloTree { inner: a }, PyPhyloTree { inner: b }, json))
}

/// Searches for a treewidth-`tw` graph whose ladder gains a unit of
/// treewidth when lengthened by one square. Returns
/// `(graph, ladder, lengthened, width)` or `None`.
#[pyfunction]
#[pyo3(signature = (tw=3, max_n=None, seed=0, trials=200_000))]
fn tight_search(
    py: Python<'_>,
    tw: usize,
    max_n: Option<usize>,
    seed: u64,
    trials: usize,
) -> Option<(PyGraph, PyLadder, PyGraph, usize)> {
    let mut params = SearchParams::for_tw(tw);
    if let Some(n) = max_n {
        params.max_n = n;
    }
    params.seed = seed;
    params.max_trials = trials;
    match py.detach(|| search::tight_search(&params)) {
        SearchOutcome::Found(w) => Some((
            PyGraph { inner: w.graph },
            PyLadder { inner: w.ladder },
            PyGraph { inner: w.lengthened },
            w.width,
        )),
        _ => None,
    }
}

#[pymodule]
#[pyo3(name = "laddertw")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyGraph>()?;
    m.add_class::<PyTreeDecomposition>()?;
    m.add_class::<PyLadder>()?;
    m.add_class::<PyPhyloTree>()?;
    m.add("BudgetExceeded", m.py().get_type::<BudgetExceeded>())?;
    m.add_function(wrap_pyfunction!(treewidth, m)?)?;
    m.add_function(wrap_pyfunction!(validate, m)?)?;
    m.add_function(wrap_pyfunction!(find_ladders, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(shorten, m)?)?;
    m.add_function(wrap_pyfunction!(lengthen, m)?)?;
    m.add_function(wrap_pyfunction!(reduce, m)?)?;
    m.add_function(wrap_pyfunction!(replay, m)?)?;
    m.add_function(wrap_pyfunction!(display_graph, m)?)?;
    m.add_function(wrap_pyfunction!(common_chains, m)?)?;
    m.add_function(wrap_pyfunction!(kernelize, m)?)?;
    m.add_function(wrap_pyfunction!(tight_search, m)?)?;
    Ok(())
}
