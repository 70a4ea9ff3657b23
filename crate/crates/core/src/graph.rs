//! Simple undirected graphs with stable vertex identities and the surgery
//! primitives (suppression, subdivision, contraction) used by the reducers.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Opaque vertex identifier. Identifiers survive surgery unchanged.
pub type Vertex = usize;

/// An undirected edge, stored with the smaller endpoint first.
pub type Edge = (Vertex, Vertex);

pub fn normalize(u: Vertex, v: Vertex) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("vertex {0} does not exist")]
    UnknownVertex(Vertex),
    #[error("edge {{{0}, {1}}} does not exist")]
    MissingEdge(Vertex, Vertex),
    #[error("vertex {vertex} has degree {degree}, expected 2")]
    NotDegreeTwo { vertex: Vertex, degree: usize },
    #[error("suppressing vertex {0} would remove the last cycle of the graph")]
    CycleCollapse(Vertex),
    #[error("label {0:?} is already used by another vertex")]
    DuplicateLabel(String),
}

/// Simple undirected graph. Iteration order is always by ascending id.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Graph {
    adj: BTreeMap<Vertex, BTreeSet<Vertex>>,
    labels: BTreeMap<Vertex, String>,
    next_id: Vertex,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj && self.labels == other.labels
    }
}

impl Eq for Graph {}

/// A set of edges whose removal increases the number of components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCut {
    pub edges: BTreeSet<Edge>,
    /// Vertices in the component of the first endpoint of the first cut edge,
    /// and everything else.
    pub sides: (BTreeSet<Vertex>, BTreeSet<Vertex>),
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a graph from an edge list, rejecting self-loops and duplicate
    /// edges (in either orientation).
    pub fn from_edges<I>(edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut g = Graph::new();
        for (u, v) in edges {
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_vertex(u);
            g.add_vertex(v);
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            g.insert_edge(u, v);
        }
        Ok(g)
    }

    pub fn with_labels<I>(mut self, labels: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, String)>,
    {
        for (v, text) in labels {
            self.add_vertex(v);
            self.set_label(v, text)?;
        }
        Ok(self)
    }

    /// Adds `v` if absent. Returns whether it was inserted.
    pub fn add_vertex(&mut self, v: Vertex) -> bool {
        self.next_id = self.next_id.max(v + 1);
        if self.adj.contains_key(&v) {
            return false;
        }
        self.adj.insert(v, BTreeSet::new());
        true
    }

    /// Allocates an id larger than any id this graph has ever held.
    pub fn fresh_vertex(&mut self) -> Vertex {
        let v = self.next_id;
        self.add_vertex(v);
        v
    }

    /// Next id `fresh_vertex` will hand out.
    pub fn next_id(&self) -> Vertex {
        self.next_id
    }

    /// Inserts an edge between existing distinct vertices.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.has_edge(u, v) {
            return Err(GraphError::DuplicateEdge(u, v));
        }
        self.insert_edge(u, v);
        Ok(())
    }

    /// Inserts an edge, silently ignoring it if present.
    pub(crate) fn insert_edge(&mut self, u: Vertex, v: Vertex) {
        debug_assert_ne!(u, v);
        self.add_vertex(u);
        self.add_vertex(v);
        self.adj.get_mut(&u).unwrap().insert(v);
        self.adj.get_mut(&v).unwrap().insert(u);
    }

    pub fn remove_edge(&mut self, u: Vertex, v: Vertex) -> Result<(), GraphError> {
        if !self.has_edge(u, v) {
            return Err(GraphError::MissingEdge(u, v));
        }
        self.adj.get_mut(&u).unwrap().remove(&v);
        self.adj.get_mut(&v).unwrap().remove(&u);
        Ok(())
    }

    pub fn remove_vertex(&mut self, v: Vertex) -> Result<(), GraphError> {
        let nbrs = self.adj.remove(&v).ok_or(GraphError::UnknownVertex(v))?;
        for u in nbrs {
            self.adj.get_mut(&u).unwrap().remove(&v);
        }
        self.labels.remove(&v);
        Ok(())
    }

    pub fn set_label(&mut self, v: Vertex, text: String) -> Result<(), GraphError> {
        self.check_vertex(v)?;
        if self.labels.iter().any(|(&w, t)| w != v && *t == text) {
            return Err(GraphError::DuplicateLabel(text));
        }
        self.labels.insert(v, text);
        Ok(())
    }

    pub fn label(&self, v: Vertex) -> Option<&str> {
        self.labels.get(&v).map(String::as_str)
    }

    pub fn labels(&self) -> &BTreeMap<Vertex, String> {
        &self.labels
    }

    pub fn vertex_by_label(&self, text: &str) -> Option<Vertex> {
        self.labels.iter().find(|(_, t)| *t == text).map(|(&v, _)| v)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj.get(&u).is_some_and(|n| n.contains(&v))
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> BTreeSet<Vertex> {
        self.adj.keys().copied().collect()
    }

    /// Edges in lexicographic order, smaller endpoint first.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, n)| n.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn neighbors(&self, v: Vertex) -> impl Iterator<Item = Vertex> + '_ {
        self.adj.get(&v).into_iter().flat_map(|n| n.iter().copied())
    }

    pub fn neighbor_set(&self, v: Vertex) -> Option<&BTreeSet<Vertex>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj.get(&v).map_or(0, BTreeSet::len)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.adj.values().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    fn check_vertex(&self, v: Vertex) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    fn check_edge(&self, (u, v): Edge) -> Result<(), GraphError> {
        if self.has_edge(u, v) {
            Ok(())
        } else {
            Err(GraphError::MissingEdge(u, v))
        }
    }

    /// Replaces the degree-2 vertex `v` by an edge between its neighbours.
    ///
    /// If the neighbours are already adjacent, `v` is simply deleted. That
    /// deletion is refused when it would leave the graph without any cycle
    /// (the triangle being the smallest example), because it lowers the
    /// treewidth from 2 to at most 1.
    pub fn suppress_degree2(&self, v: Vertex) -> Result<Graph, GraphError> {
        self.check_vertex(v)?;
        let degree = self.degree(v);
        if degree != 2 {
            return Err(GraphError::NotDegreeTwo { vertex: v, degree });
        }
        let mut nbrs = self.neighbors(v);
        let (p, q) = (nbrs.next().unwrap(), nbrs.next().unwrap());
        let mut g = self.clone();
        g.remove_vertex(v)?;
        if g.has_edge(p, q) {
            if g.is_forest() {
                return Err(GraphError::CycleCollapse(v));
            }
        } else {
            g.insert_edge(p, q);
        }
        Ok(g)
    }

    /// Replaces edge `{u, v}` by a path through a fresh vertex, which is
    /// returned alongside the new graph.
    pub fn subdivide_edge(&self, (u, v): Edge) -> Result<(Graph, Vertex), GraphError> {
        self.check_edge((u, v))?;
        let mut g = self.clone();
        g.remove_edge(u, v)?;
        let x = g.fresh_vertex();
        g.insert_edge(u, x);
        g.insert_edge(x, v);
        Ok((g, x))
    }

    /// Contracts edge `{u, v}` into `u`. Parallel edges and loops vanish.
    pub fn contract_edge(&self, (u, v): Edge) -> Result<Graph, GraphError> {
        self.check_edge((u, v))?;
        let mut g = self.clone();
        let moved: Vec<Vertex> = g.neighbors(v).filter(|&w| w != u).collect();
        let label = g.labels.get(&v).cloned();
        g.remove_vertex(v)?;
        for w in moved {
            g.insert_edge(u, w);
        }
        if let (Some(text), false) = (label, g.labels.contains_key(&u)) {
            g.labels.insert(u, text);
        }
        Ok(g)
    }

    pub fn without_edge(&self, (u, v): Edge) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.remove_edge(u, v)?;
        Ok(g)
    }

    pub fn without_vertex(&self, v: Vertex) -> Result<Graph, GraphError> {
        let mut g = self.clone();
        g.remove_vertex(v)?;
        Ok(g)
    }

    pub fn induced_subgraph(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let mut g = Graph {
            next_id: self.next_id,
            ..Graph::default()
        };
        for &v in keep.iter().filter(|v| self.contains(**v)) {
            g.add_vertex(v);
            for w in self.neighbors(v).filter(|w| keep.contains(w) && *w > v) {
                g.insert_edge(v, w);
            }
            if let Some(text) = self.labels.get(&v) {
                g.labels.insert(v, text.clone());
            }
        }
        g
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<BTreeSet<Vertex>> {
        self.components_avoiding(&BTreeSet::new())
    }

    fn components_avoiding(&self, removed: &BTreeSet<Edge>) -> Vec<BTreeSet<Vertex>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for s in self.vertices() {
            if !seen.insert(s) {
                continue;
            }
            let mut comp = BTreeSet::from([s]);
            let mut queue = VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for y in self.neighbors(x) {
                    if removed.contains(&normalize(x, y)) || !seen.insert(y) {
                        continue;
                    }
                    comp.insert(y);
                    queue.push_back(y);
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    pub fn is_forest(&self) -> bool {
        self.num_edges() + self.components().len() == self.num_vertices()
    }

    /// Returns the cut when deleting `edges` increases the component count.
    pub fn is_edge_cut(&self, edges: &[Edge]) -> Result<Option<EdgeCut>, GraphError> {
        let mut removed = BTreeSet::new();
        for &(u, v) in edges {
            self.check_edge((u, v))?;
            removed.insert(normalize(u, v));
        }
        let before = self.components().len();
        let after = self.components_avoiding(&removed);
        if after.len() <= before {
            return Ok(None);
        }
        let anchor = edges[0].0;
        let side = after.into_iter().find(|c| c.contains(&anchor)).unwrap();
        let rest = self.vertices().filter(|v| !side.contains(v)).collect();
        Ok(Some(EdgeCut {
            edges: removed,
            sides: (side, rest),
        }))
    }

    /// Vertex sets of the blocks (maximal biconnected subgraphs, bridges and
    /// isolated vertices included), ordered by their sorted contents.
    pub fn biconnected_components(&self) -> Vec<BTreeSet<Vertex>> {
        let mut disc: BTreeMap<Vertex, usize> = BTreeMap::new();
        let mut low: BTreeMap<Vertex, usize> = BTreeMap::new();
        let mut blocks = Vec::new();
        let mut time = 0;
        for root in self.vertices() {
            if disc.contains_key(&root) {
                continue;
            }
            if self.degree(root) == 0 {
                blocks.push(BTreeSet::from([root]));
                disc.insert(root, time);
                time += 1;
                continue;
            }
            disc.insert(root, time);
            low.insert(root, time);
            time += 1;
            let mut edge_stack: Vec<Edge> = Vec::new();
            // (vertex, parent, remaining neighbours)
            let mut stack: Vec<(Vertex, Option<Vertex>, Vec<Vertex>)> =
                vec![(root, None, self.adj[&root].iter().rev().copied().collect())];
            while let Some((v, parent, pending)) = stack.last_mut() {
                let v = *v;
                let parent = *parent;
                if let Some(w) = pending.pop() {
                    if Some(w) == parent {
                        continue;
                    }
                    if let Some(&dw) = disc.get(&w) {
                        if dw < disc[&v] {
                            edge_stack.push((v, w));
                            let lv = low[&v].min(dw);
                            low.insert(v, lv);
                        }
                    } else {
                        edge_stack.push((v, w));
                        disc.insert(w, time);
                        low.insert(w, time);
                        time += 1;
                        stack.push((w, Some(v), self.adj[&w].iter().rev().copied().collect()));
                    }
                } else {
                    stack.pop();
                    if let Some(p) = parent {
                        let lv = low[&v];
                        let lp = low[&p].min(lv);
                        low.insert(p, lp);
                        if lv >= disc[&p] {
                            let mut block = BTreeSet::new();
                            while let Some((x, y)) = edge_stack.pop() {
                                block.insert(x);
                                block.insert(y);
                                if (x, y) == (p, v) {
                                    break;
                                }
                            }
                            blocks.push(block);
                        }
                    }
                }
            }
        }
        blocks.sort();
        blocks
    }

    /// Renumbers vertices to `0..n` in ascending id order.
    pub fn compact(&self) -> (Graph, Vec<Vertex>) {
        let order: Vec<Vertex> = self.vertices().collect();
        let index: BTreeMap<Vertex, Vertex> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::new();
        for i in 0..order.len() {
            g.add_vertex(i);
        }
        for (u, v) in self.edges() {
            g.insert_edge(index[&u], index[&v]);
        }
        for (v, text) in &self.labels {
            g.labels.insert(index[v], text.clone());
        }
        (g, order)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.num_vertices())?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        write!(f, "])")
    }
}

/// Small graph families used throughout tests, tools and searches.
pub mod families {
    use super::{Graph, Vertex};

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
        }
        for v in 1..n {
            g.insert_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        let mut g = path(n);
        if n >= 3 {
            g.insert_edge(n - 1, 0);
        }
        g
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new();
        for v in 0..n {
            g.add_vertex(v);
            for u in 0..v {
                g.insert_edge(u, v);
            }
        }
        g
    }

    /// The `2 x cols` grid: top row `0..cols`, bottom row `cols..2*cols`.
    pub fn ladder_grid(cols: usize) -> Graph {
        let mut g = Graph::new();
        for i in 0..cols {
            g.insert_edge(i, cols + i);
            if i > 0 {
                g.insert_edge(i - 1, i);
                g.insert_edge(cols + i - 1, cols + i);
            }
        }
        for v in 0..2 * cols {
            g.add_vertex(v);
        }
        g
    }

    pub fn grid(rows: usize, cols: usize) -> Graph {
        let id = |r: usize, c: usize| -> Vertex { r * cols + c };
        let mut g = Graph::new();
        for r in 0..rows {
            for c in 0..cols {
                g.add_vertex(id(r, c));
                if r > 0 {
                    g.insert_edge(id(r - 1, c), id(r, c));
                }
                if c > 0 {
                    g.insert_edge(id(r, c - 1), id(r, c));
                }
            }
        }
        g
    }

    pub fn petersen() -> Graph {
        let mut g = Graph::new();
        for i in 0..5 {
            g.insert_edge(i, (i + 1) % 5);
            g.insert_edge(i, i + 5);
            g.insert_edge(5 + i, 5 + (i + 2) % 5);
        }
        g
    }

    /// A star with `leaves` leaves centred at 0.
    pub fn star(leaves: usize) -> Graph {
        let mut g = Graph::new();
        g.add_vertex(0);
        for v in 1..=leaves {
            g.insert_edge(0, v);
        }
        g
    }
}
