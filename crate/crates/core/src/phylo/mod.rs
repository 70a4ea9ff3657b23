//! Unrooted binary phylogenetic trees, their display graphs, and the subtree
//! and common chain reductions.

mod display;
mod newick;
mod reduce;

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

use crate::graph::{normalize, Edge, Graph, Vertex};

pub use display::{display_graph, DisplayGraph, Origin};
pub use newick::{parse_newick, serialize};
pub use reduce::{
    chain_reduce, find_common_chains, is_chain, kernelize, subtree_reduce, truncate_chain,
    CommonChain, LogEntry, MIN_CHAIN_KEEP,
};

/// Joins the two labels of a reduced cherry. Rejected inside input labels so
/// that joined labels never collide with existing ones.
pub const SEPARATOR: char = '~';

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PhyloError {
    #[error("position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("position {pos}: duplicate label {label:?}")]
    DuplicateLabel { pos: usize, label: String },
    #[error("position {pos}: vertex has {children} children; trees must be binary")]
    NonBinary { pos: usize, children: usize },
    #[error("position {pos}: label {label:?} contains the reserved separator '{SEPARATOR}'")]
    ReservedSeparator { pos: usize, label: String },
    #[error("position {pos}: leaf without a label")]
    MissingLabel { pos: usize },
    #[error("trees are on different taxon sets")]
    TaxaMismatch,
    #[error("unknown taxon {0:?}")]
    UnknownTaxon(String),
    #[error("not a chain of both trees: {0:?}")]
    NotAChain(Vec<String>),
    #[error("chains must keep at least {MIN_CHAIN_KEEP} taxa (got {0})")]
    KeepTooSmall(usize),
    #[error("invalid tree: {0}")]
    Invalid(String),
}

/// An unrooted tree with internal vertices of degree 3 and leaves labelled
/// bijectively by the taxa.
#[derive(Debug, Clone)]
pub struct PhyloTree {
    graph: Graph,
    leaves: BTreeMap<String, Vertex>,
}

impl PhyloTree {
    /// Checks the tree conditions on a graph whose labelled vertices are
    /// the leaves.
    pub fn from_graph(graph: Graph) -> Result<Self, PhyloError> {
        let invalid = |m: String| Err(PhyloError::Invalid(m));
        if graph.is_empty() {
            return invalid("no taxa".into());
        }
        if !graph.is_connected() || !graph.is_forest() {
            return invalid("not a tree".into());
        }
        let mut leaves = BTreeMap::new();
        for v in graph.vertices() {
            let d = graph.degree(v);
            match graph.label(v) {
                Some(label) if d <= 1 => {
                    if label.is_empty() {
                        return invalid(format!("vertex {v} has an empty label"));
                    }
                    leaves.insert(label.to_string(), v);
                }
                Some(_) => return invalid(format!("labelled vertex {v} has degree {d}")),
                None if d == 3 => {}
                None => return invalid(format!("unlabelled vertex {v} has degree {d}")),
            }
        }
        Ok(Self { graph, leaves })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn taxa(&self) -> BTreeSet<String> {
        self.leaves.keys().cloned().collect()
    }

    pub fn num_taxa(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaf(&self, taxon: &str) -> Option<Vertex> {
        self.leaves.get(taxon).copied()
    }

    /// The unique neighbour of the leaf (absent for a single-taxon tree).
    pub fn parent(&self, taxon: &str) -> Option<Vertex> {
        self.leaf(taxon).and_then(|v| self.graph.neighbors(v).next())
    }

    pub fn is_leaf(&self, v: Vertex) -> bool {
        self.graph.label(v).is_some()
    }

    /// Pairs of taxa whose leaves hang off the same internal vertex.
    pub fn cherries(&self) -> Vec<(String, String)> {
        let mut out = Vec::new();
        for v in self.graph.vertices().filter(|&v| !self.is_leaf(v)) {
            let kids: Vec<&str> = self
                .graph
                .neighbors(v)
                .filter_map(|w| self.graph.label(w))
                .collect();
            for i in 0..kids.len() {
                for j in i + 1..kids.len() {
                    let (a, b) = (kids[i].min(kids[j]), kids[i].max(kids[j]));
                    out.push((a.to_string(), b.to_string()));
                }
            }
        }
        out.sort();
        out
    }

    /// Caterpillar with the taxa in the given order along its spine.
    pub fn caterpillar<S: AsRef<str>>(taxa: &[S]) -> Result<Self, PhyloError> {
        let mut t = Self::single(taxa.first().ok_or(PhyloError::Invalid("no taxa".into()))?.as_ref())?;
        for (i, taxon) in taxa.iter().enumerate().skip(1) {
            // attach next to the previous leaf so the order is kept
            let prev = t.leaf(taxa[i - 1].as_ref()).unwrap();
            let edge = if i == 1 {
                None
            } else {
                Some(normalize(prev, t.graph.neighbors(prev).next().unwrap()))
            };
            t = match edge {
                None => t.add_second(taxon.as_ref())?,
                Some(e) => t.insert_leaf(e, taxon.as_ref())?,
            };
        }
        Ok(t)
    }

    fn single(taxon: &str) -> Result<Self, PhyloError> {
        check_label(taxon, 0)?;
        let mut g = Graph::new();
        g.add_vertex(0);
        g.set_label(0, taxon.to_string()).unwrap();
        Self::from_graph(g)
    }

    fn add_second(&self, taxon: &str) -> Result<Self, PhyloError> {
        check_label(taxon, 0)?;
        if self.leaves.contains_key(taxon) {
            return Err(PhyloError::DuplicateLabel {
                pos: 0,
                label: taxon.into(),
            });
        }
        let mut g = self.graph.clone();
        let old = g.vertices().next().unwrap();
        let v = g.fresh_vertex();
        g.insert_edge(old, v);
        g.set_label(v, taxon.to_string()).unwrap();
        Self::from_graph(g)
    }

    /// Subdivides `edge` and hangs a new leaf off the subdivision vertex.
    pub fn insert_leaf(&self, edge: Edge, taxon: &str) -> Result<Self, PhyloError> {
        check_label(taxon, 0)?;
        if self.leaves.contains_key(taxon) {
            return Err(PhyloError::DuplicateLabel {
                pos: 0,
                label: taxon.into(),
            });
        }
        let (mut g, mid) = self
            .graph
            .subdivide_edge(edge)
            .map_err(|e| PhyloError::Invalid(e.to_string()))?;
        let v = g.fresh_vertex();
        g.insert_edge(mid, v);
        g.set_label(v, taxon.to_string()).unwrap();
        Self::from_graph(g)
    }

    /// Deletes a leaf and suppresses the vertex it hung from.
    pub fn remove_leaf(&self, taxon: &str) -> Result<Self, PhyloError> {
        let v = self
            .leaf(taxon)
            .ok_or_else(|| PhyloError::UnknownTaxon(taxon.into()))?;
        if self.num_taxa() == 1 {
            return Err(PhyloError::Invalid("cannot remove the last taxon".into()));
        }
        let mut g = self.graph.clone();
        let p = g.neighbors(v).next().unwrap();
        g.remove_vertex(v).unwrap();
        if g.label(p).is_none() {
            let nbrs: Vec<Vertex> = g.neighbors(p).collect();
            g.remove_vertex(p).unwrap();
            g.insert_edge(nbrs[0], nbrs[1]);
        }
        Self::from_graph(g)
    }

    /// Replaces the cherry `{x, y}` by one leaf labelled `x~y`.
    pub(crate) fn merge_cherry(&self, x: &str, y: &str) -> Result<Self, PhyloError> {
        let (vx, vy) = (
            self.leaf(x).ok_or_else(|| PhyloError::UnknownTaxon(x.into()))?,
            self.leaf(y).ok_or_else(|| PhyloError::UnknownTaxon(y.into()))?,
        );
        let p = self.parent(x).unwrap();
        if self.parent(y) != Some(p) || self.is_leaf(p) {
            return Err(PhyloError::Invalid(format!("{x} and {y} do not form a cherry")));
        }
        let mut g = self.graph.clone();
        g.remove_vertex(vx).unwrap();
        g.remove_vertex(vy).unwrap();
        g.set_label(p, join_labels(x, y)).unwrap();
        Self::from_graph(g)
    }

    /// Edges of the tree.
    pub fn edges(&self) -> Vec<Edge> {
        self.graph.edges().collect()
    }
}

/// Label-preserving isomorphism.
impl PartialEq for PhyloTree {
    fn eq(&self, other: &Self) -> bool {
        trees_equal(self, other).unwrap_or(false)
    }
}

impl Eq for PhyloTree {}

pub fn join_labels(x: &str, y: &str) -> String {
    let (a, b) = if x <= y { (x, y) } else { (y, x) };
    format!("{a}{SEPARATOR}{b}")
}

fn check_label(label: &str, pos: usize) -> Result<(), PhyloError> {
    if label.is_empty() {
        return Err(PhyloError::MissingLabel { pos });
    }
    if label.contains(SEPARATOR) {
        return Err(PhyloError::ReservedSeparator {
            pos,
            label: label.into(),
        });
    }
    Ok(())
}

/// Whether the trees are equal up to a label-preserving isomorphism.
/// Errors when the taxon sets differ.
pub fn trees_equal(t1: &PhyloTree, t2: &PhyloTree) -> Result<bool, PhyloError> {
    if t1.leaves.len() != t2.leaves.len() || !t1.leaves.keys().eq(t2.leaves.keys()) {
        return Err(PhyloError::TaxaMismatch);
    }
    Ok(serialize(t1) == serialize(t2))
}

/// Every unrooted binary tree on the taxa, by stepwise leaf insertion.
/// There are `(2n - 5)!!` of them for `n >= 3`.
pub fn all_trees<S: AsRef<str>>(taxa: &[S]) -> Result<Vec<PhyloTree>, PhyloError> {
    if taxa.len() <= 3 {
        return Ok(vec![PhyloTree::caterpillar(taxa)?]);
    }
    let mut trees = vec![PhyloTree::caterpillar(&taxa[..3])?];
    for taxon in &taxa[3..] {
        let mut next = Vec::with_capacity(trees.len() * (2 * trees[0].num_taxa() - 3));
        for t in &trees {
            for e in t.edges() {
                next.push(t.insert_leaf(e, taxon.as_ref())?);
            }
        }
        trees = next;
    }
    Ok(trees)
}

/// A uniformly random unrooted binary tree on the taxa.
pub fn random_tree<S: AsRef<str>, R: Rng>(taxa: &[S], rng: &mut R) -> Result<PhyloTree, PhyloError> {
    let mut order: Vec<&str> = taxa.iter().map(|s| s.as_ref()).collect();
    order.shuffle(rng);
    let n = order.len().min(3);
    let mut t = PhyloTree::caterpillar(&order[..n])?;
    for taxon in &order[n..] {
        let edges = t.edges();
        let e = edges[rng.gen_range(0..edges.len())];
        t = t.insert_leaf(e, taxon)?;
    }
    Ok(t)
}
