use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// Bags plus a tree over bag indices.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeDecomposition {
    pub bags: Vec<BTreeSet<Vertex>>,
    pub tree_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("tree edge ({0}, {1}) references a missing bag")]
    DanglingEdge(usize, usize),
    #[error("tree edge ({0}, {0}) is a loop")]
    Loop(usize),
    #[error("bag graph is not a tree: {bags} bags, {edges} edges, {components} components")]
    NotATree {
        bags: usize,
        edges: usize,
        components: usize,
    },
    #[error("decomposition has no bags but the graph has vertices")]
    Empty,
}

/// Which of the three decomposition axioms a violation breaks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axiom {
    /// Vertex coverage.
    Tw1,
    /// Edge coverage.
    Tw2,
    /// Running intersection.
    Tw3,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Axiom::Tw1 => "tw1",
            Axiom::Tw2 => "tw2",
            Axiom::Tw3 => "tw3",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Violation {
    /// A graph vertex that appears in no bag.
    UncoveredVertex(Vertex),
    /// A bag member that is not a vertex of the graph.
    ForeignVertex(Vertex),
    /// An edge whose endpoints never share a bag.
    UncoveredEdge(Vertex, Vertex),
    /// A vertex whose bags induce a disconnected subforest.
    DisconnectedVertex(Vertex),
}

impl Violation {
    pub fn axiom(&self) -> Axiom {
        match self {
            Violation::UncoveredVertex(_) | Violation::ForeignVertex(_) => Axiom::Tw1,
            Violation::UncoveredEdge(..) => Axiom::Tw2,
            Violation::DisconnectedVertex(_) => Axiom::Tw3,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::UncoveredVertex(v) => write!(f, "tw1: vertex {v} is in no bag"),
            Violation::ForeignVertex(v) => write!(f, "tw1: bag member {v} is not a graph vertex"),
            Violation::UncoveredEdge(u, v) => write!(f, "tw2: edge {{{u}, {v}}} is in no bag"),
            Violation::DisconnectedVertex(v) => {
                write!(f, "tw3: bags containing vertex {v} are not connected")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl TreeDecomposition {
    pub fn new() -> Self {
        Self::default()
    }

    /// One bag holding every vertex.
    pub fn trivial(g: &Graph) -> Self {
        let mut td = Self::new();
        td.add_bag(g.vertex_set());
        td
    }

    pub fn add_bag(&mut self, bag: BTreeSet<Vertex>) -> usize {
        self.bags.push(bag);
        self.bags.len() - 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        self.tree_edges.push((i, j));
    }

    /// Largest bag size minus one (zero for an empty decomposition).
    pub fn width(&self) -> usize {
        self.bags.iter().map(BTreeSet::len).max().unwrap_or(1).saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.bags.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bags.is_empty()
    }

    /// First bag that contains every vertex of `set`.
    pub fn bag_containing(&self, set: &[Vertex]) -> Option<usize> {
        self.bags
            .iter()
            .position(|bag| set.iter().all(|v| bag.contains(v)))
    }

    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.bags.len()];
        for &(i, j) in &self.tree_edges {
            if i < adj.len() && j < adj.len() {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
        adj
    }

    pub fn check_structure(&self) -> Result<(), StructureError> {
        let n = self.bags.len();
        for &(i, j) in &self.tree_edges {
            if i >= n || j >= n {
                return Err(StructureError::DanglingEdge(i, j));
            }
            if i == j {
                return Err(StructureError::Loop(i));
            }
        }
        if n == 0 {
            return if self.tree_edges.is_empty() {
                Ok(())
            } else {
                Err(StructureError::NotATree {
                    bags: 0,
                    edges: self.tree_edges.len(),
                    components: 0,
                })
            };
        }
        let components = count_components(&self.adjacency(), |_| true);
        if components != 1 || self.tree_edges.len() != n - 1 {
            return Err(StructureError::NotATree {
                bags: n,
                edges: self.tree_edges.len(),
                components,
            });
        }
        Ok(())
    }

    /// Relabels vertices through `map`; unmapped vertices are kept.
    pub fn relabel(&self, map: &BTreeMap<Vertex, Vertex>) -> TreeDecomposition {
        TreeDecomposition {
            bags: self
                .bags
                .iter()
                .map(|bag| bag.iter().map(|v| *map.get(v).unwrap_or(v)).collect())
                .collect(),
            tree_edges: self.tree_edges.clone(),
        }
    }

    /// Builds the decomposition induced by eliminating vertices in `order`.
    ///
    /// `order` must list every vertex of `g` exactly once.
    pub fn from_elimination_order(g: &Graph, order: &[Vertex]) -> TreeDecomposition {
        assert_eq!(order.len(), g.num_vertices(), "order must cover the graph");
        let position: BTreeMap<Vertex, usize> =
            order.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
            .vertices()
            .map(|v| (v, g.neighbors(v).collect()))
            .collect();
        let mut td = TreeDecomposition::new();
        let mut later: Vec<BTreeSet<Vertex>> = Vec::with_capacity(order.len());
        for &v in order {
            let nbrs = adj.remove(&v).unwrap_or_default();
            for &a in &nbrs {
                let entry = adj.get_mut(&a).unwrap();
                entry.remove(&v);
                entry.extend(nbrs.iter().copied().filter(|&b| b != a));
            }
            let mut bag = nbrs.clone();
            bag.insert(v);
            td.add_bag(bag);
            later.push(nbrs);
        }
        let mut roots = Vec::new();
        for (i, nbrs) in later.iter().enumerate() {
            match nbrs.iter().map(|v| position[v]).min() {
                Some(p) => td.add_edge(i, p),
                None => roots.push(i),
            }
        }
        for w in roots.windows(2) {
            td.add_edge(w[0], w[1]);
        }
        td.simplify()
    }

    /// Contracts tree edges whose one bag is a subset of the other.
    pub fn simplify(&self) -> TreeDecomposition {
        let n = self.bags.len();
        if n <= 1 {
            return self.clone();
        }
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while parent[r] != r {
                r = parent[r];
            }
            let mut y = x;
            while parent[y] != r {
                let next = parent[y];
                parent[y] = r;
                y = next;
            }
            r
        }
        let mut bags = self.bags.clone();
        let mut edges = self.tree_edges.clone();
        loop {
            let mut merged = false;
            for &(i, j) in &edges {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri == rj {
                    continue;
                }
                if bags[ri].is_subset(&bags[rj]) {
                    parent[ri] = rj;
                    merged = true;
                } else if bags[rj].is_subset(&bags[ri]) {
                    parent[rj] = ri;
                    merged = true;
                }
            }
            if !merged {
                break;
            }
            edges.retain(|&(i, j)| find(&mut parent, i) != find(&mut parent, j));
        }
        let mut index = BTreeMap::new();
        let mut out = TreeDecomposition::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            if r == i {
                index.insert(i, out.add_bag(std::mem::take(&mut bags[i])));
            }
        }
        for (i, j) in edges {
            let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
            out.add_edge(index[&ri], index[&rj]);
        }
        out
    }
}

fn count_components(adj: &[Vec<usize>], keep: impl Fn(usize) -> bool) -> usize {
    let mut seen = vec![false; adj.len()];
    let mut count = 0;
    for s in 0..adj.len() {
        if seen[s] || !keep(s) {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if !seen[y] && keep(y) {
                    seen[y] = true;
                    queue.push_back(y);
                }
            }
        }
    }
    count
}

/// Checks coverage of vertices and edges and the running intersection
/// property, reporting every violation found.
pub fn validate(g: &Graph, td: &TreeDecomposition) -> Result<ValidationReport, StructureError> {
    td.check_structure()?;
    if td.is_empty() && !g.is_empty() {
        return Err(StructureError::Empty);
    }
    let mut occurrences: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    for (i, bag) in td.bags.iter().enumerate() {
        for &v in bag {
            occurrences.entry(v).or_default().push(i);
        }
    }
    let mut violations = Vec::new();
    for v in g.vertices() {
        if !occurrences.contains_key(&v) {
            violations.push(Violation::UncoveredVertex(v));
        }
    }
    for &v in occurrences.keys() {
        if !g.contains(v) {
            violations.push(Violation::ForeignVertex(v));
        }
    }
    for (u, v) in g.edges() {
        let covered = occurrences.get(&u).is_some_and(|bags| {
            bags.iter().any(|&i| td.bags[i].contains(&v))
        });
        if !covered {
            violations.push(Violation::UncoveredEdge(u, v));
        }
    }
    let adj = td.adjacency();
    for (&v, bags) in &occurrences {
        let members: BTreeSet<usize> = bags.iter().copied().collect();
        if count_components(&adj, |i| members.contains(&i)) > 1 {
            violations.push(Violation::DisconnectedVertex(v));
        }
    }
    Ok(ValidationReport {
        ok: violations.is_empty(),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    fn bags(sets: &[&[Vertex]]) -> Vec<BTreeSet<Vertex>> {
        sets.iter().map(|s| s.iter().copied().collect()).collect()
    }

    #[test]
    fn trivial_decomposition_is_valid() {
        let g = families::petersen();
        let td = TreeDecomposition::trivial(&g);
        let report = validate(&g, &td).unwrap();
        assert!(report.ok);
        assert_eq!(td.width(), 9);
    }

    #[test]
    fn missing_vertex_is_tw1() {
        let g = families::path(3);
        let td = TreeDecomposition {
            bags: bags(&[&[0, 1], &[1]]),
            tree_edges: vec![(0, 1)],
        };
        let report = validate(&g, &td).unwrap();
        assert!(!report.ok);
        assert!(report.violations.contains(&Violation::UncoveredVertex(2)));
        assert!(report.violations.contains(&Violation::UncoveredEdge(1, 2)));
    }

    #[test]
    fn split_occurrence_is_tw3() {
        // path 1-2-3; vertex 3 sits in the two outer bags of a bag path only
        let g = Graph::from_edges([(1, 2), (2, 3)]).unwrap();
        let td = TreeDecomposition {
            bags: bags(&[&[1, 2, 3], &[2], &[2, 3]]),
            tree_edges: vec![(0, 1), (1, 2)],
        };
        let report = validate(&g, &td).unwrap();
        assert_eq!(report.violations, vec![Violation::DisconnectedVertex(3)]);
        assert_eq!(report.violations[0].axiom(), Axiom::Tw3);
    }

    #[test]
    fn non_tree_is_structural() {
        let g = families::cycle(3);
        let td = TreeDecomposition {
            bags: bags(&[&[0, 1], &[1, 2], &[0, 2]]),
            tree_edges: vec![(0, 1), (1, 2), (2, 0)],
        };
        assert!(matches!(
            validate(&g, &td),
            Err(StructureError::NotATree { edges: 3, .. })
        ));
        let forest = TreeDecomposition {
            bags: bags(&[&[0, 1, 2], &[0]]),
            tree_edges: vec![],
        };
        assert!(validate(&g, &forest).is_err());
    }

    #[test]
    fn elimination_order_decomposition() {
        let g = families::cycle(6);
        let order: Vec<Vertex> = (0..6).collect();
        let td = TreeDecomposition::from_elimination_order(&g, &order);
        assert!(validate(&g, &td).unwrap().ok);
        assert_eq!(td.width(), 2);
    }
}
