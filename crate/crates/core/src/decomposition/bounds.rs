//! Elimination heuristics and cheap lower bounds.

use std::collections::{BTreeMap, BTreeSet};

use crate::graph::{Graph, Vertex};

use super::td::TreeDecomposition;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Heuristic {
    MinFill,
    MinDegree,
}

/// Greedy elimination order. Ties go to the lowest vertex id.
pub fn elimination_order(g: &Graph, heuristic: Heuristic) -> (Vec<Vertex>, usize) {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| (v, g.neighbors(v).collect()))
        .collect();
    let mut order = Vec::with_capacity(adj.len());
    let mut width = 0;
    while !adj.is_empty() {
        let score = |v: &Vertex, adj: &BTreeMap<Vertex, BTreeSet<Vertex>>| -> usize {
            let nbrs = &adj[v];
            match heuristic {
                Heuristic::MinDegree => nbrs.len(),
                Heuristic::MinFill => {
                    let mut missing = 0;
                    for &a in nbrs {
                        for &b in nbrs.range(a + 1..) {
                            if !adj[&a].contains(&b) {
                                missing += 1;
                            }
                        }
                    }
                    missing
                }
            }
        };
        let v = *adj
            .keys()
            .min_by_key(|v| (score(v, &adj), adj[*v].len(), **v))
            .unwrap();
        let nbrs = adj.remove(&v).unwrap();
        width = width.max(nbrs.len());
        for &a in &nbrs {
            let entry = adj.get_mut(&a).unwrap();
            entry.remove(&v);
            entry.extend(nbrs.iter().copied().filter(|&b| b != a));
        }
        order.push(v);
    }
    (order, width)
}

/// Best of the min-fill and min-degree decompositions.
pub fn upper_bound_heuristic(g: &Graph) -> TreeDecomposition {
    let (fill, wf) = elimination_order(g, Heuristic::MinFill);
    let (deg, wd) = elimination_order(g, Heuristic::MinDegree);
    let order = if wd < wf { deg } else { fill };
    TreeDecomposition::from_elimination_order(g, &order)
}

/// Maximum over subgraphs of the minimum degree.
pub fn degeneracy(g: &Graph) -> usize {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| (v, g.neighbors(v).collect()))
        .collect();
    let mut best = 0;
    while let Some((&v, nbrs)) = adj.iter().min_by_key(|(v, n)| (n.len(), **v)) {
        best = best.max(nbrs.len());
        let nbrs = nbrs.clone();
        adj.remove(&v);
        for a in nbrs {
            adj.get_mut(&a).unwrap().remove(&v);
        }
    }
    best
}

/// Minor-min-width: repeatedly contract a minimum-degree vertex into its
/// minimum-degree neighbour, recording the largest minimum degree seen.
pub fn minor_min_width(g: &Graph) -> usize {
    let mut adj: BTreeMap<Vertex, BTreeSet<Vertex>> = g
        .vertices()
        .map(|v| (v, g.neighbors(v).collect()))
        .collect();
    let mut best = 0;
    while adj.len() > 1 {
        let (&v, nbrs) = adj.iter().min_by_key(|(v, n)| (n.len(), **v)).unwrap();
        best = best.max(nbrs.len());
        if nbrs.is_empty() {
            adj.remove(&v);
            continue;
        }
        let u = *nbrs
            .iter()
            .min_by_key(|u| (adj[*u].len(), **u))
            .unwrap();
        let moved = adj.remove(&v).unwrap();
        for a in moved {
            let entry = adj.get_mut(&a).unwrap();
            entry.remove(&v);
            if a != u {
                entry.insert(u);
                adj.get_mut(&u).unwrap().insert(a);
            }
        }
    }
    best
}

/// Vertices of a maximum clique (exhaustive; meant for small graphs).
pub fn max_clique(g: &Graph) -> BTreeSet<Vertex> {
    fn expand(
        g: &Graph,
        current: &mut Vec<Vertex>,
        candidates: BTreeSet<Vertex>,
        best: &mut Vec<Vertex>,
    ) {
        if current.len() + candidates.len() <= best.len() {
            return;
        }
        if candidates.is_empty() {
            *best = current.clone();
            return;
        }
        let mut rest = candidates;
        while let Some(&v) = rest.iter().next() {
            if current.len() + rest.len() <= best.len() {
                return;
            }
            rest.remove(&v);
            let next = rest
                .iter()
                .copied()
                .filter(|&w| g.has_edge(v, w))
                .collect();
            current.push(v);
            expand(g, current, next, best);
            current.pop();
        }
    }
    let mut best = Vec::new();
    expand(g, &mut Vec::new(), g.vertex_set(), &mut best);
    best.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::td::validate;
    use crate::graph::families;

    #[test]
    fn heuristics_on_small_families() {
        let tree = families::star(5);
        let td = upper_bound_heuristic(&tree);
        assert_eq!(td.width(), 1);
        assert!(validate(&tree, &td).unwrap().ok);
        let cycle = families::cycle(7);
        assert_eq!(upper_bound_heuristic(&cycle).width(), 2);
    }

    #[test]
    fn lower_bounds() {
        assert_eq!(degeneracy(&families::complete(5)), 4);
        assert_eq!(minor_min_width(&families::complete(5)), 4);
        assert_eq!(degeneracy(&families::path(6)), 1);
        assert_eq!(minor_min_width(&families::cycle(6)), 2);
        assert_eq!(max_clique(&families::petersen()).len(), 2);
        assert_eq!(max_clique(&families::complete(6)).len(), 6);
    }
}
