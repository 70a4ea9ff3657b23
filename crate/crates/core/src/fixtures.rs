//! Hand-built graphs with known decompositions, shared by tests and tools.

use std::collections::BTreeSet;

use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, Vertex};
use crate::ladder::Ladder;

/// A length-3 ladder `a u w c / b v x d` whose cornerpoints meet an apex
/// `p`, with `p` inside a `K5`. Returns the graph, the ladder, a width-4
/// decomposition, and the index of a bag holding the square `{u, v, w, x}`.
pub fn width4_square() -> (Graph, Ladder, TreeDecomposition, usize) {
    let (a, u, w, c) = (0, 1, 2, 3);
    let (b, v, x, d) = (4, 5, 6, 7);
    let p = 8;
    let q = [9, 10, 11, 12];
    let mut edges: Vec<(Vertex, Vertex)> = vec![
        (a, u), (u, w), (w, c),
        (b, v), (v, x), (x, d),
        (a, b), (u, v), (w, x), (c, d),
        (p, a), (p, b), (p, c), (p, d),
    ];
    let clique: Vec<Vertex> = std::iter::once(p).chain(q).collect();
    for i in 0..clique.len() {
        for j in 0..i {
            edges.push((clique[j], clique[i]));
        }
    }
    let g = Graph::from_edges(edges).expect("fixture is simple");
    let ladder = Ladder::new(vec![a, u, w, c], vec![b, v, x, d]).expect("fixture ladder");
    let bags: Vec<BTreeSet<Vertex>> = vec![
        clique.iter().copied().collect(),
        BTreeSet::from([p, a, b, c, d]),
        BTreeSet::from([a, b, c, d, u]),
        BTreeSet::from([b, c, d, u, v]),
        BTreeSet::from([c, d, u, v, x]),
        BTreeSet::from([c, u, v, x, w]),
    ];
    let td = TreeDecomposition {
        bags,
        tree_edges: vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)],
    };
    (g, ladder, td, 5)
}
