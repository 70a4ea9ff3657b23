//! Tree decompositions: validation, exact treewidth and bounds.

pub mod bounds;
pub mod exact;
pub mod td;

pub use bounds::upper_bound_heuristic;
pub use exact::{exact_treewidth, exact_treewidth_with, Budget, ExactOptions, Solution, Unknown};
pub use td::{validate, Axiom, StructureError, TreeDecomposition, ValidationReport, Violation};

use crate::graph::Graph;
use crate::ladder;

/// Largest clique size checked exhaustively by [`lower_bound`].
const CLIQUE_SEARCH_LIMIT: usize = 40;

/// A treewidth lower bound: the best of degeneracy, minor-min-width, a
/// clique search on small graphs, and the rule that a non-disconnecting
/// ladder of length at least 2 forces treewidth 3.
pub fn lower_bound(g: &Graph) -> usize {
    let mut best = bounds::degeneracy(g).max(bounds::minor_min_width(g));
    if g.num_vertices() <= CLIQUE_SEARCH_LIMIT {
        best = best.max(bounds::max_clique(g).len().saturating_sub(1));
    }
    if best < 3 && ladder::certifies_tw3(g).is_some() {
        best = 3;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families;

    #[test]
    fn lower_bound_examples() {
        assert!(lower_bound(&families::complete(5)) >= 4);
        assert_eq!(lower_bound(&families::star(4)), 1);
        // 2x3 grid plus an apex over its corners
        let mut g = families::ladder_grid(3);
        for c in [0, 2, 3, 5] {
            g.insert_edge(6, c);
        }
        assert!(lower_bound(&g) >= 3);
    }
}
