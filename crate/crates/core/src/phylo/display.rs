//! Display graphs: two trees glued along their equally labelled leaves.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{Graph, Vertex};

use super::{PhyloError, PhyloTree};

/// Where a display-graph vertex came from: `tree` is 1 or 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Origin {
    pub tree: u8,
    pub vertex: Vertex,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisplayGraph {
    /// Leaf vertices carry their taxon as label.
    pub graph: Graph,
    pub provenance: BTreeMap<Vertex, Vec<Origin>>,
    /// Taxa whose identified vertex was suppressed, in suppression order.
    pub suppressed: Vec<String>,
}

/// Identified leaves get ids `0..n` in taxon order, followed by the
/// internal vertices of the first tree and then of the second.
///
/// With `suppress`, identified leaves of degree 2 are replaced by an edge
/// between their two neighbours where that keeps the treewidth.
pub fn display_graph(t1: &PhyloTree, t2: &PhyloTree, suppress: bool) -> Result<DisplayGraph, PhyloError> {
    if t1.leaves.len() != t2.leaves.len() || !t1.leaves.keys().eq(t2.leaves.keys()) {
        return Err(PhyloError::TaxaMismatch);
    }
    let mut g = Graph::new();
    let mut provenance: BTreeMap<Vertex, Vec<Origin>> = BTreeMap::new();
    let mut maps: [BTreeMap<Vertex, Vertex>; 2] = Default::default();
    for (i, (taxon, &v1)) in t1.leaves.iter().enumerate() {
        let v2 = t2.leaves[taxon];
        g.add_vertex(i);
        g.set_label(i, taxon.clone()).unwrap();
        maps[0].insert(v1, i);
        maps[1].insert(v2, i);
        provenance.insert(
            i,
            vec![Origin { tree: 1, vertex: v1 }, Origin { tree: 2, vertex: v2 }],
        );
    }
    for (side, t) in [t1, t2].into_iter().enumerate() {
        for v in t.graph.vertices().filter(|&v| !t.is_leaf(v)) {
            let id = g.fresh_vertex();
            maps[side].insert(v, id);
            provenance.insert(
                id,
                vec![Origin {
                    tree: side as u8 + 1,
                    vertex: v,
                }],
            );
        }
        for (u, v) in t.graph.edges() {
            g.insert_edge(maps[side][&u], maps[side][&v]);
        }
    }
    let mut suppressed = Vec::new();
    if suppress {
        for i in 0..t1.num_taxa() {
            if g.degree(i) != 2 {
                continue;
            }
            let label = g.label(i).unwrap().to_string();
            if let Ok(h) = g.suppress_degree2(i) {
                g = h;
                provenance.remove(&i);
                suppressed.push(label);
            }
        }
    }
    Ok(DisplayGraph {
        graph: g,
        provenance,
        suppressed,
    })
}
