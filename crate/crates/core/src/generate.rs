//! Seeded random instances: hosts of bounded treewidth with planted ladders.

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::{Graph, Vertex};
use crate::ladder::Ladder;

/// Random connected partial `k`-tree on `n` vertices: a random `k`-tree
/// with each non-spanning-tree edge kept with probability `keep`.
pub fn partial_ktree<R: Rng>(n: usize, k: usize, keep: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    let k = k.min(n.saturating_sub(1));
    let mut cliques: Vec<Vec<Vertex>> = vec![(0..=k.min(n.saturating_sub(1))).collect()];
    let mut edges = Vec::new();
    for i in 0..=k {
        for j in 0..i {
            edges.push((j, i));
        }
    }
    for v in k + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        let drop = rng.gen_range(0..base.len());
        let mut clique: Vec<Vertex> = base.iter().copied().filter(|&w| w != base[drop]).collect();
        if k == 0 {
            clique.clear();
        }
        for &w in &clique {
            edges.push((w, v));
        }
        clique.push(v);
        cliques.push(clique);
    }
    // a spanning tree taken from the k-tree keeps the result connected
    let mut parent_edge = vec![None; n];
    for &(u, v) in &edges {
        let hi = u.max(v);
        if parent_edge[hi].is_none() {
            parent_edge[hi] = Some((u.min(v), hi));
        }
    }
    for &(u, v) in &edges {
        let tree = parent_edge[v.max(u)] == Some((u.min(v), u.max(v)));
        if tree || rng.gen_bool(keep) {
            g.insert_edge(u, v);
        }
    }
    g
}

/// How the cornerpoints of a planted ladder meet the host.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attachment {
    /// Every cornerpoint gets one or two host neighbours.
    Free,
    /// As `Free`, but the cornerpoint `c` gets none.
    DegreeTwoCorner,
    /// `a, b` attach to the host and `c, d` to a second host, so the rail
    /// edges of every square form an edge cut.
    Disconnecting,
}

/// Adds a ladder of `length` squares to `host`; returns the new graph and
/// the ladder. `second` is the far-side host for
/// [`Attachment::Disconnecting`] (ignored otherwise).
pub fn plant_ladder<R: Rng>(
    host: &Graph,
    second: Option<&Graph>,
    length: usize,
    attachment: Attachment,
    rng: &mut R,
) -> (Graph, Ladder) {
    let mut g = host.clone();
    let near: Vec<Vertex> = host.vertices().collect();
    let far: Vec<Vertex> = match (attachment, second) {
        (Attachment::Disconnecting, Some(other)) => {
            let offset = g.next_id();
            for v in other.vertices() {
                g.add_vertex(v + offset);
            }
            for (u, v) in other.edges() {
                g.insert_edge(u + offset, v + offset);
            }
            other.vertices().map(|v| v + offset).collect()
        }
        _ => near.clone(),
    };
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for i in 0..=length {
        let t = g.fresh_vertex();
        let b = g.fresh_vertex();
        g.insert_edge(t, b);
        if i > 0 {
            g.insert_edge(top[i - 1], t);
            g.insert_edge(bottom[i - 1], b);
        }
        top.push(t);
        bottom.push(b);
    }
    let ladder = Ladder { top, bottom };
    let [a, b, c, d] = ladder.corners();
    let mut attach = |corner: Vertex, pool: &[Vertex], g: &mut Graph| {
        let count = if pool.len() > 1 && rng.gen_bool(0.3) { 2 } else { 1 };
        for &h in pool.choose_multiple(rng, count) {
            g.insert_edge(corner, h);
        }
    };
    attach(a, &near, &mut g);
    attach(b, &near, &mut g);
    if attachment != Attachment::DegreeTwoCorner {
        attach(c, &far, &mut g);
    }
    attach(d, &far, &mut g);
    (g, ladder)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::exact_treewidth;
    use crate::ladder::{classify, verify};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn partial_ktrees_are_connected_and_bounded() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in [1, 2, 5, 12] {
            for k in 1..=4 {
                let g = partial_ktree(n, k, 0.6, &mut rng);
                assert_eq!(g.num_vertices(), n);
                assert!(g.is_connected());
                assert!(exact_treewidth(&g).unwrap().width <= k);
            }
        }
    }

    #[test]
    fn planted_ladders_classify_as_asked() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let host = partial_ktree(6, 2, 0.5, &mut rng);
            let other = partial_ktree(4, 2, 0.5, &mut rng);
            let (g, l) = plant_ladder(&host, None, 5, Attachment::Free, &mut rng);
            verify(&g, &l).unwrap();
            let class = classify(&g, &l).unwrap();
            assert!(!class.disconnecting);
            let (g, l) = plant_ladder(&host, Some(&other), 5, Attachment::Disconnecting, &mut rng);
            assert!(classify(&g, &l).unwrap().disconnecting);
            let (g, l) = plant_ladder(&host, None, 5, Attachment::DegreeTwoCorner, &mut rng);
            let class = classify(&g, &l).unwrap();
            assert!(class.degree2_cornerpoints.contains(&l.corners()[2]));
        }
    }
}
