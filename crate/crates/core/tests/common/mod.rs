//! Brute-force oracles shared by the integration tests. They only use the
//! public graph API and none of the solver code.
#![allow(dead_code)]

use std::collections::BTreeMap;

use laddertw::Graph;
use rand::Rng;

/// Adjacency bitmasks over vertex positions `0..n` in ascending id order.
pub fn masks(g: &Graph) -> Vec<u32> {
    let ids: Vec<_> = g.vertices().collect();
    assert!(ids.len() <= 32);
    let pos: BTreeMap<_, _> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    ids.iter()
        .map(|&v| g.neighbors(v).fold(0u32, |m, w| m | 1 << pos[&w]))
        .collect()
}

/// Treewidth as the minimum over all elimination orderings of the largest
/// neighbourhood met while eliminating. Orders whose width already reaches
/// the best found are cut off, which never changes the minimum.
pub fn naive_treewidth(g: &Graph) -> usize {
    fn go(adj: &mut Vec<u32>, alive: u32, sofar: usize, best: &mut usize) {
        if alive == 0 {
            *best = (*best).min(sofar);
            return;
        }
        let mut rest = alive;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let nb = adj[v] & alive & !(1 << v);
            let w = sofar.max(nb.count_ones() as usize);
            if w >= *best {
                continue;
            }
            let saved = adj.clone();
            let mut m = nb;
            while m != 0 {
                let u = m.trailing_zeros() as usize;
                m &= m - 1;
                adj[u] |= nb & !(1 << u);
            }
            go(adj, alive & !(1 << v), w, best);
            *adj = saved;
        }
    }
    let n = g.num_vertices();
    if n == 0 {
        return 0;
    }
    let mut adj = masks(g);
    let mut best = n - 1;
    let alive = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    go(&mut adj, alive, 0, &mut best);
    best
}

/// Treewidth by dynamic programming over vertex subsets: the cost of
/// eliminating `S` first is the minimum over its last vertex `v` of the cost
/// of `S - v` and the number of vertices outside `S` reachable from `v`
/// through `S - v`.
pub fn subset_dp_treewidth(g: &Graph) -> usize {
    let n = g.num_vertices();
    assert!(n <= 20, "subset oracle is exponential");
    if n == 0 {
        return 0;
    }
    let adj = masks(g);
    let full = (1u32 << n) - 1;
    let q = |s: u32, v: usize| -> u32 {
        // vertices outside s + v adjacent to the component of v in s + v
        let mut seen = 1u32 << v;
        let mut frontier = 1u32 << v;
        let mut out = 0u32;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let nb = adj[x] & !seen;
            out |= nb & !s;
            let inside = nb & s;
            seen |= inside;
            frontier |= inside;
        }
        out & !(1 << v) & full
    };
    let mut tw = vec![usize::MAX; 1 << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = usize::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let cost = tw[without as usize].max(q(without, v).count_ones() as usize);
            best = best.min(cost);
        }
        tw[s as usize] = best;
    }
    tw[full as usize]
}

/// Random connected graph on `n` vertices: a random spanning tree plus each
/// other pair with probability `p`.
pub fn random_connected<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new();
    for v in 0..n {
        g.add_vertex(v);
    }
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v).unwrap();
    }
    for v in 0..n {
        for u in 0..v {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random recursive tree: each vertex attaches to an earlier one.
pub fn random_tree_graph<R: Rng>(n: usize, rng: &mut R) -> Graph {
    random_connected(n, 0.0, rng)
}
