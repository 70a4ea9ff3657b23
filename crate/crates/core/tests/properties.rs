mod common;

use std::collections::BTreeSet;

use laddertw::decomposition::{exact_treewidth, lower_bound, upper_bound_heuristic, validate};
use laddertw::graph::Graph;
use laddertw::io::{read_gr, read_td, write_gr, write_td};
use laddertw::ladder::{self, find_ladders};
use laddertw::phylo::{self, display_graph, find_common_chains, is_chain, PhyloTree};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{naive_treewidth, random_connected};

/// Graphs on up to `max_n` vertices given by an edge bitmask.
fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new();
            for v in 0..n {
                g.add_vertex(v);
            }
            let mut k = 0;
            for v in 0..n {
                for u in 0..v {
                    if bits[k] {
                        g.add_edge(u, v).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn tw(g: &Graph) -> usize {
    exact_treewidth(g).unwrap().width
}

fn tree(n: usize) -> impl Strategy<Value = PhyloTree> {
    any::<u64>().prop_map(move |seed| {
        let taxa: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        phylo::random_tree(&taxa, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn exact_matches_all_orderings(g in graph(7)) {
        prop_assert_eq!(tw(&g), naive_treewidth(&g));
    }

    #[test]
    fn bounds_sandwich_the_exact_width(g in graph(9)) {
        let sol = exact_treewidth(&g).unwrap();
        let report = validate(&g, &sol.decomposition).unwrap();
        prop_assert!(report.ok);
        prop_assert_eq!(sol.decomposition.width(), sol.width);
        prop_assert!(lower_bound(&g) <= sol.width);
        let ub = upper_bound_heuristic(&g);
        prop_assert!(validate(&g, &ub).unwrap().ok);
        prop_assert!(sol.width <= ub.width());
    }

    #[test]
    fn minors_never_widen(g in graph(8), pick in any::<prop::sample::Index>()) {
        let edges: Vec<_> = g.edges().collect();
        prop_assume!(!edges.is_empty());
        let e = edges[pick.index(edges.len())];
        let w = tw(&g);
        prop_assert!(tw(&g.without_edge(e).unwrap()) <= w);
        prop_assert!(tw(&g.contract_edge(e).unwrap()) <= w);
        prop_assert!(tw(&g.without_vertex(e.0).unwrap()) <= w);
    }

    #[test]
    fn subdivision_keeps_the_width(g in graph(8), pick in any::<prop::sample::Index>()) {
        let edges: Vec<_> = g.edges().collect();
        prop_assume!(!edges.is_empty());
        let e = edges[pick.index(edges.len())];
        let (h, v) = g.subdivide_edge(e).unwrap();
        prop_assert_eq!(tw(&h), tw(&g));
        // suppressing the new vertex gives the original graph back
        prop_assert_eq!(h.suppress_degree2(v).unwrap(), g);
    }

    #[test]
    fn edge_cuts_match_component_counts(g in graph(8), picks in proptest::collection::vec(any::<prop::sample::Index>(), 1..4)) {
        let edges: Vec<_> = g.edges().collect();
        prop_assume!(!edges.is_empty());
        let chosen: BTreeSet<_> = picks.iter().map(|i| edges[i.index(edges.len())]).collect();
        let chosen: Vec<_> = chosen.into_iter().collect();
        let mut h = g.clone();
        for &(u, v) in &chosen {
            h.remove_edge(u, v).unwrap();
        }
        let cut = g.is_edge_cut(&chosen).unwrap();
        prop_assert_eq!(cut.is_some(), h.components().len() > g.components().len());
    }

    #[test]
    fn text_formats_round_trip(g in graph(10)) {
        let text = write_gr(&g);
        let back = read_gr(&text).unwrap();
        prop_assert_eq!(&back, &g);
        let td = exact_treewidth(&g).unwrap().decomposition;
        let (td2, n) = read_td(&write_td(&td, &g)).unwrap();
        prop_assert_eq!(n, g.num_vertices());
        prop_assert!(validate(&back, &td2).unwrap().ok);
        prop_assert_eq!(td2.width(), td.width());
    }

    #[test]
    fn newick_round_trips(t in (4usize..12).prop_flat_map(tree)) {
        let text = phylo::serialize(&t);
        let back = phylo::parse_newick(&text).unwrap();
        prop_assert!(phylo::trees_equal(&t, &back).unwrap());
        prop_assert_eq!(phylo::serialize(&back), text);
    }

    #[test]
    fn chains_match_tree_paths(t in (4usize..9).prop_flat_map(tree), seed in any::<u64>(), len in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut taxa: Vec<String> = t.taxa().into_iter().collect();
        rand::seq::SliceRandom::shuffle(taxa.as_mut_slice(), &mut rng);
        taxa.truncate(len.min(taxa.len()));
        prop_assert_eq!(is_chain(&t, &taxa), brute_chain(&t, &taxa));
    }

    #[test]
    fn long_common_chains_are_ladders(t1 in tree(9), seed in any::<u64>()) {
        // the second tree moves one leaf of the first
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let taxa: Vec<String> = t1.taxa().into_iter().collect();
        let x = &taxa[rng.gen_range(0..taxa.len())];
        let rest = t1.remove_leaf(x).unwrap();
        let edges = rest.edges();
        let t2 = rest.insert_leaf(edges[rng.gen_range(0..edges.len())], x).unwrap();
        let d = display_graph(&t1, &t2, true).unwrap();
        for chain in find_common_chains(&t1, &t2).unwrap() {
            let n = chain.taxa.len();
            if n < 5 {
                continue;
            }
            // interior taxa become the rungs between their two parents
            prop_assert!(find_ladders(&d.graph, n - 3).iter().any(|l| l.length() >= n - 3));
        }
    }
}

/// Chain check from scratch: the parents, with repeated neighbours merged,
/// must be exactly the tree path between the first and last parent, and no
/// interior parent may repeat.
fn brute_chain(t: &PhyloTree, seq: &[String]) -> bool {
    let g = t.graph();
    let parent = |x: &String| {
        let leaf = g.vertex_by_label(x).unwrap();
        g.neighbors(leaf).next().unwrap()
    };
    let ps: Vec<_> = seq.iter().map(parent).collect();
    let n = ps.len();
    if n > 2 && ps[1..n - 1].iter().collect::<BTreeSet<_>>().len() != n - 2 {
        return false;
    }
    let mut walk = ps.clone();
    walk.dedup();
    // tree path between the ends by depth-first search
    fn path(g: &Graph, from: usize, to: usize, prev: Option<usize>, acc: &mut Vec<usize>) -> bool {
        acc.push(from);
        if from == to {
            return true;
        }
        for w in g.neighbors(from) {
            if Some(w) != prev && g.degree(w) > 1 && path(g, w, to, Some(from), acc) {
                return true;
            }
        }
        acc.pop();
        false
    }
    let mut p = Vec::new();
    path(g, ps[0], ps[n - 1], None, &mut p);
    walk == p
}

#[test]
fn distinct_trees_have_wide_display_graphs() {
    for n in 4..=6 {
        let taxa: Vec<String> = (0..n).map(|i| format!("t{i}")).collect();
        let trees = phylo::all_trees(&taxa).unwrap();
        for (i, a) in trees.iter().enumerate() {
            for b in &trees[i..] {
                let d = display_graph(a, b, false).unwrap();
                let w = tw(&d.graph);
                if phylo::trees_equal(a, b).unwrap() {
                    assert_eq!(w, 2);
                } else {
                    assert!(w >= 3, "{} {}", phylo::serialize(a), phylo::serialize(b));
                }
            }
        }
    }
}

#[test]
fn lengthening_then_shortening_is_identity_up_to_ids() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..30 {
        let host = random_connected(6, 0.3, &mut rng);
        let (g, l) = laddertw::generate::plant_ladder(
            &host,
            None,
            3,
            laddertw::generate::Attachment::Free,
            &mut rng,
        );
        let (h, hl) = ladder::lengthen(&g, &l, 2).unwrap();
        let (back, bl) = ladder::shorten(&h, &hl, 3).unwrap();
        assert_eq!(back.num_vertices(), g.num_vertices());
        assert_eq!(back.num_edges(), g.num_edges());
        assert_eq!(bl.length(), 3);
        assert_eq!(tw(&back), tw(&g));
    }
}
