//! Searches for graphs where lengthening a short ladder raises the
//! treewidth, and for tree pairs where truncating a common chain to three
//! taxa lowers the treewidth of the display graph.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::decomposition::{exact_treewidth_with, validate, Budget, ExactOptions, TreeDecomposition};
use crate::graph::{Graph, Vertex};
use crate::ladder::{self, Ladder};
use crate::phylo::{self, display_graph, PhyloTree};

const BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchParams {
    /// Treewidth of the graph before lengthening.
    pub tw: usize,
    /// Ladder length before lengthening.
    pub ladder_length: usize,
    /// Largest number of vertices before lengthening.
    pub max_n: usize,
    pub seed: u64,
    pub max_trials: usize,
    pub budget: Budget,
}

impl SearchParams {
    /// Defaults for the two known tight cases: length 3 at treewidth 3
    /// within 14 vertices, and length 2 at treewidth 4 and above.
    pub fn for_tw(tw: usize) -> Self {
        let (ladder_length, max_n) = if tw <= 3 { (3, 14) } else { (2, 6 + 2 * tw) };
        Self {
            tw,
            ladder_length,
            max_n,
            seed: 0,
            max_trials: 2_000_000,
            budget: Budget::from_env(),
        }
    }
}

/// A graph of treewidth `width` containing `ladder` whose lengthening by one
/// square has treewidth `width + 1`, with optimal decompositions of both.
#[derive(Debug, Clone, Serialize)]
pub struct TightWitness {
    pub graph: Graph,
    pub ladder: Ladder,
    pub width: usize,
    pub decomposition: TreeDecomposition,
    pub lengthened: Graph,
    pub lengthened_ladder: Ladder,
    pub lengthened_width: usize,
    pub lengthened_decomposition: TreeDecomposition,
    pub trial: usize,
}

impl TightWitness {
    /// Re-checks everything except optimality of the widths: the ladders,
    /// the lengthening, and both decompositions.
    pub fn check(&self) -> Result<(), String> {
        ladder::verify(&self.graph, &self.ladder).map_err(|e| e.to_string())?;
        let (h, l) = ladder::lengthen(&self.graph, &self.ladder, 1).map_err(|e| e.to_string())?;
        if h != self.lengthened || l != self.lengthened_ladder {
            return Err("lengthened graph does not match".into());
        }
        for (g, td, w) in [
            (&self.graph, &self.decomposition, self.width),
            (&self.lengthened, &self.lengthened_decomposition, self.lengthened_width),
        ] {
            if !validate(g, td).map_err(|e| e.to_string())?.ok {
                return Err("invalid decomposition".into());
            }
            if td.width() != w {
                return Err(format!("decomposition has width {}, expected {w}", td.width()));
            }
        }
        if self.lengthened_width != self.width + 1 {
            return Err("treewidth did not grow".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome<T> {
    Found(T),
    Exhausted { trials: usize },
    /// Some oracle call ran out of budget before anything was found.
    Unknown { trials: usize },
}

/// A ladder of the requested length with a random graph on at most
/// `max_n - 2 (length + 1)` further vertices joined to its cornerpoints.
fn candidate(params: &SearchParams, rng: &mut ChaCha8Rng) -> Option<(Graph, Ladder)> {
    let len = params.ladder_length;
    let room = params.max_n.checked_sub(2 * (len + 1))?;
    if room == 0 {
        return None;
    }
    let extra = rng.gen_range(1..=room);
    let p: f64 = rng.gen_range(0.2..0.95);
    let mut g = Graph::new();
    for v in 0..extra {
        g.add_vertex(v);
        for w in 0..v {
            if rng.gen_bool(p) {
                g.insert_edge(w, v);
            }
        }
    }
    let mut top = Vec::new();
    let mut bottom = Vec::new();
    for i in 0..=len {
        let (t, b) = (g.fresh_vertex(), g.fresh_vertex());
        g.insert_edge(t, b);
        if i > 0 {
            g.insert_edge(top[i - 1], t);
            g.insert_edge(bottom[i - 1], b);
        }
        top.push(t);
        bottom.push(b);
    }
    let l = Ladder { top, bottom };
    for corner in l.corners() {
        let count = rng.gen_range(1..=extra.min(params.tw));
        let mut pool: Vec<Vertex> = (0..extra).collect();
        for _ in 0..count {
            let h = pool.swap_remove(rng.gen_range(0..pool.len()));
            g.insert_edge(corner, h);
        }
    }
    g.is_connected().then_some((g, l))
}

enum Trial {
    Hit(Box<TightWitness>),
    Miss,
    Unknown,
}

fn try_candidate(params: &SearchParams, trial: usize) -> Trial {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ trial as u64);
    let Some((g, l)) = candidate(params, &mut rng) else {
        return Trial::Miss;
    };
    let options = ExactOptions {
        budget: params.budget.clone(),
        suppress_degree2: false,
    };
    let Ok(before) = exact_treewidth_with(&g, &options) else {
        return Trial::Unknown;
    };
    if before.width != params.tw {
        return Trial::Miss;
    }
    let (h, hl) = ladder::lengthen(&g, &l, 1).expect("planted ladder is valid");
    let Ok(after) = exact_treewidth_with(&h, &options) else {
        return Trial::Unknown;
    };
    if after.width != params.tw + 1 {
        return Trial::Miss;
    }
    Trial::Hit(Box::new(TightWitness {
        graph: g,
        ladder: l,
        width: before.width,
        decomposition: before.decomposition,
        lengthened: h,
        lengthened_ladder: hl,
        lengthened_width: after.width,
        lengthened_decomposition: after.decomposition,
        trial,
    }))
}

/// Random search, deterministic for a given seed: trials are numbered and
/// the lowest-numbered hit wins regardless of thread scheduling.
pub fn tight_search(params: &SearchParams) -> SearchOutcome<TightWitness> {
    let mut unknown = false;
    let mut done = 0;
    while done < params.max_trials {
        let end = (done + BATCH).min(params.max_trials);
        let results: Vec<Trial> = (done..end)
            .into_par_iter()
            .map(|t| try_candidate(params, t))
            .collect();
        for r in results {
            match r {
                Trial::Hit(w) => return SearchOutcome::Found(*w),
                Trial::Unknown => unknown = true,
                Trial::Miss => {}
            }
        }
        done = end;
    }
    if unknown {
        SearchOutcome::Unknown { trials: done }
    } else {
        SearchOutcome::Exhausted { trials: done }
    }
}

/// A tree pair with a common chain of four taxa whose truncation to three
/// taxa changes the treewidth of the display graph.
#[derive(Debug, Clone)]
pub struct ChainWitness {
    pub t1: PhyloTree,
    pub t2: PhyloTree,
    pub chain: Vec<String>,
    pub width: usize,
    pub truncated: (PhyloTree, PhyloTree),
    pub truncated_width: usize,
}

/// Unordered pairs of distinct trees on `a, b, c, d` plus `extra` further
/// taxa in which `a, b, c, d` is a chain of both trees.
pub fn chained_pairs(extra: usize) -> Vec<(PhyloTree, PhyloTree)> {
    let mut taxa: Vec<String> = ["a", "b", "c", "d"].map(String::from).to_vec();
    taxa.extend((0..extra).map(|i| format!("x{i}")));
    let chain = &taxa[..4];
    let trees: Vec<(String, PhyloTree)> = phylo::all_trees(&taxa)
        .expect("distinct taxa")
        .into_iter()
        .filter(|t| phylo::is_chain(t, chain))
        .map(|t| (phylo::serialize(&t), t))
        .collect();
    let mut out = Vec::new();
    for (i, (_, t1)) in trees.iter().enumerate() {
        for (_, t2) in &trees[i + 1..] {
            out.push((t1.clone(), t2.clone()));
        }
    }
    out
}

/// Searches the chained pairs with up to `max_taxa` taxa for a pair whose
/// only long common chain has exactly four taxa and whose truncation to
/// three taxa changes the display-graph treewidth.
pub fn chain_tightness_search(max_taxa: usize, budget: &Budget) -> SearchOutcome<ChainWitness> {
    let options = ExactOptions {
        budget: budget.clone(),
        suppress_degree2: true,
    };
    let mut trials = 0;
    let mut unknown = false;
    for extra in 1..=max_taxa.saturating_sub(4) {
        let pairs = chained_pairs(extra);
        trials += pairs.len();
        let hits: Vec<Option<Result<ChainWitness, ()>>> = pairs
            .par_iter()
            .map(|(t1, t2)| {
                let chains = phylo::find_common_chains(t1, t2).ok()?;
                let chain = chains.into_iter().find(|c| c.taxa.len() == 4)?;
                if phylo::trees_equal(t1, t2).ok()? {
                    return None;
                }
                let (u1, u2, _) = phylo::truncate_chain(t1, t2, &chain.taxa, 3).ok()?;
                let d = display_graph(t1, t2, true).ok()?;
                let e = display_graph(&u1, &u2, true).ok()?;
                let w = match exact_treewidth_with(&d.graph, &options) {
                    Ok(s) => s.width,
                    Err(_) => return Some(Err(())),
                };
                let v = match exact_treewidth_with(&e.graph, &options) {
                    Ok(s) => s.width,
                    Err(_) => return Some(Err(())),
                };
                (w != v).then(|| {
                    Ok(ChainWitness {
                        t1: t1.clone(),
                        t2: t2.clone(),
                        chain: chain.taxa,
                        width: w,
                        truncated: (u1, u2),
                        truncated_width: v,
                    })
                })
            })
            .collect();
        for h in hits.into_iter().flatten() {
            match h {
                Ok(w) => return SearchOutcome::Found(w),
                Err(()) => unknown = true,
            }
        }
    }
    if unknown {
        SearchOutcome::Unknown { trials }
    } else {
        SearchOutcome::Exhausted { trials }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn search_is_deterministic_and_checked() {
        let params = SearchParams::for_tw(3);
        let SearchOutcome::Found(w) = tight_search(&params) else {
            panic!("no witness");
        };
        w.check().unwrap();
        assert!(w.graph.num_vertices() <= 14);
        assert_eq!(w.ladder.length(), 3);
        let SearchOutcome::Found(again) = tight_search(&params) else {
            panic!("no witness on rerun");
        };
        assert_eq!(again.trial, w.trial);
        assert_eq!(again.graph, w.graph);
    }

    #[test]
    fn impossible_search_is_exhausted() {
        let mut params = SearchParams::for_tw(3);
        params.max_n = 8; // no room beside a length-3 ladder
        params.max_trials = 10;
        assert!(matches!(tight_search(&params), SearchOutcome::Exhausted { trials: 10 }));
    }

    #[test]
    fn chained_pairs_have_the_chain() {
        let pairs = chained_pairs(1);
        assert!(!pairs.is_empty());
        for (t1, t2) in &pairs {
            assert!(!phylo::trees_equal(t1, t2).unwrap());
            for t in [t1, t2] {
                assert!(phylo::is_chain(t, &["a", "b", "c", "d"].map(String::from)));
            }
        }
    }
}
