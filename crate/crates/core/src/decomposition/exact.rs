//! Exact treewidth by dynamic programming over connected vertex sets.
//!
//! Each block is solved separately. Candidate widths are tried from the
//! lower bound upwards; for each, a memoised search decides whether the
//! vertices can be eliminated component by component without any vertex
//! seeing more than `k` neighbours in the filled graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::graph::{Graph, Vertex};

use super::bounds::{degeneracy, minor_min_width, upper_bound_heuristic};
use super::td::TreeDecomposition;

/// Environment variable capping the number of DP states per call.
pub const ENV_MAX_STATES: &str = "LADDERTW_MAX_STATES";
/// Environment variable capping wall-clock seconds per call.
pub const ENV_TIME_LIMIT: &str = "LADDERTW_TIME_LIMIT";

const DEFAULT_MAX_STATES: usize = 40_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_states: usize,
    pub time_limit: Option<Duration>,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            max_states: DEFAULT_MAX_STATES,
            time_limit: None,
        }
    }
}

impl Budget {
    pub fn states(max_states: usize) -> Self {
        Self {
            max_states,
            time_limit: None,
        }
    }

    /// Default budget overridden by `LADDERTW_MAX_STATES` and
    /// `LADDERTW_TIME_LIMIT` (seconds) when set.
    pub fn from_env() -> Self {
        let mut budget = Self::default();
        if let Some(n) = std::env::var(ENV_MAX_STATES).ok().and_then(|s| s.parse().ok()) {
            budget.max_states = n;
        }
        if let Some(s) = std::env::var(ENV_TIME_LIMIT)
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
        {
            budget.time_limit = Some(Duration::from_secs_f64(s));
        }
        budget
    }
}

#[derive(Debug, Clone, Default)]
pub struct ExactOptions {
    pub budget: Budget,
    /// Suppress degree-2 vertices before solving and lift the witness back.
    pub suppress_degree2: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Solution {
    pub width: usize,
    pub decomposition: TreeDecomposition,
}

/// The search ran out of budget. The bounds are proven; `decomposition`
/// witnesses `upper`.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("treewidth unknown within budget: between {lower} and {upper}")]
pub struct Unknown {
    pub lower: usize,
    pub upper: usize,
    pub decomposition: TreeDecomposition,
}

pub fn exact_treewidth(g: &Graph) -> Result<Solution, Unknown> {
    exact_treewidth_with(g, &ExactOptions::default())
}

pub fn exact_treewidth_with(g: &Graph, options: &ExactOptions) -> Result<Solution, Unknown> {
    let mut meter = Meter::new(&options.budget);
    // suppression is only exact once a cycle forces width 2
    if options.suppress_degree2 && !g.is_forest() {
        let (reduced, removed) = suppress_all(g);
        return match solve(&reduced, &mut meter) {
            Ok(sol) => {
                let decomposition = lift(sol.decomposition, &removed);
                Ok(Solution {
                    width: decomposition.width(),
                    decomposition,
                })
            }
            Err(unknown) => {
                let decomposition = lift(unknown.decomposition, &removed);
                Err(Unknown {
                    lower: unknown.lower,
                    upper: decomposition.width(),
                    decomposition,
                })
            }
        };
    }
    solve(g, &mut meter)
}

/// Suppresses degree-2 vertices until none can be removed safely.
fn suppress_all(g: &Graph) -> (Graph, Vec<(Vertex, Vertex, Vertex)>) {
    let mut g = g.clone();
    let mut removed = Vec::new();
    loop {
        let candidate = g.vertices().filter(|&v| g.degree(v) == 2).find_map(|v| {
            let mut n = g.neighbors(v);
            let (p, q) = (n.next().unwrap(), n.next().unwrap());
            g.suppress_degree2(v).ok().map(|h| (h, (v, p, q)))
        });
        match candidate {
            Some((h, step)) => {
                g = h;
                removed.push(step);
            }
            None => return (g, removed),
        }
    }
}

fn lift(mut td: TreeDecomposition, removed: &[(Vertex, Vertex, Vertex)]) -> TreeDecomposition {
    for &(v, p, q) in removed.iter().rev() {
        let host = td
            .bag_containing(&[p, q])
            .expect("suppressed neighbours share a bag");
        let bag = td.add_bag(BTreeSet::from([v, p, q]));
        td.add_edge(host, bag);
    }
    td
}

struct Meter {
    states: usize,
    max_states: usize,
    deadline: Option<Instant>,
}

impl Meter {
    fn new(budget: &Budget) -> Self {
        Self {
            states: 0,
            max_states: budget.max_states,
            deadline: budget.time_limit.map(|d| Instant::now() + d),
        }
    }

    fn charge(&mut self, n: usize) -> bool {
        self.states += n;
        if self.states > self.max_states {
            return false;
        }
        !matches!(self.deadline, Some(d) if Instant::now() > d)
    }
}

fn solve(g: &Graph, meter: &mut Meter) -> Result<Solution, Unknown> {
    if g.is_empty() {
        return Ok(Solution {
            width: 0,
            decomposition: TreeDecomposition::new(),
        });
    }
    let blocks = g.biconnected_components();
    let mut parts = Vec::with_capacity(blocks.len());
    let mut lower = 0;
    let mut upper = 0;
    let mut exact = true;
    for block in &blocks {
        let sub = g.induced_subgraph(block);
        match solve_block(&sub, meter) {
            Ok(sol) => {
                lower = lower.max(sol.width);
                upper = upper.max(sol.width);
                parts.push(sol.decomposition);
            }
            Err(unknown) => {
                exact = false;
                lower = lower.max(unknown.lower);
                upper = upper.max(unknown.upper);
                parts.push(unknown.decomposition);
            }
        }
    }
    let decomposition = glue(&blocks, parts);
    if exact {
        Ok(Solution {
            width: decomposition.width(),
            decomposition,
        })
    } else {
        Err(Unknown {
            lower,
            upper,
            decomposition,
        })
    }
}

/// Joins per-block decompositions along shared articulation vertices, and
/// links separate components arbitrarily.
fn glue(blocks: &[BTreeSet<Vertex>], parts: Vec<TreeDecomposition>) -> TreeDecomposition {
    let mut td = TreeDecomposition::new();
    let mut offsets = Vec::with_capacity(parts.len());
    for part in parts {
        let offset = td.bags.len();
        offsets.push(offset);
        td.bags.extend(part.bags);
        td.tree_edges
            .extend(part.tree_edges.into_iter().map(|(i, j)| (i + offset, j + offset)));
    }
    let mut parent: Vec<usize> = (0..blocks.len()).collect();
    fn find(parent: &mut [usize], x: usize) -> usize {
        if parent[x] != x {
            let r = find(parent, parent[x]);
            parent[x] = r;
        }
        parent[x]
    }
    let mut holder: BTreeMap<Vertex, usize> = BTreeMap::new();
    for (b, block) in blocks.iter().enumerate() {
        for &v in block {
            match holder.get(&v) {
                None => {
                    holder.insert(v, b);
                }
                Some(&first) => {
                    let (ra, rb) = (find(&mut parent, first), find(&mut parent, b));
                    if ra != rb {
                        parent[rb] = ra;
                        let i = bag_with(&td, offsets[first], v);
                        let j = bag_with(&td, offsets[b], v);
                        td.add_edge(i, j);
                    }
                }
            }
        }
    }
    let mut roots = Vec::new();
    for b in 0..blocks.len() {
        if find(&mut parent, b) == b {
            roots.push(offsets[b]);
        }
    }
    for w in roots.windows(2) {
        td.add_edge(w[0], w[1]);
    }
    td
}

fn bag_with(td: &TreeDecomposition, from: usize, v: Vertex) -> usize {
    (from..td.bags.len())
        .find(|&i| td.bags[i].contains(&v))
        .expect("block decomposition covers its vertices")
}

fn solve_block(g: &Graph, meter: &mut Meter) -> Result<Solution, Unknown> {
    let n = g.num_vertices();
    if n <= 2 {
        let decomposition = TreeDecomposition::trivial(g);
        return Ok(Solution {
            width: decomposition.width(),
            decomposition,
        });
    }
    let heuristic = upper_bound_heuristic(g);
    let upper = heuristic.width();
    let lower = minor_min_width(g).max(degeneracy(g));
    if lower >= upper {
        return Ok(Solution {
            width: upper,
            decomposition: heuristic,
        });
    }
    if n > 64 {
        return Err(Unknown {
            lower,
            upper,
            decomposition: heuristic,
        });
    }
    let (compact, ids) = g.compact();
    let adj: Vec<u64> = (0..n)
        .map(|v| compact.neighbors(v).fold(0u64, |m, w| m | (1 << w)))
        .collect();
    for k in lower..upper {
        match decide(&adj, k, meter) {
            Decision::Feasible(order) => {
                let order: Vec<Vertex> = order.into_iter().map(|i| ids[i]).collect();
                let decomposition = TreeDecomposition::from_elimination_order(g, &order);
                debug_assert_eq!(decomposition.width(), k);
                return Ok(Solution {
                    width: decomposition.width(),
                    decomposition,
                });
            }
            Decision::Infeasible => {}
            Decision::OutOfBudget => {
                return Err(Unknown {
                    lower: k,
                    upper,
                    decomposition: heuristic,
                })
            }
        }
    }
    Ok(Solution {
        width: upper,
        decomposition: heuristic,
    })
}

enum Decision {
    Feasible(Vec<usize>),
    Infeasible,
    OutOfBudget,
}

/// Neighbours of `v` in the graph where the vertices of `eliminated` have
/// been eliminated: everything outside `eliminated` reachable from `v`
/// through eliminated vertices.
#[inline]
fn neighbourhood(adj: &[u64], set: u64) -> u64 {
    let mut out = 0u64;
    let mut rest = set;
    while rest != 0 {
        let x = rest.trailing_zeros() as usize;
        rest &= rest - 1;
        out |= adj[x];
    }
    out & !set
}

/// Connected components of `set`, as bitmasks.
fn components(adj: &[u64], set: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = set;
    while rest != 0 {
        let start = rest & rest.wrapping_neg();
        let mut comp = start;
        let mut frontier = start;
        while frontier != 0 {
            let x = frontier.trailing_zeros() as usize;
            frontier &= frontier - 1;
            let new = adj[x] & set & !comp;
            comp |= new;
            frontier |= new;
        }
        rest &= !comp;
        out.push(comp);
    }
    out
}

/// Decides `tw <= k` for a connected graph.
///
/// A connected set `C` is solvable when `|N(C)| <= k` and some `v` in `C`
/// leaves components of `C - v` that are all solvable: eliminate those
/// components, then `v`, whose filled neighbourhood is then exactly `N(C)`.
/// The graph has treewidth at most `k` iff its vertex set is solvable.
fn decide(adj: &[u64], k: usize, meter: &mut Meter) -> Decision {
    struct Search<'a> {
        adj: &'a [u64],
        k: usize,
        memo: HashMap<u64, Option<u8>>,
        meter: &'a mut Meter,
        exhausted: bool,
    }

    impl Search<'_> {
        fn solvable(&mut self, c: u64) -> bool {
            if let Some(r) = self.memo.get(&c) {
                return r.is_some();
            }
            if self.exhausted {
                return false;
            }
            if !self.meter.charge(1) {
                self.exhausted = true;
                return false;
            }
            let mut result = None;
            let mut rest = c;
            'outer: while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let parts = components(self.adj, c & !(1u64 << v));
                if parts
                    .iter()
                    .any(|&p| neighbourhood(self.adj, p).count_ones() as usize > self.k)
                {
                    continue;
                }
                for &p in &parts {
                    if !self.solvable(p) {
                        if self.exhausted {
                            return false;
                        }
                        continue 'outer;
                    }
                }
                result = Some(v as u8);
                break;
            }
            self.memo.insert(c, result);
            result.is_some()
        }

        fn order(&self, c: u64, out: &mut Vec<usize>) {
            let v = self.memo[&c].expect("solvable set") as usize;
            for p in components(self.adj, c & !(1u64 << v)) {
                self.order(p, out);
            }
            out.push(v);
        }
    }

    let n = adj.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut search = Search {
        adj,
        k,
        memo: HashMap::new(),
        meter,
        exhausted: false,
    };
    if search.solvable(all) {
        let mut order = Vec::with_capacity(n);
        search.order(all, &mut order);
        Decision::Feasible(order)
    } else if search.exhausted {
        Decision::OutOfBudget
    } else {
        Decision::Infeasible
    }
}
