//! Ladders: induced `2 x (k+1)` grids that touch the rest of the graph only
//! through their four cornerpoints.
//!
//! A ladder is stored as two rails of equal length. Rung `i` is the edge
//! `top[i] - bottom[i]`; square `i` is rungs `i` and `i + 1`. Cornerpoints
//! are `a = top[0]`, `b = bottom[0]`, `c = top[k]`, `d = bottom[k]`.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::{validate, TreeDecomposition};
use crate::graph::{normalize, Edge, Graph, GraphError, Vertex};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LadderError {
    #[error("rails must have equal length of at least 2 (got {top} and {bottom})")]
    BadRails { top: usize, bottom: usize },
    #[error("vertex {0} appears more than once in the ladder")]
    RepeatedVertex(Vertex),
    #[error("vertex {0} is not in the graph")]
    UnknownVertex(Vertex),
    #[error("ladder edge {{{0}, {1}}} is missing from the graph")]
    MissingEdge(Vertex, Vertex),
    #[error("edge {{{0}, {1}}} between ladder vertices is not a ladder edge")]
    Chord(Vertex, Vertex),
    #[error("non-cornerpoint {vertex} has neighbour {neighbour} outside the ladder")]
    ExternalNeighbour { vertex: Vertex, neighbour: Vertex },
    #[error("target length {target} outside 1..={length}")]
    TargetOutOfRange { target: usize, length: usize },
    #[error("bag {0} does not contain a full square of the ladder")]
    NoSquareInBag(usize),
    #[error("bag index {0} out of range")]
    NoSuchBag(usize),
    #[error("no cornerpoint of the ladder has degree 2")]
    NoDegreeTwoCorner,
    #[error("input decomposition is not valid for the graph")]
    InvalidDecomposition,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ladder {
    pub top: Vec<Vertex>,
    pub bottom: Vec<Vertex>,
}

impl Ladder {
    pub fn new(top: Vec<Vertex>, bottom: Vec<Vertex>) -> Result<Self, LadderError> {
        if top.len() != bottom.len() || top.len() < 2 {
            return Err(LadderError::BadRails {
                top: top.len(),
                bottom: bottom.len(),
            });
        }
        let mut seen = BTreeSet::new();
        for &v in top.iter().chain(&bottom) {
            if !seen.insert(v) {
                return Err(LadderError::RepeatedVertex(v));
            }
        }
        Ok(Self { top, bottom })
    }

    /// Number of squares.
    pub fn length(&self) -> usize {
        self.top.len() - 1
    }

    /// `[a, b, c, d]`.
    pub fn corners(&self) -> [Vertex; 4] {
        let k = self.length();
        [self.top[0], self.bottom[0], self.top[k], self.bottom[k]]
    }

    pub fn vertices(&self) -> BTreeSet<Vertex> {
        self.top.iter().chain(&self.bottom).copied().collect()
    }

    /// Square `i` as `[u, v, w, x]` = `[top[i], bottom[i], top[i+1], bottom[i+1]]`.
    pub fn square(&self, i: usize) -> [Vertex; 4] {
        [self.top[i], self.bottom[i], self.top[i + 1], self.bottom[i + 1]]
    }

    /// The two rail ("horizontal") edges of square `i`.
    pub fn rail_edges(&self, i: usize) -> [Edge; 2] {
        [
            normalize(self.top[i], self.top[i + 1]),
            normalize(self.bottom[i], self.bottom[i + 1]),
        ]
    }

    /// All edges of the grid.
    pub fn grid_edges(&self) -> BTreeSet<Edge> {
        let mut edges = BTreeSet::new();
        for i in 0..self.top.len() {
            edges.insert(normalize(self.top[i], self.bottom[i]));
            if i > 0 {
                edges.insert(normalize(self.top[i - 1], self.top[i]));
                edges.insert(normalize(self.bottom[i - 1], self.bottom[i]));
            }
        }
        edges
    }

    pub fn reversed(&self) -> Ladder {
        Ladder {
            top: self.top.iter().rev().copied().collect(),
            bottom: self.bottom.iter().rev().copied().collect(),
        }
    }

    pub fn flipped(&self) -> Ladder {
        Ladder {
            top: self.bottom.clone(),
            bottom: self.top.clone(),
        }
    }

    /// The lexicographically smallest of the four equivalent rail layouts.
    pub fn canonical(&self) -> Ladder {
        let r = self.reversed();
        [self.flipped(), r.flipped(), r, self.clone()]
            .into_iter()
            .min()
            .unwrap()
    }

    /// Whether `other` is a contiguous window of `self` (in any layout).
    pub fn contains_ladder(&self, other: &Ladder) -> bool {
        if other.top.len() > self.top.len() {
            return false;
        }
        let c = other.canonical();
        let span = other.top.len();
        (0..=self.top.len() - span).any(|i| {
            Ladder {
                top: self.top[i..i + span].to_vec(),
                bottom: self.bottom[i..i + span].to_vec(),
            }
            .canonical()
                == c
        })
    }
}

/// Checks both containment conditions directly: the ladder vertices induce
/// exactly the grid, and only cornerpoints have neighbours outside it.
pub fn verify(g: &Graph, ladder: &Ladder) -> Result<(), LadderError> {
    let ladder = Ladder::new(ladder.top.clone(), ladder.bottom.clone())?;
    let members = ladder.vertices();
    for &v in &members {
        if !g.contains(v) {
            return Err(LadderError::UnknownVertex(v));
        }
    }
    let grid = ladder.grid_edges();
    for &(u, v) in &grid {
        if !g.has_edge(u, v) {
            return Err(LadderError::MissingEdge(u, v));
        }
    }
    let corners = ladder.corners();
    for &v in &members {
        for w in g.neighbors(v) {
            if members.contains(&w) {
                if !grid.contains(&normalize(v, w)) {
                    let (a, b) = normalize(v, w);
                    return Err(LadderError::Chord(a, b));
                }
            } else if !corners.contains(&v) {
                return Err(LadderError::ExternalNeighbour {
                    vertex: v,
                    neighbour: w,
                });
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LadderClass {
    pub disconnecting: bool,
    pub degree2_cornerpoints: Vec<Vertex>,
    /// Length at least 2 and not disconnecting, which forces treewidth 3.
    pub tw3_certified: bool,
}

pub fn classify(g: &Graph, ladder: &Ladder) -> Result<LadderClass, LadderError> {
    verify(g, ladder)?;
    let cuts: Vec<bool> = (0..ladder.length())
        .map(|i| {
            g.is_edge_cut(&ladder.rail_edges(i))
                .map(|cut| cut.is_some())
        })
        .collect::<Result<_, _>>()?;
    let disconnecting = cuts[0];
    debug_assert!(cuts.iter().all(|&c| c == disconnecting));
    let mut degree2_cornerpoints: Vec<Vertex> = ladder
        .corners()
        .into_iter()
        .filter(|&c| g.degree(c) == 2)
        .collect();
    degree2_cornerpoints.sort_unstable();
    Ok(LadderClass {
        disconnecting,
        degree2_cornerpoints,
        tw3_certified: ladder.length() >= 2 && !disconnecting,
    })
}

/// A non-disconnecting ladder of length at least 2, if one exists.
pub fn certifies_tw3(g: &Graph) -> Option<Ladder> {
    find_ladders(g, 2)
        .into_iter()
        .find(|l| classify(g, l).is_ok_and(|c| c.tw3_certified))
}

type Rung = (Vertex, Vertex);

/// The next rung beyond `cur`, forced when both its ends have degree 3.
fn forced_rung(g: &Graph, prev: Rung, cur: Rung) -> Option<Rung> {
    let (t, b) = cur;
    if g.degree(t) != 3 || g.degree(b) != 3 {
        return None;
    }
    let nt = g.neighbors(t).find(|&y| y != prev.0 && y != b)?;
    let nb = g.neighbors(b).find(|&y| y != prev.1 && y != t)?;
    (nt != nb && g.has_edge(nt, nb)).then_some((nt, nb))
}

/// Grows the seed square in both directions as far as forced rungs go.
fn strip(g: &Graph, seed: [Rung; 2]) -> Vec<Rung> {
    let limit = g.num_vertices();
    let grow = |first: Rung, second: Rung| {
        let mut used: HashSet<Vertex> = [first.0, first.1, second.0, second.1].into();
        let mut out = Vec::new();
        let (mut prev, mut cur) = (first, second);
        while out.len() < limit {
            let Some(next) = forced_rung(g, prev, cur) else {
                break;
            };
            if !used.insert(next.0) || !used.insert(next.1) {
                break;
            }
            out.push(next);
            prev = cur;
            cur = next;
        }
        out
    };
    let right = grow(seed[0], seed[1]);
    let left = grow(seed[1], seed[0]);
    left.into_iter()
        .rev()
        .chain(seed)
        .chain(right)
        .collect()
}

fn window(rungs: &[Rung]) -> Ladder {
    Ladder {
        top: rungs.iter().map(|r| r.0).collect(),
        bottom: rungs.iter().map(|r| r.1).collect(),
    }
}

/// All maximal ladders of length at least `min_length`, canonicalised and
/// sorted.
///
/// Every chordless 4-cycle, in both rung orientations, seeds a strip of
/// forced rungs; the maximal valid windows of each strip are collected and
/// anything contained in another ladder is dropped. A lone square that is
/// a maximal length-1 ladder in both orientations is reported once.
pub fn find_ladders(g: &Graph, min_length: usize) -> Vec<Ladder> {
    let min_length = min_length.max(1);
    let mut done: HashSet<Ladder> = HashSet::new();
    let mut found: BTreeSet<Ladder> = BTreeSet::new();
    for t0 in g.vertices() {
        for b0 in g.neighbors(t0) {
            for t1 in g.neighbors(t0).filter(|&y| y != b0) {
                for b1 in g.neighbors(b0).filter(|&y| y != t0 && y != t1) {
                    if !g.has_edge(t1, b1) || g.has_edge(t0, b1) || g.has_edge(b0, t1) {
                        continue;
                    }
                    let key = window(&[(t0, b0), (t1, b1)]).canonical();
                    if done.contains(&key) {
                        continue;
                    }
                    let rungs = strip(g, [(t0, b0), (t1, b1)]);
                    for pair in rungs.windows(2) {
                        done.insert(window(pair).canonical());
                    }
                    found.extend(maximal_windows(g, &rungs));
                }
            }
        }
    }
    let all: Vec<Ladder> = found.into_iter().collect();
    let mut maximal: Vec<Ladder> = all
        .iter()
        .filter(|l| {
            !all.iter()
                .any(|m| m.length() > l.length() && m.contains_ladder(l))
        })
        .cloned()
        .collect();
    // a lone square is reported once, and not at all when it is already a
    // square of a longer ladder
    let mut seen_squares: BTreeSet<BTreeSet<Vertex>> = maximal
        .iter()
        .filter(|l| l.length() > 1)
        .flat_map(|l| (0..l.length()).map(|i| l.square(i).into_iter().collect()))
        .collect();
    maximal.retain(|l| l.length() > 1 || seen_squares.insert(l.vertices()));
    maximal.retain(|l| l.length() >= min_length);
    maximal
}

/// Maximal valid windows of a strip, by the two-pointer sweep (a window
/// that fails the containment conditions never becomes valid by growing).
fn maximal_windows(g: &Graph, rungs: &[Rung]) -> Vec<Ladder> {
    let n = rungs.len();
    let mut out = Vec::new();
    let mut best_end = 0;
    let mut j = 1;
    for i in 0..n - 1 {
        j = j.max(i + 1);
        if verify(g, &window(&rungs[i..=j])).is_err() {
            continue;
        }
        while j + 1 < n && verify(g, &window(&rungs[i..=j + 1])).is_ok() {
            j += 1;
        }
        if j > best_end {
            best_end = j;
            out.push(window(&rungs[i..=j]).canonical());
        }
    }
    out
}

/// Replaces `ladder` by a ladder of length `target` on the same cornerpoints
/// by contracting away the rungs next to the first one.
pub fn shorten(g: &Graph, ladder: &Ladder, target: usize) -> Result<(Graph, Ladder), LadderError> {
    verify(g, ladder)?;
    let k = ladder.length();
    if target < 1 || target > k {
        return Err(LadderError::TargetOutOfRange { target, length: k });
    }
    let drop = k - target;
    let mut h = g.clone();
    for i in 1..=drop {
        h.remove_vertex(ladder.top[i])?;
        h.remove_vertex(ladder.bottom[i])?;
    }
    if drop > 0 {
        h.insert_edge(ladder.top[0], ladder.top[drop + 1]);
        h.insert_edge(ladder.bottom[0], ladder.bottom[drop + 1]);
    }
    let top = std::iter::once(ladder.top[0])
        .chain(ladder.top[drop + 1..].iter().copied())
        .collect();
    let bottom = std::iter::once(ladder.bottom[0])
        .chain(ladder.bottom[drop + 1..].iter().copied())
        .collect();
    Ok((h, Ladder { top, bottom }))
}

/// Inserts `extra` fresh rungs between rung 0 and rung 1.
pub fn lengthen(g: &Graph, ladder: &Ladder, extra: usize) -> Result<(Graph, Ladder), LadderError> {
    verify(g, ladder)?;
    if extra == 0 {
        return Ok((g.clone(), ladder.clone()));
    }
    let mut h = g.clone();
    let (t0, b0, t1, b1) = (ladder.top[0], ladder.bottom[0], ladder.top[1], ladder.bottom[1]);
    h.remove_edge(t0, t1)?;
    h.remove_edge(b0, b1)?;
    let mut top = vec![t0];
    let mut bottom = vec![b0];
    for _ in 0..extra {
        let x = h.fresh_vertex();
        let y = h.fresh_vertex();
        h.insert_edge(*top.last().unwrap(), x);
        h.insert_edge(*bottom.last().unwrap(), y);
        h.insert_edge(x, y);
        top.push(x);
        bottom.push(y);
    }
    h.insert_edge(*top.last().unwrap(), t1);
    h.insert_edge(*bottom.last().unwrap(), b1);
    top.extend_from_slice(&ladder.top[1..]);
    bottom.extend_from_slice(&ladder.bottom[1..]);
    Ok((h, Ladder { top, bottom }))
}

/// Result of growing a ladder together with a decomposition of the graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Extension {
    pub graph: Graph,
    pub ladder: Ladder,
    pub decomposition: TreeDecomposition,
    /// A bag holding a full square of the new ladder next to the insertion
    /// point, so the construction can be repeated from it.
    pub anchor_bag: usize,
}

/// Lengthens the ladder by one square next to a square held entirely in bag
/// `bag_index`, attaching two pendant bags of size 5.
///
/// With square `{u, v, w, x}` (`u - w` and `v - x` rail edges) in bag `B`,
/// the new rung `{u', v'}` subdivides both rail edges, `{u', u, v, w, x}` is
/// attached to `B` and `{u', v', v, w, x}` to that bag.
pub fn extend_decomposition_square(
    g: &Graph,
    td: &TreeDecomposition,
    ladder: &Ladder,
    bag_index: usize,
) -> Result<Extension, LadderError> {
    verify(g, ladder)?;
    let bag = td.bags.get(bag_index).ok_or(LadderError::NoSuchBag(bag_index))?;
    let i = (0..ladder.length())
        .find(|&i| ladder.square(i).iter().all(|v| bag.contains(v)))
        .ok_or(LadderError::NoSquareInBag(bag_index))?;
    let [u, v, w, x] = ladder.square(i);
    let mut h = g.clone();
    h.remove_edge(u, w)?;
    h.remove_edge(v, x)?;
    let u2 = h.fresh_vertex();
    let v2 = h.fresh_vertex();
    for (p, q) in [(u, u2), (u2, w), (v, v2), (v2, x), (u2, v2)] {
        h.insert_edge(p, q);
    }
    let mut out = td.clone();
    let first = out.add_bag(BTreeSet::from([u2, u, v, w, x]));
    out.add_edge(bag_index, first);
    let second = out.add_bag(BTreeSet::from([u2, v2, v, w, x]));
    out.add_edge(first, second);
    let mut top = ladder.top.clone();
    let mut bottom = ladder.bottom.clone();
    top.insert(i + 1, u2);
    bottom.insert(i + 1, v2);
    Ok(Extension {
        graph: h,
        ladder: Ladder { top, bottom },
        decomposition: out,
        anchor_bag: second,
    })
}

/// Lengthens the ladder by `rungs` rungs at a degree-2 cornerpoint without
/// growing the decomposition beyond width `max(width, 3)`.
///
/// With `c` of degree 2 in square `{w, x, c, d}`, `c` is suppressed into
/// `d` (call it `cd`), a bag containing the triangle `{w, x, cd}` is found,
/// and the chain `{w, x, w', cd}`, `{x, w', x', cd}` is attached per new
/// rung. Finally `c` is restored by subdividing the last top rail edge.
pub fn extend_decomposition_pointed(
    g: &Graph,
    td: &TreeDecomposition,
    ladder: &Ladder,
    rungs: usize,
) -> Result<Extension, LadderError> {
    verify(g, ladder)?;
    match validate(g, td) {
        Ok(report) if report.ok => {}
        _ => return Err(LadderError::InvalidDecomposition),
    }
    let k = ladder.length();
    let oriented = [
        ladder.clone(),
        ladder.flipped(),
        ladder.reversed(),
        ladder.reversed().flipped(),
    ]
    .into_iter()
    .find(|l| g.degree(l.top[k]) == 2)
    .ok_or(LadderError::NoDegreeTwoCorner)?;
    let c = oriented.top[k];
    let d = oriented.bottom[k];
    let (mut w, mut x) = (oriented.top[k - 1], oriented.bottom[k - 1]);

    // suppress c into d
    let mut h = g.clone();
    h.remove_vertex(c)?;
    h.insert_edge(w, d);
    let mut out = td.relabel(&BTreeMap::from([(c, d)]));
    let mut anchor = out
        .bag_containing(&[w, x, d])
        .ok_or(LadderError::InvalidDecomposition)?;

    let mut top = oriented.top[..k].to_vec();
    let mut bottom = oriented.bottom[..k].to_vec();
    for _ in 0..rungs {
        let w2 = h.fresh_vertex();
        let x2 = h.fresh_vertex();
        h.remove_edge(w, d)?;
        h.remove_edge(x, d)?;
        for (p, q) in [(w, w2), (x, x2), (w2, x2), (w2, d), (x2, d)] {
            h.insert_edge(p, q);
        }
        let first = out.add_bag(BTreeSet::from([w, x, w2, d]));
        out.add_edge(anchor, first);
        let second = out.add_bag(BTreeSet::from([x, w2, x2, d]));
        out.add_edge(first, second);
        anchor = second;
        top.push(w2);
        bottom.push(x2);
        w = w2;
        x = x2;
    }

    // restore c on the top rail
    h.remove_edge(w, d)?;
    h.add_vertex(c);
    h.insert_edge(w, c);
    h.insert_edge(c, d);
    let last = out.add_bag(BTreeSet::from([w, c, d]));
    out.add_edge(anchor, last);
    top.push(c);
    bottom.push(d);
    Ok(Extension {
        graph: h,
        ladder: Ladder { top, bottom },
        decomposition: out,
        anchor_bag: last,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::{exact_treewidth, validate};
    use crate::graph::families;

    fn tw(g: &Graph) -> usize {
        exact_treewidth(g).unwrap().width
    }

    /// 2 x (k+1) grid with top 0..=k and bottom k+1..=2k+1.
    fn grid_ladder(k: usize) -> (Graph, Ladder) {
        let g = families::ladder_grid(k + 1);
        let l = Ladder::new((0..=k).collect(), (k + 1..=2 * k + 1).collect()).unwrap();
        (g, l)
    }

    fn with_apex(k: usize) -> (Graph, Ladder) {
        let (mut g, l) = grid_ladder(k);
        let apex = g.fresh_vertex();
        for c in l.corners() {
            g.insert_edge(apex, c);
        }
        (g, l)
    }

    #[test]
    fn standalone_grid_is_one_ladder() {
        let (g, l) = grid_ladder(4);
        let found = find_ladders(&g, 1);
        assert_eq!(found, vec![l.canonical()]);
        assert_eq!(found[0].length(), 4);
    }

    #[test]
    fn chord_breaks_the_ladder() {
        // chord between internal rail vertices 1 and 3 of the top rail
        let (mut g, _) = grid_ladder(4);
        g.insert_edge(1, 3);
        let found = find_ladders(&g, 1);
        assert!(found.iter().all(|l| verify(&g, l).is_ok()));
        assert!(find_ladders(&g, 3).is_empty());
        for l in &found {
            let members = l.vertices();
            assert!(!(members.contains(&1) && members.contains(&3)));
        }
        // the first and last squares survive as length-1 ladders
        assert!(found.contains(&Ladder::new(vec![0, 1], vec![5, 6]).unwrap().canonical()));
        assert!(found.contains(&Ladder::new(vec![3, 4], vec![8, 9]).unwrap().canonical()));
    }

    #[test]
    fn apex_over_corners() {
        let (g, l) = with_apex(3);
        assert_eq!(find_ladders(&g, 1), vec![l.canonical()]);
        let class = classify(&g, &l).unwrap();
        assert!(!class.disconnecting);
        assert!(class.tw3_certified);
        assert!(class.degree2_cornerpoints.is_empty());
    }

    #[test]
    fn disconnecting_between_blobs() {
        let (mut g, l) = grid_ladder(3);
        let [a, b, c, d] = l.corners();
        let blob = |p: Vertex, q: Vertex, g: &mut Graph| {
            let z = g.fresh_vertex();
            g.insert_edge(p, z);
            g.insert_edge(q, z);
        };
        blob(a, b, &mut g);
        blob(c, d, &mut g);
        let class = classify(&g, &l).unwrap();
        assert!(class.disconnecting);
        assert!(!class.tw3_certified);
    }

    #[test]
    fn degree_two_cornerpoint_listed() {
        let (mut g, l) = grid_ladder(3);
        let [a, b, _, d] = l.corners();
        let z = g.fresh_vertex();
        g.insert_edge(a, z);
        g.insert_edge(b, z);
        g.insert_edge(d, z);
        let class = classify(&g, &l).unwrap();
        assert_eq!(class.degree2_cornerpoints, vec![l.corners()[2]]);
        assert!(!class.disconnecting);
    }

    #[test]
    fn verify_rejects_bad_ladders() {
        let (g, l) = with_apex(3);
        // a window whose end sits inside the ladder has an outside neighbour
        let inner = Ladder::new(l.top[1..3].to_vec(), l.bottom[1..3].to_vec()).unwrap();
        assert!(verify(&g, &inner).is_ok());
        let sub = Ladder::new(l.top[..3].to_vec(), l.bottom[..3].to_vec()).unwrap();
        assert!(verify(&g, &sub).is_ok());
        let mut g2 = g.clone();
        g2.insert_edge(l.top[1], l.bottom[2]);
        assert_eq!(
            verify(&g2, &l),
            Err(LadderError::Chord(l.top[1], l.bottom[2]))
        );
        let mut g3 = g.clone();
        let z = g3.fresh_vertex();
        g3.insert_edge(l.top[1], z);
        assert!(matches!(
            verify(&g3, &l),
            Err(LadderError::ExternalNeighbour { .. })
        ));
    }

    #[test]
    fn prism_rotations() {
        // pentagonal prism: 5 rotations of a length-3 ladder in rail direction
        let mut g = families::cycle(5);
        for i in 0..5 {
            g.insert_edge(i + 5, (i + 1) % 5 + 5);
            g.insert_edge(i, i + 5);
        }
        let found = find_ladders(&g, 2);
        assert_eq!(found.len(), 5);
        assert!(found.iter().all(|l| l.length() == 3 && verify(&g, l).is_ok()));
    }

    #[test]
    fn shorten_and_lengthen() {
        let (g, l) = with_apex(6);
        let (h, short) = shorten(&g, &l, 4).unwrap();
        assert_eq!(short.length(), 4);
        assert_eq!(short.corners(), l.corners());
        verify(&h, &short).unwrap();
        assert_eq!(h.num_vertices(), g.num_vertices() - 4);
        assert_eq!(shorten(&g, &l, 6).unwrap().0, g);
        assert!(matches!(
            shorten(&g, &l, 7),
            Err(LadderError::TargetOutOfRange { .. })
        ));
        assert!(shorten(&g, &l, 0).is_err());

        let (long, ll) = lengthen(&h, &short, 2).unwrap();
        assert_eq!(ll.length(), 6);
        verify(&long, &ll).unwrap();
        let (back, bl) = shorten(&long, &ll, 4).unwrap();
        assert_eq!(back, h);
        assert_eq!(bl, short);
    }

    #[test]
    fn shorten_preserves_tw_on_apex_fixture() {
        let (g, l) = with_apex(6);
        let (h, _) = shorten(&g, &l, 4).unwrap();
        assert_eq!(tw(&g), tw(&h));
    }

    #[test]
    fn square_extension_iterates() {
        let (mut graph, mut ladder, mut td, mut anchor) = crate::fixtures::width4_square();
        assert!(validate(&graph, &td).unwrap().ok);
        assert_eq!(td.width(), 4);
        for step in 1..=3 {
            let ext = extend_decomposition_square(&graph, &td, &ladder, anchor).unwrap();
            assert!(validate(&ext.graph, &ext.decomposition).unwrap().ok);
            verify(&ext.graph, &ext.ladder).unwrap();
            assert_eq!(ext.decomposition.width(), 4);
            assert_eq!(ext.ladder.length(), 3 + step);
            graph = ext.graph;
            td = ext.decomposition;
            ladder = ext.ladder;
            anchor = ext.anchor_bag;
        }
        assert_eq!(tw(&graph), 4);
    }

    #[test]
    fn square_extension_requires_square() {
        let (g, l) = grid_ladder(2);
        let td = TreeDecomposition::trivial(&g);
        assert!(extend_decomposition_square(&g, &td, &l, 0).is_ok());
        let mut partial = TreeDecomposition::new();
        partial.add_bag(BTreeSet::from([0, 1]));
        assert_eq!(
            extend_decomposition_square(&g, &partial, &l, 0),
            Err(LadderError::NoSquareInBag(0))
        );
    }

    #[test]
    fn pointed_extension_keeps_width() {
        // c has degree 2; a, b, d tied to a K4 so tw is 3
        let (mut g, l) = grid_ladder(2);
        let [a, b, _, d] = l.corners();
        let k: Vec<Vertex> = (0..3).map(|_| g.fresh_vertex()).collect();
        for i in 0..3 {
            for j in 0..i {
                g.insert_edge(k[i], k[j]);
            }
        }
        g.insert_edge(a, k[0]);
        g.insert_edge(b, k[1]);
        g.insert_edge(d, k[2]);
        let sol = exact_treewidth(&g).unwrap();
        assert_eq!(sol.width, 3);
        for rungs in 1..=3 {
            let ext = extend_decomposition_pointed(&g, &sol.decomposition, &l, rungs).unwrap();
            assert!(validate(&ext.graph, &ext.decomposition).unwrap().ok);
            assert_eq!(ext.decomposition.width(), 3);
            assert_eq!(ext.ladder.length(), 2 + rungs);
            verify(&ext.graph, &ext.ladder).unwrap();
            assert_eq!(tw(&ext.graph), 3);
        }
        let (plain, pl) = with_apex(2);
        let td = TreeDecomposition::trivial(&plain);
        assert_eq!(
            extend_decomposition_pointed(&plain, &td, &pl, 1),
            Err(LadderError::NoDegreeTwoCorner)
        );
    }
}
