//! Cherry (subtree) reduction and common chain reduction.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{join_labels, trees_equal, PhyloError, PhyloTree};

/// Common chains are never truncated below this many taxa.
pub const MIN_CHAIN_KEEP: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CommonChain {
    pub taxa: Vec<String>,
    /// Whether the chain is pendant in the first and in the second tree.
    pub pendant: [bool; 2],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LogEntry {
    Cherry { x: String, y: String, merged: String },
    Chain { chain: Vec<String>, removed: Vec<String>, keep: usize },
}

fn same_taxa(t1: &PhyloTree, t2: &PhyloTree) -> Result<(), PhyloError> {
    if t1.leaves.len() == t2.leaves.len() && t1.leaves.keys().eq(t2.leaves.keys()) {
        Ok(())
    } else {
        Err(PhyloError::TaxaMismatch)
    }
}

/// Whether `seq` is a chain of `t`: distinct taxa whose leaf parents
/// `p_1, ..., p_n` form a walk in which consecutive parents are equal or
/// adjacent and `p_2, ..., p_{n-1}` are pairwise distinct. The walk is read
/// as non-backtracking: once equal neighbours are merged, no parent repeats.
pub fn is_chain<S: AsRef<str>>(t: &PhyloTree, seq: &[S]) -> bool {
    if seq.len() < 2 {
        return false;
    }
    let mut parents = Vec::with_capacity(seq.len());
    let mut seen = BTreeSet::new();
    for s in seq {
        if !seen.insert(s.as_ref()) {
            return false;
        }
        match t.parent(s.as_ref()) {
            Some(p) => parents.push(p),
            None => return false,
        }
    }
    let g = t.graph();
    if parents
        .windows(2)
        .any(|w| w[0] != w[1] && !g.has_edge(w[0], w[1]))
    {
        return false;
    }
    let mut walk = parents.clone();
    walk.dedup();
    let distinct: BTreeSet<_> = walk.iter().collect();
    if distinct.len() != walk.len() {
        return false;
    }
    let n = parents.len();
    // dedup only merges neighbours; equal interior parents are still refused
    n <= 2 || parents[1..n - 1].iter().collect::<BTreeSet<_>>().len() == n - 2
}

fn pendant_in<S: AsRef<str>>(t: &PhyloTree, seq: &[S]) -> bool {
    let n = seq.len();
    let p = |i: usize| t.parent(seq[i].as_ref());
    p(0) == p(1) || p(n - 2) == p(n - 1)
}

/// All maximal common chains, each reported once in its lexicographically
/// smaller orientation (and, where a pendant end leaves the order of the
/// two end taxa open in both trees, the smallest valid ordering).
pub fn find_common_chains(t1: &PhyloTree, t2: &PhyloTree) -> Result<Vec<CommonChain>, PhyloError> {
    same_taxa(t1, t2)?;
    let taxa: Vec<String> = t1.leaves.keys().cloned().collect();
    let both = |seq: &[String]| is_chain(t1, seq) && is_chain(t2, seq);
    // every prefix of a chain is a chain, so growing at the end reaches all
    let mut all: BTreeSet<Vec<String>> = BTreeSet::new();
    let mut stack: Vec<Vec<String>> = Vec::new();
    for x in &taxa {
        for y in &taxa {
            let seq = vec![x.clone(), y.clone()];
            if x != y && both(&seq) {
                stack.push(seq);
            }
        }
    }
    while let Some(seq) = stack.pop() {
        for z in &taxa {
            if seq.contains(z) {
                continue;
            }
            let mut next = seq.clone();
            next.push(z.clone());
            if both(&next) {
                stack.push(next);
            }
        }
        all.insert(seq);
    }
    let contained = |small: &[String], big: &[String]| {
        big.windows(small.len()).any(|w| w == small)
            || big.windows(small.len()).any(|w| w.iter().rev().eq(small.iter()))
    };
    let by_len: Vec<&Vec<String>> = all.iter().collect();
    let mut best: std::collections::BTreeMap<BTreeSet<String>, Vec<String>> = Default::default();
    for seq in &by_len {
        if by_len
            .iter()
            .any(|big| big.len() > seq.len() && contained(seq, big))
        {
            continue;
        }
        let rev: Vec<String> = seq.iter().rev().cloned().collect();
        let oriented = if rev < **seq { rev } else { (*seq).clone() };
        let key: BTreeSet<String> = seq.iter().cloned().collect();
        let entry = best.entry(key).or_insert_with(|| oriented.clone());
        if oriented < *entry {
            *entry = oriented;
        }
    }
    let mut out: Vec<CommonChain> = best
        .into_values()
        .map(|taxa| CommonChain {
            pendant: [pendant_in(t1, &taxa), pendant_in(t2, &taxa)],
            taxa,
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Cherry reduction applied to exhaustion, smallest common cherry first.
pub fn subtree_reduce(
    t1: &PhyloTree,
    t2: &PhyloTree,
) -> Result<(PhyloTree, PhyloTree, Vec<LogEntry>), PhyloError> {
    same_taxa(t1, t2)?;
    let (mut a, mut b) = (t1.clone(), t2.clone());
    let mut log = Vec::new();
    loop {
        let other: BTreeSet<(String, String)> = b.cherries().into_iter().collect();
        let Some((x, y)) = a.cherries().into_iter().find(|c| other.contains(c)) else {
            break;
        };
        a = a.merge_cherry(&x, &y)?;
        b = b.merge_cherry(&x, &y)?;
        let merged = join_labels(&x, &y);
        log.push(LogEntry::Cherry { x, y, merged });
    }
    Ok((a, b, log))
}

/// Prunes a common chain to `keep` taxa without checking the floor: the
/// first `keep - 1` taxa and the last one stay, the interior taxa between
/// them are removed from both trees. Both ends, and so any pendant end,
/// are left intact.
pub fn truncate_chain<S: AsRef<str>>(
    t1: &PhyloTree,
    t2: &PhyloTree,
    chain: &[S],
    keep: usize,
) -> Result<(PhyloTree, PhyloTree, LogEntry), PhyloError> {
    same_taxa(t1, t2)?;
    let chain: Vec<String> = chain.iter().map(|s| s.as_ref().to_string()).collect();
    if !is_chain(t1, &chain) || !is_chain(t2, &chain) {
        return Err(PhyloError::NotAChain(chain));
    }
    if keep < 2 {
        return Err(PhyloError::KeepTooSmall(keep));
    }
    let n = chain.len();
    let removed: Vec<String> = if n > keep {
        chain[keep - 1..n - 1].to_vec()
    } else {
        Vec::new()
    };
    let (mut a, mut b) = (t1.clone(), t2.clone());
    for taxon in &removed {
        a = a.remove_leaf(taxon)?;
        b = b.remove_leaf(taxon)?;
    }
    Ok((a, b, LogEntry::Chain { chain, removed, keep }))
}

/// Truncates every common chain longer than `keep` taxa. `keep` below
/// [`MIN_CHAIN_KEEP`] is refused.
pub fn chain_reduce(
    t1: &PhyloTree,
    t2: &PhyloTree,
    keep: usize,
) -> Result<(PhyloTree, PhyloTree, Vec<LogEntry>), PhyloError> {
    if keep < MIN_CHAIN_KEEP {
        return Err(PhyloError::KeepTooSmall(keep));
    }
    same_taxa(t1, t2)?;
    let (mut a, mut b) = (t1.clone(), t2.clone());
    let mut log = Vec::new();
    loop {
        let chains = find_common_chains(&a, &b)?;
        let Some(chain) = chains.into_iter().find(|c| c.taxa.len() > keep) else {
            break;
        };
        let (x, y, entry) = truncate_chain(&a, &b, &chain.taxa, keep)?;
        a = x;
        b = y;
        log.push(entry);
    }
    Ok((a, b, log))
}

/// Subtree and chain reduction, alternated until neither changes the pair.
pub fn kernelize(
    t1: &PhyloTree,
    t2: &PhyloTree,
    keep: usize,
) -> Result<(PhyloTree, PhyloTree, Vec<LogEntry>), PhyloError> {
    if keep < MIN_CHAIN_KEEP {
        return Err(PhyloError::KeepTooSmall(keep));
    }
    let (mut a, mut b) = (t1.clone(), t2.clone());
    let mut log = Vec::new();
    loop {
        let (x, y, mut l1) = subtree_reduce(&a, &b)?;
        let (x, y, mut l2) = chain_reduce(&x, &y, keep)?;
        let done = l1.is_empty() && l2.is_empty();
        log.append(&mut l1);
        log.append(&mut l2);
        a = x;
        b = y;
        if done {
            break;
        }
    }
    debug_assert!(trees_equal(&a, &b).is_ok());
    Ok((a, b, log))
}
