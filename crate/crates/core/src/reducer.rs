//! Ladder shortening to a fixpoint, with a replayable report.
//!
//! Rules, tried per ladder in canonical order (first applicable wins):
//!
//! 1. disconnecting ladder: shorten to length 1;
//! 2. a cornerpoint of degree 2: shorten to length 1 when the shortened
//!    graph has a treewidth-3 certificate, otherwise to length 2;
//! 3. aggressive (opt-in): shorten to `aggressive_target` when the
//!    shortened graph has a treewidth-4 certificate;
//! 4. general: shorten to `general_target`.
//!
//! Certificates are always taken on the shortened graph. A certificate for
//! the longer input is not enough: a treewidth-3 graph can have a ladder
//! whose lengthening reaches treewidth 4, so shortening that lengthened
//! graph would lose a unit of width.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomposition::bounds::{degeneracy, max_clique, minor_min_width};
use crate::decomposition::{exact_treewidth_with, Budget, ExactOptions};
use crate::graph::{Graph, GraphError, Vertex};
use crate::ladder::{self, Ladder, LadderError};

/// Clique search in [`certify_tw_at_least`] is skipped above this size.
const CLIQUE_LIMIT: usize = 60;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionPolicy {
    pub general_target: usize,
    pub aggressive_target: usize,
    pub allow_aggressive: bool,
    pub suppress_degree2: bool,
    pub iterate_to_fixpoint: bool,
}

impl Default for ReductionPolicy {
    fn default() -> Self {
        Self {
            general_target: 4,
            aggressive_target: 3,
            allow_aggressive: false,
            suppress_degree2: false,
            iterate_to_fixpoint: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolicyError {
    #[error("general_target must be at least 4 (got {0})")]
    GeneralTarget(usize),
    #[error("aggressive_target must be at least 3 (got {0})")]
    AggressiveTarget(usize),
}

impl ReductionPolicy {
    /// Aggressive shortening enabled.
    pub fn aggressive() -> Self {
        Self {
            allow_aggressive: true,
            ..Self::default()
        }
    }

    /// The weaker length-5 variant of the general rule.
    pub fn length5() -> Self {
        Self {
            general_target: 5,
            ..Self::default()
        }
    }

    pub fn check(&self) -> Result<(), PolicyError> {
        if self.general_target < 4 {
            return Err(PolicyError::GeneralTarget(self.general_target));
        }
        if self.aggressive_target < 3 {
            return Err(PolicyError::AggressiveTarget(self.aggressive_target));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    Disconnecting,
    Degree2Cornerpoint,
    Aggressive,
    General,
    SuppressDeg2,
}

/// Evidence that a graph has treewidth at least `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub k: usize,
    pub evidence: Evidence,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Evidence {
    /// The graph has a vertex.
    Vertex { vertex: Vertex },
    /// The graph has an edge.
    Edge { u: Vertex, v: Vertex },
    /// The graph is not a forest.
    Cycle,
    /// A non-disconnecting ladder of length at least 2.
    Ladder { ladder: Ladder },
    Clique { vertices: Vec<Vertex> },
    Degeneracy { value: usize },
    MinorMinWidth { value: usize },
    /// Exact treewidth, or a lower bound proven by the exact search.
    Exact { lower: usize, upper: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub rule: Rule,
    /// The ladder as detected before the rewrite.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub ladder: Option<Ladder>,
    /// The suppressed vertex, for [`Rule::SuppressDeg2`].
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub vertex: Option<Vertex>,
    pub length_before: usize,
    pub length_after: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub certificate: Option<Certificate>,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionReport {
    pub policy: ReductionPolicy,
    pub steps: Vec<Step>,
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub edges_before: usize,
    pub edges_after: usize,
    pub tw_certificates: Vec<Certificate>,
    pub notes: Vec<String>,
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("step {index}: {source}")]
    Ladder { index: usize, source: LadderError },
    #[error("step {index}: {source}")]
    Graph { index: usize, source: GraphError },
    #[error("step {0} is malformed")]
    Malformed(usize),
}

/// Evidence that `tw(g) >= k`, if some bound or the exact search within
/// `budget` proves it. Never returns a certificate for a false claim.
pub fn certify_tw_at_least(g: &Graph, k: usize, budget: &Budget) -> Option<Certificate> {
    let cert = |evidence| Some(Certificate { k, evidence });
    if k == 0 {
        return g.vertices().next().and_then(|vertex| cert(Evidence::Vertex { vertex }));
    }
    if k == 1 {
        return g.edges().next().and_then(|(u, v)| cert(Evidence::Edge { u, v }));
    }
    if k == 2 {
        return if g.is_forest() { None } else { cert(Evidence::Cycle) };
    }
    if k == 3 {
        if let Some(ladder) = ladder::certifies_tw3(g) {
            return cert(Evidence::Ladder { ladder });
        }
    }
    let value = degeneracy(g);
    if value >= k {
        return cert(Evidence::Degeneracy { value });
    }
    let value = minor_min_width(g);
    if value >= k {
        return cert(Evidence::MinorMinWidth { value });
    }
    if g.num_vertices() <= CLIQUE_LIMIT {
        let clique = max_clique(g);
        if clique.len() > k {
            return cert(Evidence::Clique {
                vertices: clique.into_iter().collect(),
            });
        }
    }
    let options = ExactOptions {
        budget: budget.clone(),
        suppress_degree2: true,
    };
    match exact_treewidth_with(g, &options) {
        Ok(sol) if sol.width >= k => cert(Evidence::Exact {
            lower: sol.width,
            upper: sol.width,
        }),
        Err(unknown) if unknown.lower >= k => cert(Evidence::Exact {
            lower: unknown.lower,
            upper: unknown.upper,
        }),
        _ => None,
    }
}

/// [`reduce_with`] under the budget from the environment.
pub fn reduce(g: &Graph, policy: &ReductionPolicy) -> Result<(Graph, ReductionReport), PolicyError> {
    reduce_with(g, policy, &Budget::from_env())
}

pub fn reduce_with(
    g: &Graph,
    policy: &ReductionPolicy,
    budget: &Budget,
) -> Result<(Graph, ReductionReport), PolicyError> {
    policy.check()?;
    let mut report = ReductionReport {
        policy: policy.clone(),
        steps: Vec::new(),
        vertices_before: g.num_vertices(),
        vertices_after: g.num_vertices(),
        edges_before: g.num_edges(),
        edges_after: g.num_edges(),
        tw_certificates: Vec::new(),
        notes: Vec::new(),
    };
    let mut g = g.clone();
    if policy.iterate_to_fixpoint {
        while let Some((h, step)) = next_step(&g, policy, budget, &mut report.notes) {
            g = h;
            record(&mut report, step);
        }
    } else {
        for l in ladder::find_ladders(&g, 2) {
            if ladder::verify(&g, &l).is_err() {
                continue;
            }
            if let Some((h, step)) = ladder_step(&g, &l, policy, budget, &mut report.notes) {
                g = h;
                record(&mut report, step);
            }
        }
        if policy.suppress_degree2 {
            while let Some((h, step)) = suppress_step(&g) {
                g = h;
                record(&mut report, step);
            }
        }
    }
    report.vertices_after = g.num_vertices();
    report.edges_after = g.num_edges();
    Ok((g, report))
}

fn record(report: &mut ReductionReport, step: Step) {
    if let Some(c) = &step.certificate {
        report.tw_certificates.push(c.clone());
    }
    report.steps.push(step);
}

fn next_step(
    g: &Graph,
    policy: &ReductionPolicy,
    budget: &Budget,
    notes: &mut Vec<String>,
) -> Option<(Graph, Step)> {
    for l in ladder::find_ladders(g, 2) {
        if let Some(found) = ladder_step(g, &l, policy, budget, notes) {
            return Some(found);
        }
    }
    if policy.suppress_degree2 {
        return suppress_step(g);
    }
    None
}

fn suppress_step(g: &Graph) -> Option<(Graph, Step)> {
    g.vertices().filter(|&v| g.degree(v) == 2).find_map(|v| {
        let h = g.suppress_degree2(v).ok()?;
        Some((
            h,
            Step {
                rule: Rule::SuppressDeg2,
                ladder: None,
                vertex: Some(v),
                length_before: 0,
                length_after: 0,
                certificate: None,
                note: format!("suppressed vertex {v}"),
            },
        ))
    })
}

fn ladder_step(
    g: &Graph,
    l: &Ladder,
    policy: &ReductionPolicy,
    budget: &Budget,
    notes: &mut Vec<String>,
) -> Option<(Graph, Step)> {
    let class = ladder::classify(g, l).ok()?;
    let k = l.length();
    let make = |rule, target: usize, certificate: Option<Certificate>, note: String| {
        let (h, _) = ladder::shorten(g, l, target).ok()?;
        Some((
            h,
            Step {
                rule,
                ladder: Some(l.clone()),
                vertex: None,
                length_before: k,
                length_after: target,
                certificate,
                note,
            },
        ))
    };
    if class.disconnecting {
        return make(Rule::Disconnecting, 1, None, "rail edges form an edge cut".into());
    }
    if !class.degree2_cornerpoints.is_empty() {
        let corners = format!("{:?}", class.degree2_cornerpoints);
        let (h1, _) = ladder::shorten(g, l, 1).ok()?;
        if let Some(c) = certify_tw_at_least(&h1, 3, budget) {
            return make(
                Rule::Degree2Cornerpoint,
                1,
                Some(c),
                format!("degree-2 cornerpoints {corners}; tw >= 3 certified at length 1"),
            );
        }
        if k > 2 {
            // the length-2 ladder left behind is itself the certificate
            let (h2, short) = ladder::shorten(g, l, 2).ok()?;
            let c = Certificate {
                k: 3,
                evidence: Evidence::Ladder { ladder: short.canonical() },
            };
            debug_assert!(ladder::classify(&h2, &short).is_ok_and(|c| c.tw3_certified));
            return make(
                Rule::Degree2Cornerpoint,
                2,
                Some(c),
                format!("degree-2 cornerpoints {corners}; no tw >= 3 certificate at length 1"),
            );
        }
    }
    if policy.allow_aggressive && k > policy.aggressive_target {
        let (h, _) = ladder::shorten(g, l, policy.aggressive_target).ok()?;
        match certify_tw_at_least(&h, 4, budget) {
            Some(c) => {
                return make(
                    Rule::Aggressive,
                    policy.aggressive_target,
                    Some(c),
                    "tw >= 4 certified on the shortened graph".into(),
                )
            }
            None => {
                let note = format!(
                    "aggressive rule skipped for ladder {:?}/{:?}: no tw >= 4 certificate",
                    l.top, l.bottom
                );
                if !notes.contains(&note) {
                    notes.push(note);
                }
            }
        }
    }
    if k > policy.general_target {
        return make(Rule::General, policy.general_target, None, String::new());
    }
    None
}

/// Re-applies the steps of `report` to `g`.
pub fn replay(g: &Graph, report: &ReductionReport) -> Result<Graph, ReplayError> {
    let mut g = g.clone();
    for (index, step) in report.steps.iter().enumerate() {
        g = match (step.rule, &step.ladder, step.vertex) {
            (Rule::SuppressDeg2, None, Some(v)) => g
                .suppress_degree2(v)
                .map_err(|source| ReplayError::Graph { index, source })?,
            (Rule::SuppressDeg2, _, _) => return Err(ReplayError::Malformed(index)),
            (_, Some(l), None) => {
                ladder::shorten(&g, l, step.length_after)
                    .map_err(|source| ReplayError::Ladder { index, source })?
                    .0
            }
            _ => return Err(ReplayError::Malformed(index)),
        };
    }
    Ok(g)
}

/// Vertices that occur in some step of the report.
pub fn touched_vertices(report: &ReductionReport) -> BTreeSet<Vertex> {
    report
        .steps
        .iter()
        .flat_map(|s| {
            s.ladder
                .iter()
                .flat_map(|l| l.vertices())
                .chain(s.vertex)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::exact_treewidth;
    use crate::graph::families;

    fn tw(g: &Graph) -> usize {
        exact_treewidth(g).unwrap().width
    }

    /// Length-`k` grid ladder whose corners are joined through an apex.
    fn apex_ladder(k: usize) -> Graph {
        let mut g = families::ladder_grid(k + 1);
        let apex = g.fresh_vertex();
        for c in [0, k, k + 1, 2 * k + 1] {
            g.insert_edge(apex, c);
        }
        g
    }

    #[test]
    fn policy_floors() {
        assert!(ReductionPolicy::default().check().is_ok());
        let low = ReductionPolicy {
            general_target: 3,
            ..Default::default()
        };
        assert_eq!(low.check(), Err(PolicyError::GeneralTarget(3)));
        let low = ReductionPolicy {
            aggressive_target: 2,
            ..Default::default()
        };
        assert!(reduce(&families::path(3), &low).is_err());
    }

    #[test]
    fn certificates() {
        let b = Budget::default();
        let c = certify_tw_at_least(&families::complete(5), 4, &b).unwrap();
        assert!(matches!(c.evidence, Evidence::Degeneracy { value: 4 }));
        assert!(certify_tw_at_least(&families::star(5), 2, &b).is_none());
        assert!(certify_tw_at_least(&families::cycle(5), 2, &b).is_some());
        let c = certify_tw_at_least(&apex_ladder(2), 3, &b).unwrap();
        assert!(matches!(c.evidence, Evidence::Ladder { .. }));
        assert!(certify_tw_at_least(&families::petersen(), 4, &b).is_some());
        assert!(certify_tw_at_least(&families::petersen(), 5, &b).is_none());
        assert!(certify_tw_at_least(&families::grid(3, 3), 4, &b).is_none());
    }

    #[test]
    fn no_ladders_means_no_steps() {
        let g = families::petersen();
        let (h, report) = reduce(&g, &ReductionPolicy::default()).unwrap();
        assert_eq!(h, g);
        assert!(report.steps.is_empty());
    }

    #[test]
    fn general_rule_stops_at_four() {
        // apex graph: every cornerpoint has degree 3, not disconnecting
        let mut g = apex_ladder(9);
        let [a, b, c, d] = [0, 10, 9, 19];
        let extra = g.fresh_vertex();
        for v in [a, b, c, d] {
            g.insert_edge(extra, v);
        }
        let (h, report) = reduce(&g, &ReductionPolicy::default()).unwrap();
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.steps[0].rule, Rule::General);
        assert_eq!(report.steps[0].length_after, 4);
        assert_eq!(ladder::find_ladders(&h, 2)[0].length(), 4);
        assert_eq!(tw(&g), tw(&h));
        assert_eq!(replay(&g, &report).unwrap(), h);
    }

    #[test]
    fn degree2_corner_goes_to_one() {
        let g = apex_ladder(6);
        // the apex has degree 4, the corners degree 3; drop one apex edge
        let mut g = g;
        let apex = 14;
        g.remove_edge(apex, 0).unwrap();
        let (h, report) = reduce(&g, &ReductionPolicy::default()).unwrap();
        assert_eq!(report.steps[0].rule, Rule::Degree2Cornerpoint);
        assert_eq!(tw(&g), tw(&h));
        assert_eq!(replay(&g, &report).unwrap(), h);
    }

    #[test]
    fn disconnecting_ladder_goes_to_one() {
        let mut g = families::ladder_grid(8);
        let k = families::complete(4);
        let off = g.next_id();
        for (u, v) in k.edges() {
            g.insert_edge(u + off, v + off);
        }
        g.insert_edge(0, off);
        g.insert_edge(8, off + 1);
        let (h, report) = reduce(&g, &ReductionPolicy::default()).unwrap();
        assert_eq!(report.steps.len(), 1);
        assert_eq!(report.steps[0].rule, Rule::Disconnecting);
        assert_eq!(report.steps[0].length_after, 1);
        assert_eq!(tw(&g), tw(&h));
    }

    #[test]
    fn aggressive_needs_certificate() {
        let g = apex_ladder(7);
        // apex ladder has treewidth 3: aggressive must be skipped
        let (h, report) = reduce(&g, &ReductionPolicy::aggressive()).unwrap();
        assert!(report.steps.iter().all(|s| s.rule != Rule::Aggressive));
        assert!(!report.notes.is_empty());
        assert_eq!(tw(&g), tw(&h));
    }

    #[test]
    fn report_json_round_trip() {
        let g = apex_ladder(7);
        let (_, report) = reduce(&g, &ReductionPolicy::default()).unwrap();
        let text = serde_json::to_string_pretty(&report).unwrap();
        let back: ReductionReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, report);
    }

    #[test]
    fn suppression_steps_replay() {
        let g = families::cycle(6);
        let policy = ReductionPolicy {
            suppress_degree2: true,
            ..Default::default()
        };
        let (h, report) = reduce(&g, &policy).unwrap();
        assert_eq!(h.num_vertices(), 3);
        assert_eq!(replay(&g, &report).unwrap(), h);
    }
}
