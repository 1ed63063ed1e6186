use std::collections::BTreeMap;
use std::fmt;

use super::RunTrace;
use crate::graph::{DynGraph, NodeId};

/// Nodes grouped by degree, highest degree first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeClasses {
    pub classes: Vec<Vec<NodeId>>,
    pub degrees: Vec<usize>,
}

impl DegreeClasses {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(Vec::len).collect()
    }
}

pub fn degree_classes(g: &DynGraph) -> DegreeClasses {
    let mut by_degree: BTreeMap<usize, Vec<NodeId>> = BTreeMap::new();
    for u in g.nodes() {
        by_degree.entry(g.degree(u)).or_default().push(u);
    }
    let (degrees, classes) = by_degree.into_iter().rev().unzip();
    DegreeClasses { classes, degrees }
}

/// One failed check, with the round `t` it was evaluated at (comparing `G(t)`
/// with `G(t+1)` where relevant) and the nodes that witness it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyViolation {
    pub check: &'static str,
    pub round: usize,
    pub witness: Vec<NodeId>,
    pub detail: String,
}

impl fmt::Display for PropertyViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} at round {} (nodes {:?}): {}",
            self.check, self.round, self.witness, self.detail
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct DegreeReport {
    pub rounds_checked: usize,
    pub violations: Vec<PropertyViolation>,
    /// Largest `t` with `G(t) ≠ G(t−1)`, or 0.
    pub last_change: usize,
    /// Degree-class count of `G(0)`.
    pub initial_classes: usize,
}

impl DegreeReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    /// The stabilization bound: the last change happens no later than
    /// `|G(0)| + 1`.
    pub fn within_bound(&self) -> bool {
        self.last_change <= self.initial_classes + 1
    }
}

/// Checks the degree-order properties of a complete-scheduler run with
/// `α = β` and a proper `f`, given the graph sequence `G(0), G(1), …`.
///
/// For every `t ≥ 1`:
/// * order: `d_t(u) ≥ d_t(w)` implies `d_{t+1}(u) ≥ d_{t+1}(w)`;
/// * equal degrees: `d_t(u) = d_t(w)` implies `N_{t+1}(u)∖{w} = N_{t+1}(w)∖{u}`;
/// * class count: `|G(t+1)| ≤ |G(t)|`;
/// * class sizes: equal class counts imply equal class sizes, rank by rank;
/// * nesting: if `u` is adjacent to some `w`, it is adjacent to every other
///   node of degree at least `d_t(w)`.
pub fn check_degree_properties(graphs: &[DynGraph]) -> DegreeReport {
    let mut report = DegreeReport {
        initial_classes: graphs.first().map_or(0, |g| g.degree_class_count()),
        last_change: graphs
            .windows(2)
            .rposition(|w| w[0] != w[1])
            .map_or(0, |i| i + 1),
        ..Default::default()
    };
    for t in 1..graphs.len() {
        report.rounds_checked += 1;
        check_nesting(&graphs[t], t, &mut report.violations);
        if let Some(next) = graphs.get(t + 1) {
            check_transition(&graphs[t], next, t, &mut report.violations);
        }
    }
    report
}

fn check_transition(g: &DynGraph, next: &DynGraph, t: usize, out: &mut Vec<PropertyViolation>) {
    let classes = degree_classes(g);
    // Order: every node of a higher class ends at least as high as every
    // node of the next lower class.
    for k in 1..classes.len() {
        let hi = &classes.classes[k - 1];
        let lo = &classes.classes[k];
        let weakest = hi.iter().min_by_key(|&&u| next.degree(u)).unwrap();
        let strongest = lo.iter().max_by_key(|&&w| next.degree(w)).unwrap();
        if next.degree(*weakest) < next.degree(*strongest) {
            out.push(PropertyViolation {
                check: "degree order",
                round: t,
                witness: vec![*weakest, *strongest],
                detail: format!(
                    "degrees {}≥{} became {}<{}",
                    g.degree(*weakest),
                    g.degree(*strongest),
                    next.degree(*weakest),
                    next.degree(*strongest)
                ),
            });
        }
    }
    for class in &classes.classes {
        let u = class[0];
        for &w in &class[1..] {
            let nu: Vec<NodeId> = next
                .neighbors(u)
                .iter()
                .copied()
                .filter(|&x| x != w)
                .collect();
            let nw: Vec<NodeId> = next
                .neighbors(w)
                .iter()
                .copied()
                .filter(|&x| x != u)
                .collect();
            if nu != nw {
                out.push(PropertyViolation {
                    check: "equal degree",
                    round: t,
                    witness: vec![u, w],
                    detail: "equal degrees but different next neighborhoods".into(),
                });
            }
        }
    }
    let next_classes = degree_classes(next);
    if next_classes.len() > classes.len() {
        out.push(PropertyViolation {
            check: "class count",
            round: t,
            witness: vec![],
            detail: format!("{} classes became {}", classes.len(), next_classes.len()),
        });
    } else if next_classes.len() == classes.len() && next_classes.sizes() != classes.sizes() {
        out.push(PropertyViolation {
            check: "class sizes",
            round: t,
            witness: vec![],
            detail: format!(
                "sizes {:?} became {:?}",
                classes.sizes(),
                next_classes.sizes()
            ),
        });
    }
}

fn check_nesting(g: &DynGraph, t: usize, out: &mut Vec<PropertyViolation>) {
    let n = g.node_count();
    // at_least[d] = number of nodes with degree ≥ d.
    let max = g.max_degree();
    let mut at_least = vec![0usize; max + 2];
    for (d, slot) in at_least.iter_mut().enumerate().take(max + 1) {
        *slot = g.nodes_with_degree(d);
    }
    for d in (0..=max).rev() {
        at_least[d] += at_least[d + 1];
    }
    for u in 0..n as NodeId {
        let Some(dmin) = g.neighbors(u).iter().map(|&w| g.degree(w)).min() else {
            continue;
        };
        let expected = at_least[dmin] - usize::from(g.degree(u) >= dmin);
        if g.degree(u) != expected {
            let missing = g
                .nodes()
                .find(|&x| x != u && g.degree(x) >= dmin && !g.has_edge(u, x))
                .unwrap_or(u);
            out.push(PropertyViolation {
                check: "nesting",
                round: t,
                witness: vec![u, missing],
                detail: format!(
                    "neighbor degree {dmin} reached but node {missing} is not adjacent"
                ),
            });
        }
    }
}

/// Nodes whose neighborhood did not change during the last `window` rounds
/// of the run. After a stabilized run this is every node.
pub fn frozen_nodes(trace: &RunTrace, window: u64) -> Vec<NodeId> {
    let all = (0..trace.node_count as NodeId).collect();
    if trace.stabilized() {
        return all;
    }
    let window = window.max(1);
    let horizon = trace.rounds.saturating_sub(window);
    trace
        .last_touched
        .iter()
        .enumerate()
        .filter(|(_, last)| last.is_none_or(|r| r < horizon))
        .map(|(u, _)| u as NodeId)
        .collect()
}
