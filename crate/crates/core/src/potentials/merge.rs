use std::sync::Arc;

use super::{PairRule, Potential, Thresholds};
use crate::error::{Error, Result};
use crate::graph::{DynGraph, LocalView, NodeId, Pair};

/// How the engine evaluates a merged potential.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MergeMode {
    /// Every evaluation rebuilds its own radius-3 neighborhood and half step.
    PerPair,
    /// The engine computes the half-step graph once per round and evaluates
    /// the base rule on it. Agrees with `PerPair` whenever the base rule only
    /// creates edges between nodes at distance ≤ 2.
    SharedHalfStep,
}

struct Merged {
    base: Potential,
    mode: MergeMode,
}

/// Radius-3 potential equivalent to two synchronous rounds of `base` under
/// the complete scheduler: it advances the distance-2 neighborhood of the
/// pair by one half step and evaluates `base` there.
pub fn two_step_merge(base: Potential) -> Result<Potential> {
    two_step_merge_with(base, MergeMode::PerPair)
}

pub fn two_step_merge_with(base: Potential, mode: MergeMode) -> Result<Potential> {
    if base.radius() != 1 {
        return Err(Error::config(format!(
            "two-step merge needs a radius-1 base, {} has radius {}",
            base.name(),
            base.radius()
        )));
    }
    Ok(Potential::new(
        format!("merged[{}]", base.name()),
        base.thresholds(),
        Arc::new(Merged { base, mode }),
    ))
}

/// One complete-scheduler round of `base` on `g`, restricted to pairs whose
/// endpoints both satisfy `keep`.
pub(crate) fn half_step(
    base: &Potential,
    g: &DynGraph,
    keep: impl Fn(NodeId) -> bool,
) -> Result<DynGraph> {
    let pairs: Vec<Pair> = match base.change_candidates(g) {
        Some(c) => c,
        None => {
            let mut all = Vec::new();
            for u in g.nodes().filter(|&u| keep(u)) {
                all.extend(
                    (u + 1..g.node_count() as NodeId)
                        .filter(|&v| keep(v))
                        .map(|v| Pair::new(u, v)),
                );
            }
            all
        }
    };
    let mut next = g.clone();
    for p in pairs.into_iter().filter(|p| keep(p.lo()) && keep(p.hi())) {
        let state = base.next_state(g, p.lo(), p.hi())?;
        if state {
            next.add_edge(p.lo(), p.hi())?;
        } else {
            next.remove_edge(p.lo(), p.hi())?;
        }
    }
    Ok(next)
}

struct Aux {
    graph: DynGraph,
    u: NodeId,
    v: NodeId,
    present_before: bool,
}

impl Merged {
    fn aux(&self, view: &LocalView<'_>) -> Aux {
        let nodes = view.members();
        let local = |x: NodeId| nodes.binary_search(&x).ok().map(|i| i as NodeId);
        let adj: Vec<Vec<NodeId>> = nodes
            .iter()
            .map(|&x| view.neighbors(x).iter().filter_map(|&y| local(y)).collect())
            .collect();
        let ball = DynGraph::from_adjacency(adj);
        let inner: Vec<bool> = nodes
            .iter()
            .map(|&x| view.distance(x).is_some_and(|d| d <= 2))
            .collect();
        let stepped = half_step(&self.base, &ball, |x| inner[x as usize])
            .expect("half step on a well-formed ball");
        let keep: Vec<NodeId> = (0..nodes.len() as NodeId)
            .filter(|&x| inner[x as usize])
            .collect();
        let relabel = |x: NodeId| keep.binary_search(&x).ok().map(|i| i as NodeId);
        let adj: Vec<Vec<NodeId>> = keep
            .iter()
            .map(|&x| {
                stepped
                    .neighbors(x)
                    .iter()
                    .filter_map(|&y| relabel(y))
                    .collect()
            })
            .collect();
        Aux {
            graph: DynGraph::from_adjacency(adj),
            u: relabel(local(view.u()).unwrap()).unwrap(),
            v: relabel(local(view.v()).unwrap()).unwrap(),
            present_before: view.has_edge(),
        }
    }
}

impl PairRule for Merged {
    fn radius(&self) -> usize {
        3
    }

    fn evaluate(&self, view: &LocalView<'_>) -> f64 {
        let aux = self.aux(view);
        self.base
            .rule()
            .evaluate(&LocalView::new(&aux.graph, aux.u, aux.v, 1))
    }

    fn has_change_filter(&self) -> bool {
        self.base.has_change_filter()
    }

    fn may_change(&self, view: &LocalView<'_>, t: &Thresholds) -> bool {
        let aux = self.aux(view);
        aux.graph.has_edge(aux.u, aux.v) != aux.present_before
            || self
                .base
                .rule()
                .may_change(&LocalView::new(&aux.graph, aux.u, aux.v, 1), t)
    }

    fn change_candidates(&self, g: &DynGraph, _t: &Thresholds) -> Option<Vec<Pair>> {
        let h = half_step(&self.base, g, |_| true).ok()?;
        let mut out = self.base.change_candidates(&h)?;
        let diff = g.diff(&h).ok()?;
        out.extend(diff.additions);
        out.extend(diff.removals);
        out.sort_unstable();
        out.dedup();
        Some(out)
    }

    fn lookahead_base(&self) -> Option<&Potential> {
        (self.mode == MergeMode::SharedHalfStep).then_some(&self.base)
    }
}
