//! k-core / (k−1)-crust by classical peeling, used as ground truth for the
//! min-degree dynamics.

use std::fmt;

use crate::graph::{DynGraph, NodeId, Pair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreDecomposition {
    pub k: usize,
    /// Nodes of the k-core, ascending.
    pub core: Vec<NodeId>,
    /// Everything else, ascending.
    pub crust: Vec<NodeId>,
}

impl CoreDecomposition {
    pub fn in_core(&self, u: NodeId) -> bool {
        self.core.binary_search(&u).is_ok()
    }

    /// Edges of `g` with both endpoints in the core.
    pub fn core_edges(&self, g: &DynGraph) -> Vec<Pair> {
        g.edges()
            .filter(|p| self.in_core(p.lo()) && self.in_core(p.hi()))
            .collect()
    }
}

/// Repeatedly deletes nodes of degree `< k`, with a bucket queue over
/// current degrees (O(n + m)).
pub fn peel(g: &DynGraph, k: usize) -> CoreDecomposition {
    let n = g.node_count();
    let mut degree: Vec<usize> = g.nodes().map(|u| g.degree(u)).collect();
    let mut removed = vec![false; n];
    let mut queue: Vec<NodeId> = g.nodes().filter(|&u| degree[u as usize] < k).collect();
    let mut queued = vec![false; n];
    for &u in &queue {
        queued[u as usize] = true;
    }
    while let Some(u) = queue.pop() {
        removed[u as usize] = true;
        for &w in g.neighbors(u) {
            let w_i = w as usize;
            if removed[w_i] {
                continue;
            }
            degree[w_i] -= 1;
            if degree[w_i] < k && !queued[w_i] {
                queued[w_i] = true;
                queue.push(w);
            }
        }
    }
    let (crust, core): (Vec<NodeId>, Vec<NodeId>) = g.nodes().partition(|&u| removed[u as usize]);
    CoreDecomposition { k, core, crust }
}

/// Outcome of comparing a min-degree run against the peeling oracle.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KcoreReport {
    /// Crust nodes that still have edges.
    pub crust_not_isolated: Vec<NodeId>,
    /// Core nodes left isolated (only meaningful for `k ≥ 1`).
    pub core_isolated: Vec<NodeId>,
    /// Core edges of `G(0)` missing from the final graph.
    pub missing_edges: Vec<Pair>,
    /// Final edges that are not core edges of `G(0)`.
    pub extra_edges: Vec<Pair>,
}

impl KcoreReport {
    pub fn passed(&self) -> bool {
        self.crust_not_isolated.is_empty()
            && self.core_isolated.is_empty()
            && self.missing_edges.is_empty()
            && self.extra_edges.is_empty()
    }
}

impl fmt::Display for KcoreReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "pass");
        }
        write!(
            f,
            "fail: crust nodes with edges {:?}; isolated core nodes {:?}; missing edges {:?}; extra edges {:?}",
            self.crust_not_isolated, self.core_isolated, self.missing_edges, self.extra_edges
        )
    }
}

/// Checks that `final_graph` is exactly the `alpha`-core of `g0` with its
/// original edges, and that every crust node ended isolated.
pub fn verify_kcore_run(final_graph: &DynGraph, g0: &DynGraph, alpha: usize) -> KcoreReport {
    let dec = peel(g0, alpha);
    let mut report = KcoreReport::default();
    for &u in &dec.crust {
        if final_graph.degree(u) > 0 {
            report.crust_not_isolated.push(u);
        }
    }
    if alpha >= 1 {
        report.core_isolated = dec
            .core
            .iter()
            .copied()
            .filter(|&u| final_graph.degree(u) == 0)
            .collect();
    }
    let expected = dec.core_edges(g0);
    let actual: Vec<Pair> = final_graph.edges().collect();
    report.missing_edges = expected
        .iter()
        .copied()
        .filter(|p| !final_graph.has_edge(p.lo(), p.hi()))
        .collect();
    report.extra_edges = actual
        .into_iter()
        .filter(|p| !(g0.has_edge(p.lo(), p.hi()) && dec.in_core(p.lo()) && dec.in_core(p.hi())))
        .collect();
    report
}
