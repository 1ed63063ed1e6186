//! Potential functions ℰ(u, v) and the threshold rule they drive.
//!
//! A [`Potential`] pairs thresholds `α ≤ β` with a [`PairRule`]: a pure,
//! symmetric map from the radius-`c` ball around `(u, v)` to a real value.
//! Rules may also declare a conservative change filter that lets the engine
//! skip pairs whose edge state provably cannot change.

mod catalog;
mod functions;
mod merge;

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::{DynGraph, LocalView, NodeId, Pair};

pub use catalog::{
    community_potential, degree_like_potential, min_degree_potential, proper_degree_potential,
    rule110_branch, rule110_potential, rule110_value, Rule110Branch, RULE110_FILTER_CN,
};
pub use functions::{DegreeLikeFunction, ProperFunction, DEFAULT_SAMPLES};
pub use merge::{two_step_merge, two_step_merge_with, MergeMode};

/// `α ≤ β`, both finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    alpha: f64,
    beta: f64,
}

/// What the threshold rule does to a pair's edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Decision {
    Remove,
    Keep,
    Add,
}

impl Thresholds {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::config(format!(
                "thresholds must be finite (α={alpha}, β={beta})"
            )));
        }
        if alpha > beta {
            return Err(Error::config(format!("α={alpha} exceeds β={beta}")));
        }
        Ok(Thresholds { alpha, beta })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn decide(&self, value: f64) -> Decision {
        if value < self.alpha {
            Decision::Remove
        } else if value >= self.beta {
            Decision::Add
        } else {
            Decision::Keep
        }
    }

    /// Edge state after the rule, given the value and the current state.
    pub fn next_state(&self, value: f64, present: bool) -> bool {
        match self.decide(value) {
            Decision::Remove => false,
            Decision::Keep => present,
            Decision::Add => true,
        }
    }
}

/// Reusable per-thread buffers for row evaluation.
#[derive(Default)]
pub struct RowScratch {
    pub(crate) count: Vec<u32>,
    pub(crate) touched: Vec<NodeId>,
}

impl RowScratch {
    pub(crate) fn prepare(&mut self, n: usize) {
        if self.count.len() < n {
            self.count.resize(n, 0);
        }
    }
}

/// The local rule behind a potential.
///
/// `evaluate` must be symmetric in the view's two centers and may only
/// consult the view. The filter methods are optional accelerators: when
/// `has_change_filter` is true, `may_change` returning false must imply the
/// threshold rule leaves the pair's edge state alone, and `change_candidates`
/// must return a superset of the pairs for which `may_change` is true.
pub trait PairRule: Send + Sync {
    fn radius(&self) -> usize;

    fn evaluate(&self, view: &LocalView<'_>) -> f64;

    fn has_change_filter(&self) -> bool {
        false
    }

    fn may_change(&self, _view: &LocalView<'_>, _t: &Thresholds) -> bool {
        true
    }

    fn change_candidates(&self, _g: &DynGraph, _t: &Thresholds) -> Option<Vec<Pair>> {
        None
    }

    /// Pairs `(u, v)` with `v > u` whose next state, computed from values on
    /// `eval` and the current state in `reference`, differs from
    /// `reference`. The default evaluates every pair through a view.
    fn row_changes(
        &self,
        eval: &DynGraph,
        reference: &DynGraph,
        u: NodeId,
        t: &Thresholds,
        _scratch: &mut RowScratch,
        out: &mut Vec<(Pair, bool)>,
    ) -> Result<()> {
        let radius = self.radius();
        for v in u + 1..eval.node_count() as NodeId {
            let value = self.evaluate(&LocalView::new(eval, u, v, radius));
            push_change(value, reference, Pair::new(u, v), t, out)?;
        }
        Ok(())
    }

    /// For merged rules evaluated against a shared half-step graph: the base
    /// potential that produces it.
    fn lookahead_base(&self) -> Option<&Potential> {
        None
    }
}

pub(crate) fn push_change(
    value: f64,
    reference: &DynGraph,
    p: Pair,
    t: &Thresholds,
    out: &mut Vec<(Pair, bool)>,
) -> Result<()> {
    if value.is_nan() {
        return Err(Error::contract(format!(
            "potential returned NaN for pair {p}"
        )));
    }
    let present = reference.has_edge(p.lo(), p.hi());
    let next = t.next_state(value, present);
    if next != present {
        out.push((p, next));
    }
    Ok(())
}

/// A named potential with its thresholds.
#[derive(Clone)]
pub struct Potential {
    name: String,
    thresholds: Thresholds,
    rule: Arc<dyn PairRule>,
}

impl fmt::Debug for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Potential")
            .field("name", &self.name)
            .field("alpha", &self.thresholds.alpha)
            .field("beta", &self.thresholds.beta)
            .field("radius", &self.rule.radius())
            .finish()
    }
}

struct FnRule<F> {
    radius: usize,
    f: F,
}

impl<F> PairRule for FnRule<F>
where
    F: Fn(&LocalView<'_>) -> f64 + Send + Sync,
{
    fn radius(&self) -> usize {
        self.radius
    }

    fn evaluate(&self, view: &LocalView<'_>) -> f64 {
        (self.f)(view)
    }
}

impl Potential {
    pub fn new(name: impl Into<String>, thresholds: Thresholds, rule: Arc<dyn PairRule>) -> Self {
        Potential {
            name: name.into(),
            thresholds,
            rule,
        }
    }

    /// A potential from a closure over the local view, without a change filter.
    pub fn from_fn<F>(
        name: impl Into<String>,
        radius: usize,
        alpha: f64,
        beta: f64,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(&LocalView<'_>) -> f64 + Send + Sync + 'static,
    {
        Ok(Potential::new(
            name,
            Thresholds::new(alpha, beta)?,
            Arc::new(FnRule { radius, f }),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn thresholds(&self) -> Thresholds {
        self.thresholds
    }

    pub fn radius(&self) -> usize {
        self.rule.radius()
    }

    pub fn rule(&self) -> &dyn PairRule {
        &*self.rule
    }

    pub fn has_change_filter(&self) -> bool {
        self.rule.has_change_filter()
    }

    /// ℰ(u, v) on `g`.
    pub fn value(&self, g: &DynGraph, u: NodeId, v: NodeId) -> Result<f64> {
        g.check_node(u)?;
        g.check_node(v)?;
        if u == v {
            return Err(Error::input(format!(
                "pair ({u},{u}) must have distinct endpoints"
            )));
        }
        Ok(self.rule.evaluate(&LocalView::new(g, u, v, self.radius())))
    }

    /// The edge state the threshold rule assigns to `(u, v)` next round.
    pub fn next_state(&self, g: &DynGraph, u: NodeId, v: NodeId) -> Result<bool> {
        let value = self.value(g, u, v)?;
        if value.is_nan() {
            return Err(Error::contract(format!(
                "potential {} returned NaN",
                self.name
            )));
        }
        Ok(self.thresholds.next_state(value, g.has_edge(u, v)))
    }

    /// The conservative filter on `g`; always true without one.
    pub fn may_change(&self, g: &DynGraph, u: NodeId, v: NodeId) -> bool {
        !self.has_change_filter()
            || self
                .rule
                .may_change(&LocalView::new(g, u, v, self.radius()), &self.thresholds)
    }

    pub fn change_candidates(&self, g: &DynGraph) -> Option<Vec<Pair>> {
        if self.has_change_filter() {
            self.rule.change_candidates(g, &self.thresholds)
        } else {
            None
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_rule() {
        let t = Thresholds::new(2.0, 4.0).unwrap();
        assert_eq!(t.decide(1.0), Decision::Remove);
        assert_eq!(t.decide(2.0), Decision::Keep);
        assert_eq!(t.decide(3.9), Decision::Keep);
        assert_eq!(t.decide(4.0), Decision::Add);
        assert!(t.next_state(3.0, true));
        assert!(!t.next_state(3.0, false));
        assert!(matches!(Thresholds::new(5.0, 4.0), Err(Error::Config(_))));
        assert!(Thresholds::new(f64::NAN, 4.0).is_err());
    }

    #[test]
    fn closure_potentials() {
        let p = Potential::from_fn("const", 0, 3.0, 3.0, |_| 3.0).unwrap();
        let g = DynGraph::new(3);
        assert_eq!(p.value(&g, 0, 2).unwrap(), 3.0);
        assert!(p.next_state(&g, 0, 2).unwrap());
        assert!(p.value(&g, 0, 0).is_err());
        assert!(p.value(&g, 0, 9).is_err());
        assert!(p.change_candidates(&g).is_none());
    }

    #[test]
    fn nan_is_a_contract_error() {
        let p = Potential::from_fn("nan", 0, 0.0, 0.0, |_| f64::NAN).unwrap();
        let g = DynGraph::new(2);
        assert!(matches!(p.next_state(&g, 0, 1), Err(Error::Contract(_))));
    }
}
