//! Synchronous round execution of the threshold protocol.
//!
//! Every round reads only the pre-round graph: the scheduler picks the
//! interaction set, each pair's next edge state is computed from its
//! potential on `G(t)`, and the resulting [`EdgeDelta`] is applied in one
//! exclusive phase. Pair evaluations within a round run in parallel.

mod diagnostics;
mod run;
mod trace_io;

use std::collections::HashSet;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{DynGraph, EdgeDelta, LocalView, NodeId, Pair};
use crate::potentials::{push_change, PairRule, Potential, RowScratch, Thresholds};
use crate::schedulers::InteractionSet;

pub use diagnostics::{
    check_degree_properties, degree_classes, frozen_nodes, DegreeClasses, DegreeReport,
    PropertyViolation,
};
pub use run::{run, RunConfig, RunOutcome, Runner, StopMode, TraceDetail};
pub use trace_io::{read_trace, write_trace, TraceHeader, TraceLine};

use serde::{Deserialize, Serialize};

/// How a run ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Verdict {
    /// `G(at)` is final: the scheduler's quiescence condition held from `at` on.
    Stabilized {
        at: u64,
    },
    /// `G(t + period) = G(t)` with the scheduler in the same phase, for every
    /// `t ≥ entered_at`.
    Cycle {
        period: u64,
        entered_at: u64,
    },
    BudgetExhausted {
        rounds: u64,
    },
}

/// Summary of one round (or, in compact traces, of a span of quiet rounds).
/// Graph statistics describe `G(round)`, the graph the round read.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: u64,
    pub span: u64,
    pub interactions: u64,
    pub additions: u64,
    pub removals: u64,
    pub degree_classes: u64,
    pub fingerprint: String,
}

/// Everything a run leaves behind apart from the final graph.
#[derive(Debug, Clone)]
pub struct RunTrace {
    pub seed: u64,
    pub node_count: usize,
    pub potential: String,
    pub scheduler: String,
    pub rounds_per_step: u64,
    pub records: Vec<RoundRecord>,
    pub verdict: Verdict,
    /// Rounds executed; the final graph is `G(rounds)`.
    pub rounds: u64,
    /// Rounds whose delta was nonempty.
    pub change_rounds: u64,
    pub total_changes: u64,
    /// Index of the last round whose delta was nonempty.
    pub last_change: Option<u64>,
    /// Per node, the last round whose delta touched it.
    pub last_touched: Vec<Option<u64>>,
    pub initial_fingerprint: String,
    pub final_fingerprint: String,
    pub metadata: std::collections::BTreeMap<String, String>,
}

impl RunTrace {
    pub fn stabilized(&self) -> bool {
        matches!(self.verdict, Verdict::Stabilized { .. })
    }
}

/// The delta one synchronous round produces.
///
/// With `prune`, potentials that declare a change filter skip the pairs the
/// filter rules out; the result is identical either way.
pub fn step(
    g: &DynGraph,
    potential: &Potential,
    interactions: &InteractionSet,
    prune: bool,
) -> Result<EdgeDelta> {
    interactions.validate(g.node_count())?;
    if let Some(base) = potential.rule().lookahead_base() {
        let half = step(
            g,
            base,
            &InteractionSet::AllPairs { n: g.node_count() },
            prune,
        )?;
        let mut h = g.clone();
        h.apply_delta(&half)?;
        let forced: HashSet<Pair> = half
            .additions
            .iter()
            .chain(&half.removals)
            .copied()
            .collect();
        let ctx = Decide {
            eval: &h,
            reference: g,
            rule: base.rule(),
            thresholds: potential.thresholds(),
            prune: prune && base.has_change_filter(),
            forced: &forced,
        };
        return ctx.run(interactions);
    }
    let forced = HashSet::new();
    let ctx = Decide {
        eval: g,
        reference: g,
        rule: potential.rule(),
        thresholds: potential.thresholds(),
        prune: prune && potential.has_change_filter(),
        forced: &forced,
    };
    ctx.run(interactions)
}

/// Values come from `eval`; current edge states from `reference`.
struct Decide<'a> {
    eval: &'a DynGraph,
    reference: &'a DynGraph,
    rule: &'a dyn PairRule,
    thresholds: Thresholds,
    prune: bool,
    /// Pairs that must be evaluated even if the filter rules them out.
    forced: &'a HashSet<Pair>,
}

impl Decide<'_> {
    fn run(&self, interactions: &InteractionSet) -> Result<EdgeDelta> {
        let changes: Vec<(Pair, bool)> = match interactions {
            InteractionSet::AllPairs { .. } if self.prune => {
                let mut cands = self
                    .rule
                    .change_candidates(self.eval, &self.thresholds)
                    .ok_or_else(|| {
                        Error::contract("change filter without candidate enumeration")
                    })?;
                cands.extend(self.forced.iter().copied());
                cands.sort_unstable();
                cands.dedup();
                self.pairs(&cands)?
            }
            InteractionSet::AllPairs { n } => {
                let rows: Vec<Vec<(Pair, bool)>> = (0..*n as NodeId)
                    .into_par_iter()
                    .map_init(RowScratch::default, |scratch, u| {
                        let mut out = Vec::new();
                        self.rule
                            .row_changes(
                                self.eval,
                                self.reference,
                                u,
                                &self.thresholds,
                                scratch,
                                &mut out,
                            )
                            .map(|_| out)
                    })
                    .collect::<Result<_>>()?;
                rows.into_iter().flatten().collect()
            }
            InteractionSet::Listed(pairs) => self.pairs(pairs)?,
        };
        let mut delta = EdgeDelta::default();
        for (p, state) in changes {
            if state {
                delta.additions.push(p);
            } else {
                delta.removals.push(p);
            }
        }
        delta.additions.sort_unstable();
        delta.removals.sort_unstable();
        Ok(delta)
    }

    fn pairs(&self, pairs: &[Pair]) -> Result<Vec<(Pair, bool)>> {
        let one = |p: &Pair| -> Result<Option<(Pair, bool)>> {
            let view = LocalView::new(self.eval, p.lo(), p.hi(), self.rule.radius());
            if self.prune
                && !self.forced.contains(p)
                && !self.rule.may_change(&view, &self.thresholds)
            {
                return Ok(None);
            }
            let mut out = Vec::with_capacity(1);
            push_change(
                self.rule.evaluate(&view),
                self.reference,
                *p,
                &self.thresholds,
                &mut out,
            )?;
            Ok(out.pop())
        };
        if pairs.len() < 64 {
            return pairs.iter().filter_map(|p| one(p).transpose()).collect();
        }
        pairs
            .par_iter()
            .filter_map(|p| one(p).transpose())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, cycle, gnp, path};
    use crate::potentials::{
        community_potential, min_degree_potential, proper_degree_potential, rule110_potential,
        two_step_merge, two_step_merge_with, MergeMode, ProperFunction,
    };
    use crate::rng::sim_rng;

    fn sum(alpha: f64, beta: f64) -> Potential {
        proper_degree_potential(ProperFunction::named("sum").unwrap(), alpha, beta).unwrap()
    }

    #[test]
    fn min_degree_on_path() {
        let p = min_degree_potential(2.0, 4.0).unwrap();
        let g = path(3);
        let d = step(&g, &p, &InteractionSet::AllPairs { n: 3 }, false).unwrap();
        assert!(d.additions.is_empty());
        assert_eq!(d.removals, vec![Pair::new(0, 1), Pair::new(1, 2)]);
    }

    #[test]
    fn sum_on_c4_adds_diagonals() {
        let g = cycle(4).unwrap();
        let d = step(
            &g,
            &sum(4.0, 4.0),
            &InteractionSet::AllPairs { n: 4 },
            false,
        )
        .unwrap();
        assert_eq!(d.additions, vec![Pair::new(0, 2), Pair::new(1, 3)]);
        assert!(d.removals.is_empty());
    }

    #[test]
    fn empty_interactions_empty_delta() {
        let g = complete(4);
        let d = step(&g, &sum(100.0, 100.0), &InteractionSet::empty(), true).unwrap();
        assert!(d.is_empty());
    }

    #[test]
    fn listed_order_does_not_matter() {
        let g = gnp(12, 0.4, &mut sim_rng(5)).unwrap();
        let p = sum(7.0, 9.0);
        let mut pairs = InteractionSet::AllPairs { n: 12 }.pairs();
        let a = step(&g, &p, &InteractionSet::Listed(pairs.clone()), false).unwrap();
        pairs.reverse();
        let b = step(&g, &p, &InteractionSet::Listed(pairs), false).unwrap();
        assert_eq!(a, b);
        let c = step(&g, &p, &InteractionSet::AllPairs { n: 12 }, false).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn duplicate_interactions_rejected() {
        let g = DynGraph::new(3);
        let set = InteractionSet::Listed(vec![Pair::new(0, 1), Pair::new(0, 1)]);
        assert!(matches!(
            step(&g, &sum(0.0, 1.0), &set, false),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn nan_potential_aborts() {
        let p = Potential::from_fn("nan", 1, 0.0, 0.0, |_| f64::NAN).unwrap();
        let g = DynGraph::new(3);
        assert!(matches!(
            step(&g, &p, &InteractionSet::AllPairs { n: 3 }, false),
            Err(Error::Contract(_))
        ));
    }

    #[test]
    fn pruning_is_exact_for_filtered_potentials() {
        for seed in 0..15 {
            let g = gnp(40, 0.15 + 0.05 * (seed % 4) as f64, &mut sim_rng(seed)).unwrap();
            let all = InteractionSet::AllPairs { n: 40 };
            for p in [
                community_potential(3.0, 5.0).unwrap(),
                rule110_potential(2.0).unwrap(),
                two_step_merge_with(
                    community_potential(3.0, 3.0).unwrap(),
                    MergeMode::SharedHalfStep,
                )
                .unwrap(),
            ] {
                assert_eq!(
                    step(&g, &p, &all, true).unwrap(),
                    step(&g, &p, &all, false).unwrap(),
                    "{}",
                    p.name()
                );
            }
        }
    }

    #[test]
    fn shared_half_step_matches_per_pair() {
        for seed in 0..10 {
            let g = gnp(10, 0.3, &mut sim_rng(seed)).unwrap();
            let base = community_potential(2.0, 2.0).unwrap();
            let per_pair = two_step_merge(base.clone()).unwrap();
            let shared = two_step_merge_with(base, MergeMode::SharedHalfStep).unwrap();
            let all = InteractionSet::AllPairs { n: 10 };
            let a = step(&g, &per_pair, &all, false).unwrap();
            assert_eq!(a, step(&g, &shared, &all, false).unwrap());
            assert_eq!(a, step(&g, &shared, &all, true).unwrap());
            assert_eq!(a, step(&g, &per_pair, &all, true).unwrap());
        }
    }
}
