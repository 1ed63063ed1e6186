use std::collections::{BTreeMap, HashMap, VecDeque};

use super::{step, RoundRecord, RunTrace, Verdict};
use crate::error::{Error, Result};
use crate::graph::{DynGraph, EdgeDelta, Fingerprint};
use crate::potentials::Potential;
use crate::rng::{sim_rng, SimRng};
use crate::schedulers::{Quiescence, Scheduler};

/// When the run loop stops early.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopMode {
    /// Stop once the scheduler's quiescence condition certifies a fixed point.
    FixedPoint,
    /// Also stop on a confirmed cycle.
    Cycle,
    /// Always run `max_rounds`; the verdict still reports the first
    /// stabilization or cycle observed.
    Budget,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceDetail {
    /// One record per round.
    Full,
    /// Consecutive unchanged rounds share one record.
    Compact,
}

pub struct RunConfig {
    pub initial_graph: DynGraph,
    pub potential: Potential,
    pub scheduler: Box<dyn Scheduler>,
    pub max_rounds: u64,
    pub stop_mode: StopMode,
    pub prune: bool,
    pub seed: u64,
    /// Overrides the scheduler's quiet streak for randomized schedulers.
    pub quiet_streak: Option<u64>,
    /// Rounds of fingerprints kept for cycle detection.
    pub cycle_history: usize,
    /// Recent graphs kept for exact cycle confirmation; older matches are
    /// confirmed by running one more period.
    pub snapshot_window: usize,
    pub trace_detail: TraceDetail,
    /// Engine rounds per modeled time step (2 for half-step simulations).
    pub rounds_per_step: u64,
    pub metadata: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn new(
        initial_graph: DynGraph,
        potential: Potential,
        scheduler: Box<dyn Scheduler>,
    ) -> Self {
        RunConfig {
            initial_graph,
            potential,
            scheduler,
            max_rounds: 10_000,
            stop_mode: StopMode::Cycle,
            prune: true,
            seed: 0,
            quiet_streak: None,
            cycle_history: 4096,
            snapshot_window: 8,
            trace_detail: TraceDetail::Full,
            rounds_per_step: 1,
            metadata: BTreeMap::new(),
        }
    }

    pub fn max_rounds(mut self, rounds: u64) -> Self {
        self.max_rounds = rounds;
        self
    }

    pub fn stop_mode(mut self, mode: StopMode) -> Self {
        self.stop_mode = mode;
        self
    }

    pub fn prune(mut self, prune: bool) -> Self {
        self.prune = prune;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn quiet_streak(mut self, rounds: u64) -> Self {
        self.quiet_streak = Some(rounds);
        self
    }

    pub fn trace_detail(mut self, detail: TraceDetail) -> Self {
        self.trace_detail = detail;
        self
    }

    pub fn rounds_per_step(mut self, rounds: u64) -> Self {
        self.rounds_per_step = rounds;
        self
    }

    pub fn metadata(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.to_string(), value.to_string());
        self
    }
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub trace: RunTrace,
    pub final_graph: DynGraph,
}

/// A candidate cycle awaiting confirmation by re-running one period.
struct PendingCycle {
    graph: DynGraph,
    phase: u64,
    at: u64,
    period: u64,
}

/// Step-by-step execution of a [`RunConfig`].
pub struct Runner {
    potential: Potential,
    scheduler: Box<dyn Scheduler>,
    max_rounds: u64,
    stop_mode: StopMode,
    prune: bool,
    quiet_needed: Option<u64>,
    detail: TraceDetail,
    cycle_history: usize,
    snapshot_window: usize,
    detect_cycles: bool,
    rng: SimRng,
    graph: DynGraph,
    round: u64,
    quiet: u64,
    verdict: Option<Verdict>,
    done: bool,
    seen: HashMap<(Fingerprint, u64), u64>,
    seen_order: VecDeque<(Fingerprint, u64)>,
    snapshots: VecDeque<(u64, DynGraph)>,
    pending: Option<PendingCycle>,
    trace: RunTrace,
}

impl Runner {
    pub fn new(config: RunConfig) -> Result<Self> {
        if config.max_rounds == 0 {
            return Err(Error::config("max_rounds must be at least 1"));
        }
        if config.rounds_per_step == 0 {
            return Err(Error::config("rounds_per_step must be at least 1"));
        }
        let g = config.initial_graph;
        let n = g.node_count();
        config.scheduler.validate(n)?;
        let quiet_needed = match config.scheduler.quiescence(n) {
            Quiescence::GraphDetermined => Some(1),
            Quiescence::Rounds(p) => Some(p.max(1)),
            Quiescence::Streak(l) => Some(config.quiet_streak.unwrap_or(l).max(1)),
        };
        let detect_cycles =
            config.stop_mode != StopMode::FixedPoint && config.scheduler.phase(0, n).is_some();
        let fp = g.fingerprint().to_string();
        let trace = RunTrace {
            seed: config.seed,
            node_count: n,
            potential: config.potential.name().to_string(),
            scheduler: config.scheduler.name(),
            rounds_per_step: config.rounds_per_step,
            records: Vec::new(),
            verdict: Verdict::BudgetExhausted { rounds: 0 },
            rounds: 0,
            change_rounds: 0,
            total_changes: 0,
            last_change: None,
            last_touched: vec![None; n],
            initial_fingerprint: fp.clone(),
            final_fingerprint: fp,
            metadata: config.metadata,
        };
        let mut runner = Runner {
            potential: config.potential,
            scheduler: config.scheduler,
            max_rounds: config.max_rounds,
            stop_mode: config.stop_mode,
            prune: config.prune,
            quiet_needed,
            detail: config.trace_detail,
            cycle_history: config.cycle_history.max(1),
            snapshot_window: config.snapshot_window,
            detect_cycles,
            rng: sim_rng(config.seed),
            graph: g,
            round: 0,
            quiet: 0,
            verdict: None,
            done: false,
            seen: HashMap::new(),
            seen_order: VecDeque::new(),
            snapshots: VecDeque::new(),
            pending: None,
            trace,
        };
        runner.remember_state();
        Ok(runner)
    }

    pub fn graph(&self) -> &DynGraph {
        &self.graph
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn is_done(&self) -> bool {
        self.done
    }

    /// Executes one round. Returns the verdict once the run is over.
    pub fn advance(&mut self) -> Result<Option<Verdict>> {
        if self.done {
            return Ok(Some(self.trace.verdict));
        }
        let t = self.round;
        let n = self.graph.node_count();
        let interactions = self.scheduler.interactions(t, &self.graph, &mut self.rng)?;
        let delta = step(&self.graph, &self.potential, &interactions, self.prune)?;
        self.record(t, interactions.len(), &delta);
        self.graph.apply_delta(&delta)?;
        self.round += 1;

        if delta.is_empty() {
            self.quiet += 1;
        } else {
            self.quiet = 0;
            self.trace.change_rounds += 1;
            self.trace.total_changes += delta.len() as u64;
            self.trace.last_change = Some(t);
            for p in delta.additions.iter().chain(&delta.removals) {
                self.trace.last_touched[p.lo() as usize] = Some(t);
                self.trace.last_touched[p.hi() as usize] = Some(t);
            }
        }

        if self.verdict.is_none() && self.quiet_needed.is_some_and(|q| self.quiet >= q) {
            let at = self.trace.last_change.map_or(0, |r| r + 1);
            self.verdict = Some(Verdict::Stabilized { at });
        }
        if self.detect_cycles && self.verdict.is_none() {
            self.detect_cycle(n)?;
        }
        let stop = matches!(
            (self.stop_mode, self.verdict),
            (StopMode::FixedPoint, Some(Verdict::Stabilized { .. })) | (StopMode::Cycle, Some(_))
        );
        if stop || self.round >= self.max_rounds {
            self.done = true;
            self.trace.verdict = self
                .verdict
                .unwrap_or(Verdict::BudgetExhausted { rounds: self.round });
            self.trace.rounds = self.round;
            self.trace.final_fingerprint = self.graph.fingerprint().to_string();
            return Ok(Some(self.trace.verdict));
        }
        Ok(None)
    }

    fn record(&mut self, t: u64, interactions: u64, delta: &EdgeDelta) {
        let quiet = delta.is_empty();
        if self.detail == TraceDetail::Compact && quiet {
            if let Some(last) = self.trace.records.last_mut() {
                if last.additions == 0 && last.removals == 0 && last.round + last.span == t {
                    last.span += 1;
                    last.interactions += interactions;
                    return;
                }
            }
        }
        self.trace.records.push(RoundRecord {
            round: t,
            span: 1,
            interactions,
            additions: delta.additions.len() as u64,
            removals: delta.removals.len() as u64,
            degree_classes: self.graph.degree_class_count() as u64,
            fingerprint: self.graph.fingerprint().to_string(),
        });
    }

    fn remember_state(&mut self) {
        if !self.detect_cycles {
            return;
        }
        let n = self.graph.node_count();
        let key = (
            self.graph.fingerprint(),
            self.scheduler.phase(self.round, n).unwrap_or(0),
        );
        self.seen.insert(key, self.round);
        self.seen_order.push_back(key);
        if self.seen_order.len() > self.cycle_history {
            let old = self.seen_order.pop_front().unwrap();
            if self
                .seen
                .get(&old)
                .is_some_and(|&r| r + self.cycle_history as u64 <= self.round)
            {
                self.seen.remove(&old);
            }
        }
        if self.snapshot_window > 0 {
            self.snapshots.push_back((self.round, self.graph.clone()));
            if self.snapshots.len() > self.snapshot_window {
                self.snapshots.pop_front();
            }
        }
    }

    fn detect_cycle(&mut self, n: usize) -> Result<()> {
        let now = self.round;
        let phase = self.scheduler.phase(now, n).unwrap_or(0);
        if let Some(p) = &self.pending {
            if now == p.at + p.period {
                if phase == p.phase && self.graph == p.graph {
                    self.verdict = Some(Verdict::Cycle {
                        period: p.period,
                        entered_at: p.at,
                    });
                    return Ok(());
                }
                self.pending = None;
            }
        }
        let key = (self.graph.fingerprint(), phase);
        if let Some(&earlier) = self.seen.get(&key) {
            let period = now - earlier;
            let snapshot = self.snapshots.iter().find(|(r, _)| *r == earlier);
            match snapshot {
                Some((_, old)) if *old == self.graph => {
                    self.verdict = Some(Verdict::Cycle {
                        period,
                        entered_at: earlier,
                    });
                    return Ok(());
                }
                Some(_) => {}
                None if self.pending.is_none() => {
                    self.pending = Some(PendingCycle {
                        graph: self.graph.clone(),
                        phase,
                        at: now,
                        period,
                    });
                }
                None => {}
            }
        }
        self.remember_state();
        Ok(())
    }

    pub fn finish(mut self) -> RunOutcome {
        if !self.done {
            self.trace.verdict = self
                .verdict
                .unwrap_or(Verdict::BudgetExhausted { rounds: self.round });
            self.trace.rounds = self.round;
            self.trace.final_fingerprint = self.graph.fingerprint().to_string();
        }
        RunOutcome {
            trace: self.trace,
            final_graph: self.graph,
        }
    }
}

/// Runs to completion.
pub fn run(config: RunConfig) -> Result<RunOutcome> {
    let mut runner = Runner::new(config)?;
    while runner.advance()?.is_none() {}
    Ok(runner.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::{complete, cycle, path};
    use crate::potentials::{min_degree_potential, proper_degree_potential, ProperFunction};
    use crate::schedulers::{
        CompleteScheduler, CurrentEdgesScheduler, ScriptedScheduler, UniformRandomScheduler,
    };
    use crate::Pair;

    fn sum(alpha: f64, beta: f64) -> Potential {
        proper_degree_potential(ProperFunction::named("sum").unwrap(), alpha, beta).unwrap()
    }

    #[test]
    fn k4_is_stable_immediately() {
        let out = run(RunConfig::new(
            complete(4),
            sum(4.0, 4.0),
            Box::new(CompleteScheduler),
        ))
        .unwrap();
        assert_eq!(out.trace.verdict, Verdict::Stabilized { at: 0 });
        assert_eq!(out.trace.rounds, 1);
        assert_eq!(out.final_graph, complete(4));
    }

    #[test]
    fn c4_becomes_k4() {
        let out = run(RunConfig::new(
            cycle(4).unwrap(),
            sum(4.0, 4.0),
            Box::new(CompleteScheduler),
        ))
        .unwrap();
        assert_eq!(out.trace.verdict, Verdict::Stabilized { at: 1 });
        assert_eq!(out.final_graph, complete(4));
        assert!(out.trace.rounds <= 2);
    }

    #[test]
    fn p4_dissolves() {
        let out = run(RunConfig::new(
            path(4),
            sum(100.0, 100.0),
            Box::new(CompleteScheduler),
        ))
        .unwrap();
        assert!(out.trace.stabilized());
        assert_eq!(out.final_graph.edge_count(), 0);
    }

    #[test]
    fn current_edges_stops_when_edges_gone() {
        let g = complete(3);
        let p = min_degree_potential(3.0, 10.0).unwrap();
        let out = run(RunConfig::new(g, p, Box::new(CurrentEdgesScheduler))).unwrap();
        assert_eq!(out.trace.verdict, Verdict::Stabilized { at: 1 });
        assert_eq!(out.final_graph.edge_count(), 0);
    }

    #[test]
    fn oscillation_is_a_cycle() {
        // Flips every edge every round: K3 ↔ null graph.
        let p = Potential::from_fn(
            "flip",
            1,
            0.5,
            0.5,
            |v| if v.has_edge() { 0.0 } else { 1.0 },
        )
        .unwrap();
        let out = run(RunConfig::new(
            complete(3),
            p.clone(),
            Box::new(CompleteScheduler),
        ))
        .unwrap();
        assert_eq!(
            out.trace.verdict,
            Verdict::Cycle {
                period: 2,
                entered_at: 0
            }
        );

        // Without snapshots the cycle is confirmed by re-running one period.
        let mut cfg = RunConfig::new(complete(3), p, Box::new(CompleteScheduler));
        cfg.snapshot_window = 0;
        let out = run(cfg).unwrap();
        assert_eq!(
            out.trace.verdict,
            Verdict::Cycle {
                period: 2,
                entered_at: 2
            }
        );
    }

    #[test]
    fn budget_and_fixed_point_modes() {
        let p = Potential::from_fn(
            "flip",
            1,
            0.5,
            0.5,
            |v| if v.has_edge() { 0.0 } else { 1.0 },
        )
        .unwrap();
        let cfg = RunConfig::new(complete(3), p.clone(), Box::new(CompleteScheduler))
            .stop_mode(StopMode::FixedPoint)
            .max_rounds(7);
        let out = run(cfg).unwrap();
        assert_eq!(out.trace.verdict, Verdict::BudgetExhausted { rounds: 7 });
        let cfg = RunConfig::new(complete(3), p, Box::new(CompleteScheduler))
            .stop_mode(StopMode::Budget)
            .max_rounds(7);
        let out = run(cfg).unwrap();
        assert_eq!(out.trace.rounds, 7);
        assert!(matches!(
            out.trace.verdict,
            Verdict::Cycle { period: 2, .. }
        ));
    }

    #[test]
    fn scripted_quiescence_needs_a_full_period() {
        let script = vec![vec![], vec![], vec![Pair::new(0, 1)]];
        let sched = ScriptedScheduler::new(script, true).unwrap();
        let p = min_degree_potential(2.0, 5.0).unwrap();
        let g = DynGraph::from_edges(3, [(0, 1)]).unwrap();
        let out = run(RunConfig::new(g, p, Box::new(sched))).unwrap();
        // The two empty opening rounds are not a full period; the edge dies
        // in round 2 and three more quiet rounds certify the fixed point.
        assert_eq!(out.trace.last_change, Some(2));
        assert_eq!(out.trace.verdict, Verdict::Stabilized { at: 3 });
        assert_eq!(out.trace.rounds, 6);
    }

    #[test]
    fn uniform_runs_are_reproducible() {
        let g = path(8);
        let p = min_degree_potential(2.0, 100.0).unwrap();
        let a = run(
            RunConfig::new(g.clone(), p.clone(), Box::new(UniformRandomScheduler))
                .seed(4)
                .trace_detail(TraceDetail::Compact),
        )
        .unwrap();
        let b = run(RunConfig::new(g, p, Box::new(UniformRandomScheduler))
            .seed(4)
            .trace_detail(TraceDetail::Compact))
        .unwrap();
        assert_eq!(a.trace.records, b.trace.records);
        assert!(a.trace.stabilized());
        assert_eq!(a.final_graph.edge_count(), 0);
        let total: u64 = a.trace.records.iter().map(|r| r.span).sum();
        assert_eq!(total, a.trace.rounds);
    }

    #[test]
    fn zero_budget_rejected() {
        let cfg = RunConfig::new(path(3), sum(1.0, 1.0), Box::new(CompleteScheduler)).max_rounds(0);
        assert!(Runner::new(cfg).is_err());
    }
}
