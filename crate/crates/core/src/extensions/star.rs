use std::collections::BTreeMap;

use rand::Rng;

use crate::engine::{RoundRecord, RunTrace, Verdict};
use crate::error::{Error, Result};
use crate::graph::{DynGraph, EdgeDelta, NodeId, Pair};
use crate::rng::{sim_rng, SimRng};
use crate::schedulers::Scheduler;

/// A stateless protocol that may rewrite edges near the interacting pair.
pub trait GeneralProtocol {
    fn name(&self) -> String;

    /// The delta produced by the interaction `pair` on `g`. Every touched
    /// pair must have an endpoint within distance 2 of `pair`.
    fn rewrite(&self, g: &DynGraph, pair: Pair, rng: &mut SimRng) -> Result<EdgeDelta>;

    /// The run stops as soon as this holds.
    fn target(&self, g: &DynGraph) -> bool;
}

/// One node of degree `n−1`, all others leaves.
pub fn is_star(g: &DynGraph) -> bool {
    let n = g.node_count();
    match n {
        0 | 1 => true,
        2 => g.edge_count() == 1,
        _ => {
            g.edge_count() == n - 1
                && g.nodes_with_degree(n - 1) == 1
                && g.nodes_with_degree(1) == n - 1
        }
    }
}

/// Spanning-star construction by edge moving.
///
/// On interaction `(u, v)`:
/// 1. a leaf endpoint is replaced by its unique neighbor, giving `(a, b)`;
///    nothing happens if `a = b` or `u, v` form an isolated edge;
/// 2. if `a` and `b` are both leaves (two isolated edges), `a` and `b` toss
///    coins and on different outcomes the winner becomes the root of a
///    three-leaf star over both edges;
/// 3. otherwise the endpoint of larger degree absorbs the other: it gains
///    the edge `(a, b)` and all of the other's neighbors, which become
///    detached from the loser. Equal degrees are broken by coin tosses
///    (lower id first, heads absorbs); equal outcomes change nothing.
#[derive(Debug, Clone, Default)]
pub struct StarProtocol;

impl StarProtocol {
    pub fn new() -> Self {
        StarProtocol
    }

    fn forward(g: &DynGraph, x: NodeId) -> NodeId {
        if g.degree(x) == 1 {
            g.neighbors(x)[0]
        } else {
            x
        }
    }

    /// Returns `Some(true)` if the lower id wins, `None` on a tie.
    fn toss(rng: &mut SimRng) -> Option<bool> {
        let low: bool = rng.gen();
        let high: bool = rng.gen();
        (low != high).then_some(low)
    }

    fn absorb(g: &DynGraph, winner: NodeId, loser: NodeId) -> EdgeDelta {
        let mut delta = EdgeDelta::default();
        if !g.has_edge(winner, loser) {
            delta.additions.push(Pair::new(winner, loser));
        }
        for &w in g.neighbors(loser) {
            if w == winner {
                continue;
            }
            delta.removals.push(Pair::new(loser, w));
            if !g.has_edge(winner, w) {
                delta.additions.push(Pair::new(winner, w));
            }
        }
        delta
    }
}

impl GeneralProtocol for StarProtocol {
    fn name(&self) -> String {
        "spanning_star".into()
    }

    fn rewrite(&self, g: &DynGraph, pair: Pair, rng: &mut SimRng) -> Result<EdgeDelta> {
        let (u, v) = (pair.lo(), pair.hi());
        if g.degree(u) == 1 && g.degree(v) == 1 && g.has_edge(u, v) {
            return Ok(EdgeDelta::default());
        }
        let (a, b) = (Self::forward(g, u), Self::forward(g, v));
        if a == b {
            return Ok(EdgeDelta::default());
        }
        let (lo, hi) = (a.min(b), a.max(b));
        if g.degree(a) == 1 && g.degree(b) == 1 {
            // a–u and b–v are isolated edges.
            let Some(lo_wins) = Self::toss(rng) else {
                return Ok(EdgeDelta::default());
            };
            let (winner, loser) = if lo_wins { (lo, hi) } else { (hi, lo) };
            return Ok(Self::absorb(g, winner, loser));
        }
        let (da, db) = (g.degree(a), g.degree(b));
        let winner = match da.cmp(&db) {
            std::cmp::Ordering::Greater => a,
            std::cmp::Ordering::Less => b,
            std::cmp::Ordering::Equal => match Self::toss(rng) {
                None => return Ok(EdgeDelta::default()),
                Some(true) => lo,
                Some(false) => hi,
            },
        };
        let loser = if winner == a { b } else { a };
        Ok(Self::absorb(g, winner, loser))
    }

    fn target(&self, g: &DynGraph) -> bool {
        is_star(g)
    }
}

/// How a round changed the graph, in order of precedence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Progress {
    /// The number of connected components dropped.
    Merge,
    /// Some node that was not a leaf became one.
    NewLeaf,
    Unchanged,
}

#[derive(Debug, Clone)]
pub struct GeneralOutcome {
    pub trace: RunTrace,
    pub final_graph: DynGraph,
    pub reached_target: bool,
    /// Rounds per progress class, indexed like [`Progress`].
    pub progress: [u64; 3],
    /// Rounds that changed the graph without merging components or creating
    /// a leaf, or where a leaf grew without a merge.
    pub violations: Vec<(u64, String)>,
}

fn classify(
    before: &DynGraph,
    after: &DynGraph,
    delta: &EdgeDelta,
) -> (Option<Progress>, Option<String>) {
    if delta.is_empty() {
        return (Some(Progress::Unchanged), None);
    }
    let merged = after.components().1 < before.components().1;
    let touched: Vec<NodeId> = delta
        .additions
        .iter()
        .chain(&delta.removals)
        .flat_map(|p| [p.lo(), p.hi()])
        .collect();
    let new_leaf = touched
        .iter()
        .any(|&x| before.degree(x) != 1 && after.degree(x) == 1);
    let grown_leaf = touched
        .iter()
        .find(|&&x| before.degree(x) == 1 && after.degree(x) > 1);
    let note = match grown_leaf {
        Some(x) if !merged => Some(format!("leaf {x} gained edges without a merge")),
        _ => None,
    };
    let class = if merged {
        Some(Progress::Merge)
    } else if new_leaf {
        Some(Progress::NewLeaf)
    } else {
        None
    };
    (class, note)
}

fn check_confinement(g: &DynGraph, pair: Pair, delta: &EdgeDelta) -> Result<()> {
    let near: std::collections::HashSet<NodeId> = g
        .bfs_within(&[pair.lo(), pair.hi()], 2)
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    match delta
        .additions
        .iter()
        .chain(&delta.removals)
        .find(|p| !near.contains(&p.lo()) && !near.contains(&p.hi()))
    {
        Some(p) => Err(Error::contract(format!(
            "rewrite of {pair} touched distant pair {p}"
        ))),
        None => Ok(()),
    }
}

/// Runs a general protocol until its target holds or `budget` rounds pass.
/// The scheduler must deliver at most one interaction per round.
pub fn run_general(
    g0: &DynGraph,
    protocol: &dyn GeneralProtocol,
    mut scheduler: Box<dyn Scheduler>,
    budget: u64,
    seed: u64,
) -> Result<GeneralOutcome> {
    let n = g0.node_count();
    scheduler.validate(n)?;
    let mut rng = sim_rng(seed);
    let mut g = g0.clone();
    let mut trace = RunTrace {
        seed,
        node_count: n,
        potential: protocol.name(),
        scheduler: scheduler.name(),
        rounds_per_step: 1,
        records: Vec::new(),
        verdict: Verdict::BudgetExhausted { rounds: budget },
        rounds: 0,
        change_rounds: 0,
        total_changes: 0,
        last_change: None,
        last_touched: vec![None; n],
        initial_fingerprint: g.fingerprint().to_string(),
        final_fingerprint: String::new(),
        metadata: BTreeMap::new(),
    };
    let mut progress = [0u64; 3];
    let mut violations = Vec::new();
    let mut reached = protocol.target(&g);
    let mut t = 0;
    while !reached && t < budget {
        let set = scheduler.interactions(t, &g, &mut rng)?;
        if set.len() > 1 {
            return Err(Error::config(format!(
                "{} delivered {} interactions in round {t}; general protocols need at most one",
                scheduler.name(),
                set.len()
            )));
        }
        let delta = match set.pairs().first() {
            Some(&pair) => {
                let delta = protocol.rewrite(&g, pair, &mut rng)?;
                check_confinement(&g, pair, &delta)?;
                delta
            }
            None => EdgeDelta::default(),
        };
        let before = (!delta.is_empty()).then(|| g.clone());
        let record = RoundRecord {
            round: t,
            span: 1,
            interactions: set.len(),
            additions: delta.additions.len() as u64,
            removals: delta.removals.len() as u64,
            degree_classes: g.degree_class_count() as u64,
            fingerprint: g.fingerprint().to_string(),
        };
        g.apply_delta(&delta)?;
        match (trace.records.last_mut(), delta.is_empty()) {
            (Some(last), true) if last.additions == 0 && last.removals == 0 => {
                last.span += 1;
                last.interactions += record.interactions;
            }
            _ => trace.records.push(record),
        }
        let (class, note) = match &before {
            Some(before) => classify(before, &g, &delta),
            None => (Some(Progress::Unchanged), None),
        };
        match class {
            Some(c) => progress[c as usize] += 1,
            None => violations.push((t, "graph changed without a merge or a new leaf".to_string())),
        }
        if let Some(note) = note {
            violations.push((t, note));
        }
        if !delta.is_empty() {
            trace.change_rounds += 1;
            trace.total_changes += delta.len() as u64;
            trace.last_change = Some(t);
            for p in delta.additions.iter().chain(&delta.removals) {
                trace.last_touched[p.lo() as usize] = Some(t);
                trace.last_touched[p.hi() as usize] = Some(t);
            }
        }
        t += 1;
        reached = protocol.target(&g);
    }
    trace.rounds = t;
    if reached {
        trace.verdict = Verdict::Stabilized { at: t };
    }
    trace.final_fingerprint = g.fingerprint().to_string();
    Ok(GeneralOutcome {
        trace,
        final_graph: g,
        reached_target: reached,
        progress,
        violations,
    })
}
