//! Interaction schedulers: which pairs are activated in each round.

mod script;
mod social;

use std::collections::HashSet;
use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::{pair_count, DynGraph, NodeId, Pair};
use crate::rng::SimRng;

pub use script::{parse_script, read_script_file, ScriptedScheduler};
pub use social::SocialScheduler;

/// The pairs activated in one round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InteractionSet {
    /// Every unordered pair of an `n`-node graph.
    AllPairs {
        n: usize,
    },
    Listed(Vec<Pair>),
}

impl InteractionSet {
    pub fn empty() -> Self {
        InteractionSet::Listed(Vec::new())
    }

    pub fn len(&self) -> u64 {
        match self {
            InteractionSet::AllPairs { n } => pair_count(*n),
            InteractionSet::Listed(p) => p.len() as u64,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Materialized pair list; avoid for `AllPairs` on large graphs.
    pub fn pairs(&self) -> Vec<Pair> {
        match self {
            InteractionSet::AllPairs { n } => {
                let n = *n as NodeId;
                (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| Pair::new(u, v)))
                    .collect()
            }
            InteractionSet::Listed(p) => p.clone(),
        }
    }

    /// No duplicates, every id below `n` (self-pairs are unrepresentable).
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            InteractionSet::AllPairs { n: m } if *m == n => Ok(()),
            InteractionSet::AllPairs { n: m } => Err(Error::contract(format!(
                "all-pairs set for {m} nodes used on a {n}-node graph"
            ))),
            InteractionSet::Listed(pairs) => {
                let mut seen = HashSet::with_capacity(pairs.len());
                for p in pairs {
                    if p.hi() as usize >= n {
                        return Err(Error::contract(format!("interaction {p} out of range")));
                    }
                    if !seen.insert(*p) {
                        return Err(Error::contract(format!("interaction {p} listed twice")));
                    }
                }
                Ok(())
            }
        }
    }
}

/// When a run of unchanged rounds proves the graph will never change again.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quiescence {
    /// The interaction set is a function of the graph, so one unchanged
    /// round is a fixed point.
    GraphDetermined,
    /// Every pair recurs within this many rounds; that many unchanged rounds
    /// in a row is a fixed point.
    Rounds(u64),
    /// Randomized: treat this many unchanged rounds in a row as quiescence.
    /// Sound only together with a post-hoc check of the final graph.
    Streak(u64),
}

pub trait Scheduler: Send {
    fn name(&self) -> String;

    /// Rejects node counts the scheduler cannot serve.
    fn validate(&self, _n: usize) -> Result<()> {
        Ok(())
    }

    fn interactions(
        &mut self,
        round: u64,
        g: &DynGraph,
        rng: &mut SimRng,
    ) -> Result<InteractionSet>;

    /// `P` such that every pair appears in every window of `P` rounds.
    fn fairness_period(&self, n: usize) -> Option<u64>;

    fn quiescence(&self, n: usize) -> Quiescence;

    /// The scheduler's position in its own cycle at `round`, or `None` if its
    /// output is not a function of `(phase, graph)`. Cycle detection keys on
    /// this together with the graph fingerprint.
    fn phase(&self, _round: u64, _n: usize) -> Option<u64> {
        Some(0)
    }
}

impl fmt::Debug for dyn Scheduler {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Scheduler({})", self.name())
    }
}

/// Every pair, every round.
#[derive(Debug, Clone, Default)]
pub struct CompleteScheduler;

impl Scheduler for CompleteScheduler {
    fn name(&self) -> String {
        "complete".into()
    }

    fn interactions(
        &mut self,
        _round: u64,
        g: &DynGraph,
        _rng: &mut SimRng,
    ) -> Result<InteractionSet> {
        Ok(InteractionSet::AllPairs { n: g.node_count() })
    }

    fn fairness_period(&self, _n: usize) -> Option<u64> {
        Some(1)
    }

    fn quiescence(&self, _n: usize) -> Quiescence {
        Quiescence::GraphDetermined
    }
}

/// Exactly the current edges. Not weakly fair: absent pairs never interact.
#[derive(Debug, Clone, Default)]
pub struct CurrentEdgesScheduler;

impl Scheduler for CurrentEdgesScheduler {
    fn name(&self) -> String {
        "current_edges".into()
    }

    fn interactions(
        &mut self,
        _round: u64,
        g: &DynGraph,
        _rng: &mut SimRng,
    ) -> Result<InteractionSet> {
        Ok(InteractionSet::Listed(g.edges().collect()))
    }

    fn fairness_period(&self, _n: usize) -> Option<u64> {
        None
    }

    fn quiescence(&self, _n: usize) -> Quiescence {
        Quiescence::GraphDetermined
    }
}

/// One uniformly random pair per round, drawn from the run's generator.
#[derive(Debug, Clone, Default)]
pub struct UniformRandomScheduler;

/// Default quiet streak for the uniform scheduler: `20·N·ln N` rounds with
/// `N = n(n−1)/2`, about twenty coupon-collector times.
pub fn default_quiet_streak(n: usize) -> u64 {
    let pairs = pair_count(n) as f64;
    ((20.0 * pairs * pairs.ln()).ceil() as u64).max(1)
}

impl Scheduler for UniformRandomScheduler {
    fn name(&self) -> String {
        "uniform".into()
    }

    fn validate(&self, n: usize) -> Result<()> {
        if n < 2 {
            return Err(Error::config(format!(
                "uniform scheduler needs n ≥ 2, got {n}"
            )));
        }
        Ok(())
    }

    fn interactions(
        &mut self,
        _round: u64,
        g: &DynGraph,
        rng: &mut SimRng,
    ) -> Result<InteractionSet> {
        let n = g.node_count();
        self.validate(n)?;
        let k = rng.gen_range(0..pair_count(n));
        Ok(InteractionSet::Listed(vec![Pair::unrank(k, n)]))
    }

    fn fairness_period(&self, _n: usize) -> Option<u64> {
        None
    }

    fn quiescence(&self, n: usize) -> Quiescence {
        Quiescence::Streak(default_quiet_streak(n))
    }

    fn phase(&self, _round: u64, _n: usize) -> Option<u64> {
        None
    }
}

/// All pairs in lexicographic order, `batch` per round, wrapping around.
#[derive(Debug, Clone)]
pub struct RoundRobinScheduler {
    batch: u64,
}

impl RoundRobinScheduler {
    pub fn new(batch: usize) -> Result<Self> {
        if batch == 0 {
            return Err(Error::config("round-robin batch size must be at least 1"));
        }
        Ok(RoundRobinScheduler {
            batch: batch as u64,
        })
    }

    fn start(&self, round: u64, n: usize) -> u64 {
        let total = pair_count(n);
        if self.batch >= total {
            return 0;
        }
        ((round as u128 * self.batch as u128) % total.max(1) as u128) as u64
    }
}

impl Scheduler for RoundRobinScheduler {
    fn name(&self) -> String {
        format!("round_robin[{}]", self.batch)
    }

    fn interactions(
        &mut self,
        round: u64,
        g: &DynGraph,
        _rng: &mut SimRng,
    ) -> Result<InteractionSet> {
        let n = g.node_count();
        let total = pair_count(n);
        if self.batch >= total {
            return Ok(InteractionSet::AllPairs { n });
        }
        let start = self.start(round, n);
        let mut pairs = Vec::with_capacity(self.batch as usize);
        let mut p = Pair::unrank(start, n);
        for _ in 0..self.batch {
            pairs.push(p);
            p = next_pair(p, n);
        }
        Ok(InteractionSet::Listed(pairs))
    }

    fn fairness_period(&self, n: usize) -> Option<u64> {
        Some(pair_count(n).div_ceil(self.batch).max(1))
    }

    fn quiescence(&self, n: usize) -> Quiescence {
        Quiescence::Rounds(self.fairness_period(n).unwrap())
    }

    fn phase(&self, round: u64, n: usize) -> Option<u64> {
        Some(self.start(round, n))
    }
}

/// Successor in lexicographic pair order, wrapping to the first pair.
fn next_pair(p: Pair, n: usize) -> Pair {
    let n = n as NodeId;
    if p.hi() + 1 < n {
        Pair::new(p.lo(), p.hi() + 1)
    } else if p.lo() + 2 < n {
        Pair::new(p.lo() + 1, p.lo() + 2)
    } else {
        Pair::new(0, 1)
    }
}

/// Checks the declared fairness period by brute force over `rounds` rounds.
/// Returns the first pair missing from some window, if any.
pub fn find_fairness_gap(
    scheduler: &mut dyn Scheduler,
    g: &DynGraph,
    rounds: u64,
    rng: &mut SimRng,
) -> Result<Option<(u64, Pair)>> {
    let n = g.node_count();
    let Some(period) = scheduler.fairness_period(n) else {
        return Ok(None);
    };
    let sets: Vec<HashSet<Pair>> = (0..rounds + period)
        .map(|t| {
            scheduler
                .interactions(t, g, rng)
                .map(|s| s.pairs().into_iter().collect())
        })
        .collect::<Result<_>>()?;
    let all = InteractionSet::AllPairs { n }.pairs();
    for t in 0..rounds {
        for &p in &all {
            if !(t..t + period).any(|k| sets[k as usize].contains(&p)) {
                return Ok(Some((t, p)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generators::complete;
    use crate::rng::sim_rng;

    #[test]
    fn complete_scheduler_sizes() {
        let mut s = CompleteScheduler;
        let mut rng = sim_rng(0);
        for (n, expect) in [(2, 1), (3, 3), (5, 10)] {
            let set = s.interactions(0, &DynGraph::new(n), &mut rng).unwrap();
            assert_eq!(set.len(), expect);
            set.validate(n).unwrap();
        }
        let set = s.interactions(4, &DynGraph::new(3), &mut rng).unwrap();
        assert_eq!(
            set.pairs(),
            vec![Pair::new(0, 1), Pair::new(0, 2), Pair::new(1, 2)]
        );
    }

    #[test]
    fn current_edges() {
        let mut s = CurrentEdgesScheduler;
        let mut rng = sim_rng(0);
        assert!(s
            .interactions(0, &DynGraph::new(4), &mut rng)
            .unwrap()
            .is_empty());
        assert_eq!(s.interactions(0, &complete(3), &mut rng).unwrap().len(), 3);
        assert_eq!(s.fairness_period(3), None);
    }

    #[test]
    fn uniform_is_reproducible_and_uniform() {
        let g = DynGraph::new(5);
        let draw = |seed| {
            let mut s = UniformRandomScheduler;
            let mut rng = sim_rng(seed);
            (0..50)
                .map(|t| s.interactions(t, &g, &mut rng).unwrap().pairs()[0])
                .collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));

        let mut s = UniformRandomScheduler;
        let mut rng = sim_rng(3);
        let mut counts = [0u32; 10];
        let draws = 100_000;
        for t in 0..draws {
            let p = s.interactions(t, &g, &mut rng).unwrap().pairs()[0];
            counts[p.rank(5) as usize] += 1;
        }
        let expected = draws as f64 / 10.0;
        let chi2: f64 = counts
            .iter()
            .map(|&c| (c as f64 - expected).powi(2) / expected)
            .sum();
        // 9 degrees of freedom, 99.9th percentile ≈ 27.9.
        assert!(chi2 < 27.9, "chi-square {chi2}");
        for c in counts {
            assert!((c as f64 / draws as f64 - 0.1).abs() < 0.01);
        }

        let two = DynGraph::new(2);
        assert_eq!(
            s.interactions(0, &two, &mut rng).unwrap().pairs(),
            vec![Pair::new(0, 1)]
        );
        assert!(s.validate(1).is_err());
    }

    #[test]
    fn round_robin_periods() {
        let mut rng = sim_rng(0);
        let cases = [(3, 1, 3), (4, 6, 1), (4, 4, 2), (7, 5, 5)];
        for (n, batch, period) in cases {
            let mut s = RoundRobinScheduler::new(batch).unwrap();
            let g = DynGraph::new(n);
            assert_eq!(s.fairness_period(n), Some(period));
            assert_eq!(find_fairness_gap(&mut s, &g, 40, &mut rng).unwrap(), None);
            for t in 0..10 {
                s.interactions(t, &g, &mut rng)
                    .unwrap()
                    .validate(n)
                    .unwrap();
            }
        }
        assert!(RoundRobinScheduler::new(0).is_err());
    }

    #[test]
    fn next_pair_walks_lexicographically() {
        let n = 5;
        let mut p = Pair::new(0, 1);
        for k in 1..=10 {
            p = next_pair(p, n);
            assert_eq!(p, Pair::unrank(k % 10, n));
        }
    }
}
