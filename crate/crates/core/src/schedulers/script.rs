use std::collections::BTreeSet;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use super::{InteractionSet, Quiescence, Scheduler};
use crate::error::{Error, Result};
use crate::graph::{DynGraph, NodeId, Pair};
use crate::rng::SimRng;

/// Replays a fixed sequence of interaction sets, optionally cyclically.
#[derive(Debug, Clone)]
pub struct ScriptedScheduler {
    rounds: Vec<Vec<Pair>>,
    repeat: bool,
    fair: bool,
}

impl ScriptedScheduler {
    pub fn new(rounds: Vec<Vec<Pair>>, repeat: bool) -> Result<Self> {
        if rounds.is_empty() {
            return Err(Error::config("script must contain at least one round"));
        }
        for (t, round) in rounds.iter().enumerate() {
            let distinct: BTreeSet<_> = round.iter().collect();
            if distinct.len() != round.len() {
                return Err(Error::config(format!(
                    "script round {t} lists a pair twice"
                )));
            }
        }
        Ok(ScriptedScheduler {
            rounds,
            repeat,
            fair: false,
        })
    }

    /// Declares weak fairness with period = script length, after checking
    /// that one pass of the script covers every pair of an `n`-node graph.
    pub fn claim_fairness(mut self, n: usize) -> Result<Self> {
        if !self.repeat {
            return Err(Error::config("a non-repeating script cannot be fair"));
        }
        let covered: BTreeSet<Pair> = self.rounds.iter().flatten().copied().collect();
        let missing: Vec<String> = InteractionSet::AllPairs { n }
            .pairs()
            .into_iter()
            .filter(|p| !covered.contains(p))
            .map(|p| p.to_string())
            .collect();
        if !missing.is_empty() {
            return Err(Error::config(format!(
                "script does not cover {} pair(s): {}",
                missing.len(),
                missing.join(" ")
            )));
        }
        self.fair = true;
        Ok(self)
    }

    pub fn is_fair(&self) -> bool {
        self.fair
    }

    pub fn len(&self) -> usize {
        self.rounds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rounds.is_empty()
    }

    pub fn rounds(&self) -> &[Vec<Pair>] {
        &self.rounds
    }
}

impl Scheduler for ScriptedScheduler {
    fn name(&self) -> String {
        format!(
            "scripted[{}{}]",
            self.rounds.len(),
            if self.repeat { ",repeat" } else { "" }
        )
    }

    fn validate(&self, n: usize) -> Result<()> {
        match self.rounds.iter().flatten().find(|p| p.hi() as usize >= n) {
            Some(p) => Err(Error::config(format!(
                "script pair {p} is out of range for {n} nodes"
            ))),
            None => Ok(()),
        }
    }

    fn interactions(
        &mut self,
        round: u64,
        _g: &DynGraph,
        _rng: &mut SimRng,
    ) -> Result<InteractionSet> {
        let len = self.rounds.len() as u64;
        let pairs = if self.repeat {
            self.rounds[(round % len) as usize].clone()
        } else {
            self.rounds.get(round as usize).cloned().unwrap_or_default()
        };
        Ok(InteractionSet::Listed(pairs))
    }

    fn fairness_period(&self, _n: usize) -> Option<u64> {
        self.fair.then_some(self.rounds.len() as u64)
    }

    fn quiescence(&self, _n: usize) -> Quiescence {
        // Either the script repeats with this period, or after it ends every
        // round is empty; in both cases a full script length of unchanged
        // rounds is a fixed point.
        Quiescence::Rounds(self.rounds.len() as u64)
    }

    fn phase(&self, round: u64, _n: usize) -> Option<u64> {
        let len = self.rounds.len() as u64;
        Some(if self.repeat {
            round % len
        } else {
            round.min(len)
        })
    }
}

/// One round per line as space-separated `u-v` tokens; a blank line is an
/// empty round and `#` starts a comment line.
pub fn parse_script<R: Read>(reader: R, source: &str) -> Result<Vec<Vec<Pair>>> {
    let mut rounds = Vec::new();
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.starts_with('#') {
            continue;
        }
        let mut round = Vec::new();
        for token in body.split_whitespace() {
            let (a, b) = token.split_once('-').ok_or_else(|| {
                Error::parse(source, i + 1, format!("expected u-v, got {token:?}"))
            })?;
            let parse = |x: &str| {
                x.parse::<NodeId>()
                    .map_err(|_| Error::parse(source, i + 1, format!("invalid node id {x:?}")))
            };
            let (a, b) = (parse(a)?, parse(b)?);
            let pair = Pair::try_new(a, b).map_err(|e| Error::parse(source, i + 1, e))?;
            round.push(pair);
        }
        rounds.push(round);
    }
    Ok(rounds)
}

pub fn read_script_file(path: &Path) -> Result<Vec<Vec<Pair>>> {
    let file = std::fs::File::open(path)
        .map_err(|e| Error::input(format!("cannot open {}: {e}", path.display())))?;
    parse_script(file, &path.display().to_string())
}
