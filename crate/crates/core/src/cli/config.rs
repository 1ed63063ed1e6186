//! The experiment config, a TOML document with four tables:
//!
//! ```toml
//! seed = 7
//! max_rounds = 10000
//! stop = "cycle"            # fixed_point | cycle | budget
//!
//! [graph]
//! source = "gnp"            # file | gnp | cycle | path | star | complete | rule110
//! n = 200
//! p = 0.05
//!
//! [potential]
//! name = "min_degree"       # proper_degree | degree_like_niceness | community | rule110 | rule110_merged
//! alpha = 3.0
//! beta = 3.0
//!
//! [scheduler]
//! name = "round_robin"      # complete | current_edges | uniform | scripted | social
//! batch = 100
//!
//! [output]
//! trace = "run.trace.jsonl"
//! final_graph = "final.edges"
//! ```
//!
//! Relative paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::engine::{RunConfig, StopMode, TraceDetail};
use crate::error::{Error, Result};
use crate::extensions::{read_profile_file, social_potential, SocialProfile};
use crate::graph::generators::{complete, connected_gnp, cycle, gnp, path, star};
use crate::graph::io::read_edge_list_file;
use crate::graph::DynGraph;
use crate::potentials::{
    community_potential, min_degree_potential, proper_degree_potential, rule110_potential,
    two_step_merge_with, MergeMode, Potential, ProperFunction,
};
use crate::rng::sim_rng;
use crate::rule110::{
    build_assembly_on_ring, default_ring_cells, CellAssembly, Tape, RULE110_BETA,
};
use crate::schedulers::{
    read_script_file, CompleteScheduler, CurrentEdgesScheduler, RoundRobinScheduler, Scheduler,
    ScriptedScheduler, SocialScheduler, UniformRandomScheduler,
};

/// Offset separating the graph generator's random stream from the run's.
const GRAPH_STREAM: u64 = 0x6772_6170_6800_0000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopSpec {
    FixedPoint,
    #[default]
    Cycle,
    Budget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "snake_case", deny_unknown_fields)]
pub enum GraphSpec {
    File {
        path: PathBuf,
    },
    Gnp {
        n: usize,
        p: f64,
        #[serde(default)]
        connected: bool,
    },
    Cycle {
        n: usize,
    },
    Path {
        n: usize,
    },
    Star {
        n: usize,
    },
    Complete {
        n: usize,
    },
    Rule110 {
        tape: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ring_cells: Option<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    MinDegree {
        alpha: f64,
        beta: f64,
    },
    ProperDegree {
        f: String,
        alpha: f64,
        beta: f64,
    },
    DegreeLikeNiceness {
        profile: PathBuf,
        alpha: f64,
        beta: f64,
    },
    Community {
        alpha: f64,
        beta: f64,
    },
    Rule110 {
        #[serde(default = "default_rule110_beta")]
        beta: f64,
    },
    Rule110Merged {
        #[serde(default = "default_rule110_beta")]
        beta: f64,
    },
}

impl PotentialSpec {
    /// `alpha` for the potentials that have an independent lower threshold.
    pub fn alpha(&self) -> f64 {
        match *self {
            PotentialSpec::MinDegree { alpha, .. }
            | PotentialSpec::ProperDegree { alpha, .. }
            | PotentialSpec::DegreeLikeNiceness { alpha, .. }
            | PotentialSpec::Community { alpha, .. } => alpha,
            PotentialSpec::Rule110 { beta } | PotentialSpec::Rule110Merged { beta } => beta,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum SchedulerSpec {
    Complete,
    CurrentEdges,
    Uniform {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        quiet_streak: Option<u64>,
    },
    RoundRobin {
        batch: usize,
    },
    Scripted {
        path: PathBuf,
        #[serde(default = "yes")]
        repeat: bool,
        /// Validate that one pass of the script covers every pair.
        #[serde(default)]
        fair: bool,
    },
    Social {
        profile: PathBuf,
        gamma: usize,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub final_graph: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_max_rounds")]
    pub max_rounds: u64,
    #[serde(default)]
    pub stop: StopSpec,
    #[serde(default = "yes")]
    pub prune: bool,
    #[serde(default)]
    pub compact_trace: bool,
    pub graph: GraphSpec,
    pub potential: PotentialSpec,
    pub scheduler: SchedulerSpec,
    #[serde(default)]
    pub output: OutputSpec,
}

fn yes() -> bool {
    true
}

fn default_max_rounds() -> u64 {
    10_000
}

fn default_rule110_beta() -> f64 {
    RULE110_BETA
}

/// A run ready to execute, plus the gadget assembly when the graph is one.
pub struct Experiment {
    pub run: RunConfig,
    pub assembly: Option<CellAssembly>,
}

impl ExperimentConfig {
    pub fn from_toml(text: &str, source: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let line = e.span().map_or(1, |s| {
                text[..s.start.min(text.len())].matches('\n').count() + 1
            });
            Error::parse(source, line, e.message())
        })
    }

    /// Reads a config file and resolves its relative paths.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::input(format!("cannot read config {}: {e}", path.display())))?;
        let mut config = Self::from_toml(&text, &path.display().to_string())?;
        config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(config)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable")
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        if let GraphSpec::File { path } = &mut self.graph {
            fix(path)
        }
        if let PotentialSpec::DegreeLikeNiceness { profile, .. } = &mut self.potential {
            fix(profile);
        }
        match &mut self.scheduler {
            SchedulerSpec::Scripted { path, .. } => fix(path),
            SchedulerSpec::Social { profile, .. } => fix(profile),
            _ => {}
        }
        if let Some(p) = &mut self.output.trace {
            fix(p);
        }
        if let Some(p) = &mut self.output.final_graph {
            fix(p);
        }
    }

    pub fn is_rule110_assembly(&self) -> bool {
        matches!(self.graph, GraphSpec::Rule110 { .. })
    }

    pub fn build_graph(&self) -> Result<(DynGraph, Option<CellAssembly>)> {
        let field = |e: Error| prefix("graph", e);
        let mut rng = sim_rng(self.seed.wrapping_add(GRAPH_STREAM));
        let g = match &self.graph {
            GraphSpec::File { path } => read_edge_list_file(path).map_err(field)?,
            &GraphSpec::Gnp { n, p, connected } => {
                if connected {
                    connected_gnp(n, p, &mut rng).map_err(field)?
                } else {
                    gnp(n, p, &mut rng).map_err(field)?
                }
            }
            &GraphSpec::Cycle { n } => cycle(n).map_err(field)?,
            &GraphSpec::Path { n } => path(n),
            &GraphSpec::Star { n } => star(n),
            &GraphSpec::Complete { n } => complete(n),
            GraphSpec::Rule110 { tape, ring_cells } => {
                let tape: Tape = tape.parse().map_err(|e| prefix("graph.tape", e))?;
                let ring = ring_cells.unwrap_or_else(|| default_ring_cells(tape.width()));
                let assembly = build_assembly_on_ring(&tape, ring)
                    .map_err(|e| prefix("graph.ring_cells", e))?;
                return Ok((assembly.graph.clone(), Some(assembly)));
            }
        };
        Ok((g, None))
    }

    pub fn build_potential(&self) -> Result<Potential> {
        let field = |e: Error| prefix("potential", e);
        match &self.potential {
            &PotentialSpec::MinDegree { alpha, beta } => {
                min_degree_potential(alpha, beta).map_err(field)
            }
            PotentialSpec::ProperDegree { f, alpha, beta } => {
                let f = ProperFunction::named(f).map_err(|e| prefix("potential.f", e))?;
                proper_degree_potential(f, *alpha, *beta).map_err(field)
            }
            PotentialSpec::DegreeLikeNiceness {
                profile,
                alpha,
                beta,
            } => {
                let profile = load_profile(profile, "potential.profile")?;
                social_potential(profile, *alpha, *beta).map_err(field)
            }
            &PotentialSpec::Community { alpha, beta } => {
                community_potential(alpha, beta).map_err(field)
            }
            &PotentialSpec::Rule110 { beta } => rule110_potential(beta).map_err(field),
            &PotentialSpec::Rule110Merged { beta } => two_step_merge_with(
                rule110_potential(beta).map_err(field)?,
                MergeMode::SharedHalfStep,
            )
            .map_err(field),
        }
    }

    /// `n` is the node count, needed to validate a fair script.
    pub fn build_scheduler(&self, n: usize) -> Result<Box<dyn Scheduler>> {
        let field = |e: Error| prefix("scheduler", e);
        Ok(match &self.scheduler {
            SchedulerSpec::Complete => Box::new(CompleteScheduler),
            SchedulerSpec::CurrentEdges => Box::new(CurrentEdgesScheduler),
            SchedulerSpec::Uniform { .. } => Box::new(UniformRandomScheduler),
            &SchedulerSpec::RoundRobin { batch } => {
                Box::new(RoundRobinScheduler::new(batch).map_err(|e| prefix("scheduler.batch", e))?)
            }
            SchedulerSpec::Scripted { path, repeat, fair } => {
                let rounds = read_script_file(path).map_err(|e| prefix("scheduler.path", e))?;
                let mut s = ScriptedScheduler::new(rounds, *repeat).map_err(field)?;
                if *fair {
                    s = s
                        .claim_fairness(n)
                        .map_err(|e| prefix("scheduler.fair", e))?;
                }
                Box::new(s)
            }
            SchedulerSpec::Social { profile, gamma } => {
                let profile = load_profile(profile, "scheduler.profile")?;
                Box::new(SocialScheduler::new(profile, *gamma))
            }
        })
    }

    /// Builds everything a run needs. The resolved config is recorded in the
    /// trace metadata so the run can be replayed.
    pub fn prepare(&self) -> Result<Experiment> {
        if self.max_rounds == 0 {
            return Err(Error::config("max_rounds must be at least 1"));
        }
        let (g, assembly) = self.build_graph()?;
        let potential = self.build_potential()?;
        let scheduler = self.build_scheduler(g.node_count())?;
        let merged = matches!(self.potential, PotentialSpec::Rule110Merged { .. });
        let half_steps =
            assembly.is_some() && matches!(self.potential, PotentialSpec::Rule110 { .. });
        let mut run = RunConfig::new(g, potential, scheduler)
            .max_rounds(self.max_rounds)
            .stop_mode(match self.stop {
                StopSpec::FixedPoint => StopMode::FixedPoint,
                StopSpec::Cycle => StopMode::Cycle,
                StopSpec::Budget => StopMode::Budget,
            })
            .prune(self.prune)
            .seed(self.seed)
            .rounds_per_step(if half_steps { 2 } else { 1 })
            .trace_detail(if self.compact_trace {
                TraceDetail::Compact
            } else {
                TraceDetail::Full
            })
            .metadata("config", self.to_toml());
        if let SchedulerSpec::Uniform {
            quiet_streak: Some(l),
        } = self.scheduler
        {
            run = run.quiet_streak(l);
        }
        if let Some(a) = &assembly {
            run = run
                .metadata("kind", "rule110")
                .metadata("tape", &a.tape)
                .metadata("ring_cells", a.ring_cells())
                .metadata("merged", merged);
        }
        Ok(Experiment { run, assembly })
    }
}

fn load_profile(path: &Path, field: &str) -> Result<Arc<SocialProfile>> {
    read_profile_file(path)
        .map(Arc::new)
        .map_err(|e| prefix(field, e))
}

/// Names the offending config field in a validation error.
fn prefix(field: &str, e: Error) -> Error {
    match e {
        Error::Config(m) => Error::Config(format!("{field}: {m}")),
        Error::Input(m) => Error::Input(format!("{field}: {m}")),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const KCORE: &str = r#"
seed = 3
[graph]
source = "gnp"
n = 40
p = 0.1
[potential]
name = "min_degree"
alpha = 2.0
beta = 2.0
[scheduler]
name = "round_robin"
batch = 50
"#;

    #[test]
    fn parses_and_round_trips() {
        let c = ExperimentConfig::from_toml(KCORE, "k.toml").unwrap();
        assert_eq!(c.max_rounds, 10_000);
        assert_eq!(c.scheduler, SchedulerSpec::RoundRobin { batch: 50 });
        let again = ExperimentConfig::from_toml(&c.to_toml(), "again").unwrap();
        assert_eq!(again, c);
        let e = c.prepare().unwrap();
        assert_eq!(e.run.initial_graph.node_count(), 40);
    }

    #[test]
    fn alpha_above_beta_names_the_table() {
        let text = KCORE.replace("alpha = 2.0", "alpha = 3.0");
        let c = ExperimentConfig::from_toml(&text, "k.toml").unwrap();
        let err = c.prepare().err().unwrap().to_string();
        assert!(err.contains("potential"), "{err}");
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let text = KCORE.replace("batch = 50", "batch = 50\nbathc = 3");
        let err = ExperimentConfig::from_toml(&text, "k.toml")
            .unwrap_err()
            .to_string();
        assert!(err.contains("bathc"), "{err}");
        let text = KCORE.replace("p = 0.1", "p = 1.5");
        let err = ExperimentConfig::from_toml(&text, "k.toml")
            .unwrap()
            .prepare()
            .err()
            .unwrap()
            .to_string();
        assert!(err.contains("graph"), "{err}");
    }

    #[test]
    fn rule110_assembly_metadata() {
        let text = r#"
[graph]
source = "rule110"
tape = "0000"
[potential]
name = "rule110_merged"
[scheduler]
name = "complete"
"#;
        let e = ExperimentConfig::from_toml(text, "r.toml")
            .unwrap()
            .prepare()
            .unwrap();
        assert!(e.assembly.is_some());
        assert_eq!(e.run.metadata["merged"], "true");
        assert_eq!(e.run.rounds_per_step, 1);
    }
}
