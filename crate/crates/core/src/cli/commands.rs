use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use super::config::{ExperimentConfig, PotentialSpec};
use super::{Command, Exit, SocialSchedule, VerifyMode};
use crate::engine::{
    check_degree_properties, read_trace, run, write_trace, RunConfig, RunTrace, Runner,
    TraceHeader, TraceLine,
};
use crate::error::{Error, Result};
use crate::extensions::{
    random_profile, read_profile_file, run_general, social_potential, SocialProfile, StarProtocol,
};
use crate::graph::generators::{connected_gnp, gnp};
use crate::graph::io::{read_edge_list_file, write_edge_list_file};
use crate::graph::DynGraph;
use crate::kcore::{peel, verify_kcore_run};
use crate::rng::sim_rng;
use crate::rule110::{
    build_assembly_on_ring, check_structure, default_ring_cells, extract_values, reference_run,
    simulate_with, values_to_tape, Parity, SimOptions, Tape,
};
use crate::schedulers::{RoundRobinScheduler, Scheduler, SocialScheduler, UniformRandomScheduler};

pub(super) fn dispatch(command: Command, out: &mut dyn Write) -> Result<Exit> {
    match command {
        Command::Run {
            config,
            trace,
            final_graph,
        } => cmd_run(&config, trace, final_graph, out),
        Command::Verify { mode, trace, graph } => cmd_verify(mode, &trace, &graph, out),
        Command::Kcore { graph, k } => cmd_kcore(&graph, k, out),
        Command::Rule110 {
            tape,
            steps,
            merged,
            dump_assembly,
            ring_cells,
            no_prune,
            trace,
            final_graph,
        } => {
            let tape: Tape = tape.parse()?;
            let opts = SimOptions {
                merged,
                prune: !no_prune,
                ring_cells,
                ..SimOptions::default()
            };
            cmd_rule110(
                &tape,
                steps,
                &opts,
                dump_assembly.as_deref(),
                trace,
                final_graph,
                out,
            )
        }
        Command::Star {
            graph,
            n,
            p,
            seed,
            budget,
            final_graph,
        } => {
            let g = match graph {
                Some(path) => read_edge_list_file(&path)?,
                None => connected_gnp(n, p, &mut sim_rng(seed))?,
            };
            cmd_star(&g, seed, budget, final_graph, out)
        }
        Command::Social {
            profile,
            graph,
            n,
            p,
            gamma,
            alpha,
            beta,
            scheduler,
            seed,
            max_rounds,
            trace,
            final_graph,
        } => {
            let mut rng = sim_rng(seed);
            let g = match graph {
                Some(path) => read_edge_list_file(&path)?,
                None => gnp(n, p, &mut rng)?,
            };
            let profile = match profile {
                Some(path) => read_profile_file(&path)?,
                None => random_profile(g.node_count(), 3, 2, 0.05, &mut rng),
            };
            let social = SocialArgs {
                gamma,
                alpha,
                beta,
                scheduler,
                seed,
                max_rounds,
            };
            cmd_social(g, Arc::new(profile), &social, trace, final_graph, out)
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(File::create(path)?))
}

fn save_outputs(
    trace: &RunTrace,
    g: &DynGraph,
    trace_path: Option<&Path>,
    graph_path: Option<&Path>,
) -> Result<()> {
    if let Some(p) = trace_path {
        write_trace(trace, create(p)?)?;
    }
    if let Some(p) = graph_path {
        if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        write_edge_list_file(g, p)?;
    }
    Ok(())
}

fn summarize(trace: &RunTrace, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "potential: {}", trace.potential)?;
    writeln!(out, "scheduler: {}", trace.scheduler)?;
    writeln!(out, "verdict: {:?}", trace.verdict)?;
    writeln!(
        out,
        "rounds: {} (changes in {}, {} edge flips, last change {})",
        trace.rounds,
        trace.change_rounds,
        trace.total_changes,
        trace
            .last_change
            .map_or("none".to_string(), |r| r.to_string())
    )?;
    writeln!(out, "final fingerprint: {}", trace.final_fingerprint)?;
    Ok(())
}

pub fn cmd_run(
    config_path: &Path,
    trace: Option<PathBuf>,
    final_graph: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<Exit> {
    let config = ExperimentConfig::load(config_path)?;
    let experiment = config.prepare()?;
    let assembly = experiment.assembly;
    let outcome = run(experiment.run)?;
    summarize(&outcome.trace, out)?;
    if let Some(a) = &assembly {
        let tape = values_to_tape(&extract_values(a, &outcome.final_graph));
        writeln!(
            out,
            "tape: {}",
            tape.map_or("inconsistent".to_string(), |t| t.to_string())
        )?;
    }
    let trace_path = trace.or(config.output.trace.clone());
    let graph_path = final_graph.or(config.output.final_graph.clone());
    save_outputs(
        &outcome.trace,
        &outcome.final_graph,
        trace_path.as_deref(),
        graph_path.as_deref(),
    )?;
    Ok(Exit::of_verdict(&outcome.trace.verdict))
}

struct TraceFile {
    header: TraceHeader,
    rounds: u64,
    change_rounds: u64,
    last_change: Option<u64>,
    final_fingerprint: String,
}

fn load_trace(path: &Path) -> Result<TraceFile> {
    let file = File::open(path)
        .map_err(|e| Error::input(format!("cannot open trace {}: {e}", path.display())))?;
    let lines = read_trace(file, &path.display().to_string())?;
    let header = match &lines[0] {
        TraceLine::Header(h) => h.clone(),
        _ => unreachable!("read_trace checks the header"),
    };
    match lines.last() {
        Some(&TraceLine::Verdict {
            rounds,
            change_rounds,
            last_change,
            ref final_fingerprint,
            ..
        }) => Ok(TraceFile {
            header,
            rounds,
            change_rounds,
            last_change,
            final_fingerprint: final_fingerprint.clone(),
        }),
        _ => Err(Error::input(format!(
            "{} has no verdict line",
            path.display()
        ))),
    }
}

fn recorded_config(trace: &TraceFile) -> Result<ExperimentConfig> {
    let text = trace.header.metadata.get("config").ok_or_else(|| {
        Error::config("trace carries no run config; it was not produced by `tnd run`")
    })?;
    ExperimentConfig::from_toml(text, "trace header config")
}

/// Collects pass/fail lines for a verification report.
struct Report<'a> {
    out: &'a mut dyn Write,
    failed: bool,
}

impl Report<'_> {
    fn check(&mut self, name: &str, ok: bool, detail: impl std::fmt::Display) -> Result<()> {
        self.failed |= !ok;
        writeln!(
            self.out,
            "{} {name}: {detail}",
            if ok { "PASS" } else { "FAIL" }
        )?;
        Ok(())
    }

    fn exit(&mut self) -> Result<Exit> {
        writeln!(
            self.out,
            "{}",
            if self.failed {
                "verification failed"
            } else {
                "verified"
            }
        )?;
        Ok(if self.failed {
            Exit::VerifyFailed
        } else {
            Exit::Success
        })
    }
}

pub fn cmd_verify(
    mode: VerifyMode,
    trace_path: &Path,
    graph_path: &Path,
    out: &mut dyn Write,
) -> Result<Exit> {
    let trace = load_trace(trace_path)?;
    let g = read_edge_list_file(graph_path)?;
    let mut report = Report { out, failed: false };
    let fp = g.fingerprint().to_string();
    report.check(
        "final graph matches trace",
        fp == trace.final_fingerprint,
        format!("fingerprint {fp}, trace {}", trace.final_fingerprint),
    )?;
    match mode {
        VerifyMode::Kcore => {
            let config = recorded_config(&trace)?;
            let PotentialSpec::MinDegree { alpha, .. } = config.potential else {
                return Err(Error::config("kcore verification needs a min_degree run"));
            };
            let (g0, _) = config.build_graph()?;
            report.check(
                "initial graph replayed",
                g0.fingerprint().to_string() == trace.header.initial_fingerprint,
                "regenerated from the recorded config",
            )?;
            let k = alpha.ceil().max(0.0) as usize;
            let kc = verify_kcore_run(&g, &g0, k);
            report.check(&format!("final graph is the {k}-core"), kc.passed(), &kc)?;
            report.check(
                "change rounds within edge count",
                trace.change_rounds <= g0.edge_count() as u64,
                format!("{} ≤ {}", trace.change_rounds, g0.edge_count()),
            )?;
        }
        VerifyMode::Rule110 => {
            let meta = &trace.header.metadata;
            if meta.get("kind").map(String::as_str) != Some("rule110") {
                return Err(Error::config(
                    "rule110 verification needs a trace from a gadget-graph run",
                ));
            }
            let field = |k: &str| {
                meta.get(k)
                    .ok_or_else(|| Error::config(format!("trace metadata lacks `{k}`")))
            };
            let tape: Tape = field("tape")?.parse()?;
            let ring: usize = field("ring_cells")?
                .parse()
                .map_err(|_| Error::config("trace metadata `ring_cells` is not a number"))?;
            let merged = field("merged")? == "true";
            let assembly = build_assembly_on_ring(&tape, ring)?;
            let parity = if merged {
                Parity::Integer
            } else {
                Parity::of_round(trace.rounds)
            };
            let structure = check_structure(&assembly, &g, parity)?;
            report.check("gadget structure", structure.passed(), &structure)?;
            if parity == Parity::Integer {
                let step = (trace.rounds / trace.header.rounds_per_step) as usize;
                let expected = reference_run(&tape, step).pop().unwrap();
                let observed = values_to_tape(&extract_values(&assembly, &g));
                report.check(
                    &format!("tape after {step} steps"),
                    observed.as_ref() == Some(&expected),
                    format!(
                        "graph {}, automaton {expected}",
                        observed.map_or("inconsistent".to_string(), |t| t.to_string())
                    ),
                )?;
            }
        }
        VerifyMode::DegreeProps => {
            let config = recorded_config(&trace)?;
            if !matches!(
                config.potential,
                PotentialSpec::ProperDegree { .. } | PotentialSpec::MinDegree { .. }
            ) {
                return Err(Error::config(
                    "degree-props verification needs a proper_degree or min_degree run",
                ));
            }
            let mut experiment = config.prepare()?;
            experiment.run.max_rounds = trace.rounds.max(1);
            let graphs = replay(experiment.run)?;
            let last = graphs.last().unwrap();
            report.check(
                "replay reproduces the final graph",
                last.fingerprint().to_string() == trace.final_fingerprint,
                format!("{} rounds replayed", graphs.len() - 1),
            )?;
            let props = check_degree_properties(&graphs);
            report.check(
                "degree-class properties",
                props.passed(),
                format!(
                    "{} rounds checked, {} violations",
                    props.rounds_checked,
                    props.violations.len()
                ),
            )?;
            for v in props.violations.iter().take(5) {
                writeln!(report.out, "  {v:?}")?;
            }
            report.check(
                "last change within class bound",
                props.within_bound(),
                format!(
                    "last change {:?}, initial classes {}",
                    trace.last_change, props.initial_classes
                ),
            )?;
        }
    }
    report.exit()
}

/// Re-executes a run and returns `G(0), ..., G(rounds)`.
fn replay(config: RunConfig) -> Result<Vec<DynGraph>> {
    let mut runner = Runner::new(config)?;
    let mut graphs = vec![runner.graph().clone()];
    loop {
        let done = runner.advance()?.is_some();
        graphs.push(runner.graph().clone());
        if done {
            return Ok(graphs);
        }
    }
}

pub fn cmd_kcore(graph: &Path, k: usize, out: &mut dyn Write) -> Result<Exit> {
    let g = read_edge_list_file(graph)?;
    let dec = peel(&g, k);
    let list = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    writeln!(out, "{k}-core: {} nodes", dec.core.len())?;
    writeln!(out, "core: {}", list(&dec.core))?;
    writeln!(
        out,
        "{}-crust: {} nodes",
        k.saturating_sub(1),
        dec.crust.len()
    )?;
    writeln!(out, "crust: {}", list(&dec.crust))?;
    Ok(Exit::Success)
}

pub fn cmd_rule110(
    tape: &Tape,
    steps: usize,
    opts: &SimOptions,
    dump: Option<&Path>,
    trace: Option<PathBuf>,
    final_graph: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<Exit> {
    if let Some(path) = dump {
        let ring = opts
            .ring_cells
            .unwrap_or_else(|| default_ring_cells(tape.width()));
        let assembly = build_assembly_on_ring(tape, ring)?;
        save_outputs_graph(&assembly.graph, path)?;
        let labels = label_path(path);
        assembly.map.write_labels(create(&labels)?)?;
        writeln!(
            out,
            "assembly: {} nodes, {} edges -> {} (labels {})",
            assembly.graph.node_count(),
            assembly.graph.edge_count(),
            path.display(),
            labels.display()
        )?;
        if steps == 0 {
            return Ok(Exit::Success);
        }
    }
    let sim = simulate_with(tape, steps, opts)?;
    writeln!(
        out,
        "ring of {} cells, {} nodes, {}",
        sim.assembly.ring_cells(),
        sim.assembly.graph.node_count(),
        if opts.merged {
            "merged potential"
        } else {
            "two rounds per step"
        }
    )?;
    for (t, (r, o)) in sim.reference.iter().zip(&sim.observed).enumerate() {
        let seen = o
            .as_ref()
            .map_or("inconsistent".to_string(), |x| x.to_string());
        let mark = if o.as_ref() == Some(r) {
            "ok"
        } else {
            "MISMATCH"
        };
        writeln!(out, "step {t}: graph {seen} automaton {r} {mark}")?;
    }
    for (round, report) in sim.structure_failures.iter().take(3) {
        writeln!(out, "round {round}: {report}")?;
    }
    writeln!(out, "verdict: {:?}", sim.trace.verdict)?;
    save_outputs(
        &sim.trace,
        &sim.final_graph,
        trace.as_deref(),
        final_graph.as_deref(),
    )?;
    let ok = sim.faithful();
    writeln!(
        out,
        "{}",
        if ok {
            "faithful"
        } else {
            "simulation diverged"
        }
    )?;
    Ok(if ok {
        Exit::Success
    } else {
        Exit::VerifyFailed
    })
}

fn save_outputs_graph(g: &DynGraph, path: &Path) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)?;
    }
    write_edge_list_file(g, path)
}

/// `<file>.labels` next to an assembly dump.
pub fn label_path(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".labels");
    PathBuf::from(name)
}

pub fn cmd_star(
    g: &DynGraph,
    seed: u64,
    budget: u64,
    final_graph: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<Exit> {
    let outcome = run_general(
        g,
        &StarProtocol::new(),
        Box::new(UniformRandomScheduler),
        budget,
        seed,
    )?;
    writeln!(
        out,
        "nodes: {}, initial edges: {}",
        g.node_count(),
        g.edge_count()
    )?;
    writeln!(
        out,
        "rounds: {}, merges: {}, new leaves: {}, idle: {}",
        outcome.trace.rounds, outcome.progress[0], outcome.progress[1], outcome.progress[2]
    )?;
    writeln!(out, "spanning star: {}", outcome.reached_target)?;
    for (round, detail) in outcome.violations.iter().take(5) {
        writeln!(out, "progress violation in round {round}: {detail}")?;
    }
    if let Some(p) = final_graph {
        save_outputs_graph(&outcome.final_graph, &p)?;
    }
    Ok(if !outcome.violations.is_empty() {
        Exit::VerifyFailed
    } else if outcome.reached_target {
        Exit::Success
    } else {
        Exit::Budget
    })
}

struct SocialArgs {
    gamma: usize,
    alpha: f64,
    beta: f64,
    scheduler: SocialSchedule,
    seed: u64,
    max_rounds: u64,
}

fn cmd_social(
    g: DynGraph,
    profile: Arc<SocialProfile>,
    args: &SocialArgs,
    trace: Option<PathBuf>,
    final_graph: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<Exit> {
    let potential = social_potential(profile.clone(), args.alpha, args.beta)?;
    let scheduler: Box<dyn Scheduler> = match args.scheduler {
        SocialSchedule::Social => Box::new(SocialScheduler::new(profile.clone(), args.gamma)),
        SocialSchedule::RoundRobin => {
            Box::new(RoundRobinScheduler::new(g.node_count().max(2) - 1)?)
        }
    };
    let g0 = g.clone();
    let config = RunConfig::new(g, potential, scheduler)
        .max_rounds(args.max_rounds)
        .seed(args.seed)
        .metadata("gamma", args.gamma);
    let outcome = run(config)?;
    summarize(&outcome.trace, out)?;
    writeln!(
        out,
        "edges: {} -> {}",
        g0.edge_count(),
        outcome.final_graph.edge_count()
    )?;
    let mut exit = Exit::of_verdict(&outcome.trace.verdict);
    if args.scheduler == SocialSchedule::Social {
        let gained: Vec<_> = profile
            .enemies()
            .filter(|p| {
                !g0.has_edge(p.lo(), p.hi()) && outcome.final_graph.has_edge(p.lo(), p.hi())
            })
            .collect();
        writeln!(out, "enemy pairs that gained an edge: {}", gained.len())?;
        if !gained.is_empty() {
            exit = Exit::VerifyFailed;
        }
    }
    save_outputs(
        &outcome.trace,
        &outcome.final_graph,
        trace.as_deref(),
        final_graph.as_deref(),
    )?;
    Ok(exit)
}

#[cfg(test)]
mod tests {
    use super::super::{run_cli, GraphSpec};
    use super::*;

    fn tnd(args: &[&str]) -> (Exit, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut argv = vec!["tnd"];
        argv.extend_from_slice(args);
        let exit = run_cli(argv, &mut out, &mut err);
        let mut text = String::from_utf8(out).unwrap();
        text.push_str(&String::from_utf8(err).unwrap());
        (exit, text)
    }

    #[test]
    fn usage_errors_exit_64() {
        assert_eq!(tnd(&["frobnicate"]).0, Exit::Usage);
        assert_eq!(tnd(&["rule110", "--tape", "01"]).0, Exit::Usage);
        assert_eq!(tnd(&["--help"]).0, Exit::Success);
    }

    #[test]
    fn kcore_lists_nodes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("g.edges");
        std::fs::write(&path, "nodes 5\n0 1\n1 2\n0 2\n2 3\n").unwrap();
        let (exit, text) = tnd(&["kcore", path.to_str().unwrap(), "--k", "2"]);
        assert_eq!(exit, Exit::Success);
        assert!(text.contains("core: 0 1 2\n"), "{text}");
        assert!(text.contains("crust: 3 4\n"), "{text}");
    }

    #[test]
    fn graph_spec_paths_are_resolved() {
        let mut c = ExperimentConfig::from_toml(
            "[graph]\nsource = \"file\"\npath = \"g.edges\"\n[potential]\nname = \"community\"\nalpha = 1.0\nbeta = 2.0\n[scheduler]\nname = \"complete\"\n",
            "c",
        )
        .unwrap();
        c.resolve_paths(Path::new("/data"));
        assert_eq!(
            c.graph,
            GraphSpec::File {
                path: PathBuf::from("/data/g.edges")
            }
        );
    }
}
