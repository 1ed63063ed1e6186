//! End-to-end runs of the `tnd` command set on the bundled configs.

use std::path::{Path, PathBuf};

use threshold_dynamics::cli::{run_cli, Exit};
use threshold_dynamics::graph::io::{read_edge_list_file, write_edge_list_file};
use threshold_dynamics::rule110::build_assembly;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .display()
        .to_string()
}

fn tnd(args: &[&str]) -> (Exit, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let exit = run_cli(
        std::iter::once("tnd").chain(args.iter().copied()),
        &mut out,
        &mut err,
    );
    let mut text = String::from_utf8(out).unwrap();
    text.push_str(&String::from_utf8(err).unwrap());
    (exit, text)
}

struct Artifacts {
    _dir: tempfile::TempDir,
    trace: PathBuf,
    graph: PathBuf,
}

fn run_config(config: &str) -> (Exit, String, Artifacts) {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("run.trace.jsonl");
    let graph = dir.path().join("final.edges");
    let (exit, text) = tnd(&[
        "run",
        &data(config),
        "--trace",
        trace.to_str().unwrap(),
        "--final-graph",
        graph.to_str().unwrap(),
    ]);
    (
        exit,
        text,
        Artifacts {
            _dir: dir,
            trace,
            graph,
        },
    )
}

fn verify(mode: &str, a: &Artifacts) -> (Exit, String) {
    tnd(&[
        "verify",
        "--mode",
        mode,
        "--trace",
        a.trace.to_str().unwrap(),
        "--graph",
        a.graph.to_str().unwrap(),
    ])
}

#[test]
fn kcore_run_verifies() {
    let (exit, text, a) = run_config("kcore.toml");
    assert_eq!(exit, Exit::Success, "{text}");
    let (exit, report) = verify("kcore", &a);
    assert_eq!(exit, Exit::Success, "{report}");
    assert!(
        report.contains("PASS final graph is the 3-core"),
        "{report}"
    );
}

#[test]
fn traces_are_byte_identical_and_graphs_round_trip() {
    let (_, _, first) = run_config("kcore.toml");
    let (_, _, second) = run_config("kcore.toml");
    assert_eq!(
        std::fs::read(&first.trace).unwrap(),
        std::fs::read(&second.trace).unwrap()
    );
    let g = read_edge_list_file(&first.graph).unwrap();
    let trace = std::fs::read_to_string(&first.trace).unwrap();
    assert!(trace
        .lines()
        .last()
        .unwrap()
        .contains(&g.fingerprint().to_string()));
}

#[test]
fn degree_props_replay_passes() {
    let (exit, text, a) = run_config("degree.toml");
    assert_eq!(exit, Exit::Success, "{text}");
    let (exit, report) = verify("degree-props", &a);
    assert_eq!(exit, Exit::Success, "{report}");
    assert!(report.contains("PASS degree-class properties"), "{report}");
}

#[test]
fn merged_zero_tape_is_stable() {
    let (exit, text, _) = run_config("rule110_zero.toml");
    assert_eq!(exit, Exit::Success, "{text}");
    assert!(text.contains("Stabilized"), "{text}");
    assert!(text.contains("tape: 0000"), "{text}");
}

#[test]
fn tampered_flip_edge_is_named() {
    let (exit, _, a) = run_config("rule110_half_steps.toml");
    assert_eq!(exit, Exit::Budget);
    let (exit, report) = verify("rule110", &a);
    assert_eq!(exit, Exit::Success, "{report}");
    assert!(report.contains("PASS tape after 3 steps"), "{report}");

    let assembly = build_assembly(&"0100".parse().unwrap());
    let gadget = assembly.map.flips()[250];
    let mut g = read_edge_list_file(&a.graph).unwrap();
    if !g.remove_edge(gadget.x, gadget.y).unwrap() {
        g.add_edge(gadget.x, gadget.y).unwrap();
    }
    write_edge_list_file(&g, &a.graph).unwrap();
    let (exit, report) = verify("rule110", &a);
    assert_eq!(exit, Exit::VerifyFailed, "{report}");
    assert!(report.contains(&gadget.to_string()), "{report}");
}

#[test]
fn mismatched_mode_is_a_usage_error() {
    let (_, _, a) = run_config("kcore.toml");
    let (exit, text) = verify("rule110", &a);
    assert_eq!(exit, Exit::Usage, "{text}");
}

#[test]
fn alpha_above_beta_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    let text = std::fs::read_to_string(data("degree.toml"))
        .unwrap()
        .replace("alpha = 24.0", "alpha = 30.0");
    std::fs::write(&path, text).unwrap();
    let (exit, text) = tnd(&["run", path.to_str().unwrap()]);
    assert_eq!(exit, Exit::Usage);
    assert!(text.contains("potential"), "{text}");
}

#[test]
fn scripted_and_social_configs_stabilize() {
    for config in ["scripted.toml", "social.toml"] {
        let (exit, text, _) = run_config(config);
        assert_eq!(exit, Exit::Success, "{config}: {text}");
    }
}

#[test]
fn rule110_command_dumps_a_labelled_assembly() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("asm.edges");
    let (exit, text) = tnd(&[
        "rule110",
        "--tape",
        "0110",
        "--steps",
        "2",
        "--dump-assembly",
        dump.to_str().unwrap(),
    ]);
    assert_eq!(exit, Exit::Success, "{text}");
    assert!(text.contains("faithful"), "{text}");
    let g = read_edge_list_file(&dump).unwrap();
    assert_eq!(g, build_assembly(&"0110".parse().unwrap()).graph);
    let labels = std::fs::read_to_string(dir.path().join("asm.edges.labels")).unwrap();
    assert!(labels.lines().any(|l| l == "0 c0.A1.h"));
    assert_eq!(
        labels.lines().filter(|l| !l.starts_with('#')).count(),
        g.node_count()
    );
}

#[test]
fn star_and_social_commands() {
    let (exit, text) = tnd(&["star", "--n", "15", "--p", "0.2", "--seed", "3"]);
    assert_eq!(exit, Exit::Success, "{text}");
    assert!(text.contains("spanning star: true"), "{text}");
    let profile = data("village.profile");
    let (exit, text) = tnd(&["social", "--profile", &profile, "--n", "30", "--seed", "5"]);
    assert_eq!(exit, Exit::Success, "{text}");
    assert!(
        text.contains("enemy pairs that gained an edge: 0"),
        "{text}"
    );
}

#[test]
fn kcore_command_on_the_sample() {
    let (exit, text) = tnd(&["kcore", &data("sample.edges"), "--k", "3"]);
    assert_eq!(exit, Exit::Success);
    assert!(
        text.contains("crust:") && text.contains("44 45 46 47"),
        "{text}"
    );
}
