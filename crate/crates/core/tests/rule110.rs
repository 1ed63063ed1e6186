//! Gadget-graph simulations of the Rule-110 automaton against the direct
//! implementation.

use rand::Rng;
use threshold_dynamics::engine::Verdict;
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::rule110::{
    build_assembly, check_structure, reference_run, simulate, simulate_with, Parity, SimOptions,
    Tape,
};

fn tape(s: &str) -> Tape {
    s.parse().unwrap()
}

#[test]
fn uniform_tapes_reach_the_zero_fixed_point() {
    for start in ["000", "111"] {
        let merged = simulate(&tape(start), 3, true).unwrap();
        assert!(merged.faithful(), "{start}");
        assert!(
            matches!(merged.trace.verdict, Verdict::Stabilized { .. }),
            "{:?}",
            merged.trace.verdict
        );

        let unmerged = simulate(&tape(start), 3, false).unwrap();
        assert!(unmerged.faithful(), "{start}");
        assert!(
            matches!(unmerged.trace.verdict, Verdict::Cycle { period: 2, .. }),
            "{:?}",
            unmerged.trace.verdict
        );
        assert_eq!(
            unmerged.observed.last().unwrap().as_ref(),
            Some(&tape("000"))
        );
    }
}

#[test]
fn merged_zero_step_keeps_every_edge() {
    let sim = simulate(&tape("0000"), 1, true).unwrap();
    assert_eq!(sim.final_graph, sim.assembly.graph);
    assert_eq!(sim.trace.total_changes, 0);
}

#[test]
fn literal_three_cell_ring_is_not_faithful() {
    let opts = SimOptions {
        ring_cells: Some(3),
        ..SimOptions::default()
    };
    let sim = simulate_with(&tape("010"), 1, &opts).unwrap();
    assert!(!sim.faithful());
    let (round, report) = &sim.structure_failures[0];
    assert_eq!(*round, 0);
    assert!(
        report.violations.iter().any(|v| v.check == "ce"),
        "{report}"
    );
}

#[test]
fn three_wide_tapes_are_faithful_on_the_doubled_ring() {
    let sim = simulate(&tape("010"), 2, false).unwrap();
    assert_eq!(sim.assembly.ring_cells(), 6);
    assert!(sim.faithful(), "first mismatch {:?}", sim.first_mismatch());
}

#[test]
fn random_tapes_track_the_automaton() {
    let mut rng = sim_rng(110);
    for merged in [false, true] {
        for _ in 0..2 {
            let width = rng.gen_range(4..=5);
            let bits: Vec<bool> = (0..width).map(|_| rng.gen_bool(0.5)).collect();
            let start = Tape::new(bits).unwrap();
            let sim = simulate(&start, 3, merged).unwrap();
            assert_eq!(sim.reference, reference_run(&start, 3));
            assert!(
                sim.faithful(),
                "{start} merged={merged}: mismatch at {:?}, {} structure failures",
                sim.first_mismatch(),
                sim.structure_failures.len()
            );
        }
    }
}

#[test]
fn structure_checks_depend_on_parity() {
    let sim = simulate_with(
        &tape("0110"),
        1,
        &SimOptions {
            check_structure: false,
            ..SimOptions::default()
        },
    )
    .unwrap();
    let a = &sim.assembly;
    let fresh = build_assembly(&tape("0110"));
    assert!(check_structure(&fresh, &fresh.graph, Parity::Integer)
        .unwrap()
        .passed());
    assert!(!check_structure(&fresh, &fresh.graph, Parity::Half)
        .unwrap()
        .passed());
    assert!(check_structure(a, &sim.final_graph, Parity::Integer)
        .unwrap()
        .passed());
}
