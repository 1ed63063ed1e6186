//! Social dynamics and the spanning-star protocol.

use std::sync::Arc;

use rand::Rng;
use threshold_dynamics::engine::{run, RunConfig, Verdict};
use threshold_dynamics::extensions::{
    is_star, random_profile, run_general, social_potential, GeneralProtocol, StarProtocol,
};
use threshold_dynamics::graph::generators::{complete, gnp};
use threshold_dynamics::graph::{DynGraph, Pair};
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::schedulers::{
    RoundRobinScheduler, SocialScheduler, UniformRandomScheduler,
};

#[test]
fn enemies_never_gain_an_edge_under_the_social_scheduler() {
    for seed in 0..20 {
        let mut rng = sim_rng(seed);
        let n = rng.gen_range(8..=30);
        let profile = Arc::new(random_profile(n, 4, 3, 0.2, &mut rng));
        let g0 = gnp(n, 0.2, &mut rng).unwrap();
        let potential = social_potential(profile.clone(), 6.0, 9.0).unwrap();
        let scheduler = Box::new(SocialScheduler::new(profile.clone(), 2));
        let out = run(RunConfig::new(g0.clone(), potential, scheduler)
            .max_rounds(2_000)
            .seed(seed))
        .unwrap();
        for p in profile.enemies() {
            assert!(
                g0.has_edge(p.lo(), p.hi()) || !out.final_graph.has_edge(p.lo(), p.hi()),
                "seed {seed}: enemies {p} became adjacent"
            );
        }
    }
}

#[test]
fn social_runs_stabilize_under_round_robin() {
    for seed in 0..15 {
        let mut rng = sim_rng(1000 + seed);
        let n = rng.gen_range(5..=40);
        let profile = Arc::new(random_profile(n, 4, 3, 0.1, &mut rng));
        let g0 = gnp(n, 0.15, &mut rng).unwrap();
        let potential = social_potential(profile, 8.0, 12.0).unwrap();
        let scheduler = Box::new(RoundRobinScheduler::new(n.max(2) - 1).unwrap());
        let out = run(RunConfig::new(g0, potential, scheduler)
            .max_rounds(20_000)
            .seed(seed))
        .unwrap();
        assert!(
            matches!(out.trace.verdict, Verdict::Stabilized { .. }),
            "seed {seed}: {:?}",
            out.trace.verdict
        );
    }
}

#[test]
fn a_star_stays_a_star() {
    let mut g = DynGraph::new(12);
    for v in 1..12 {
        g.add_edge(0, v).unwrap();
    }
    let protocol = StarProtocol::new();
    let mut rng = sim_rng(7);
    for _ in 0..10_000 {
        let u = rng.gen_range(0..12u32);
        let v = (u + rng.gen_range(1..12u32)) % 12;
        let delta = protocol.rewrite(&g, Pair::new(u, v), &mut rng).unwrap();
        g.apply_delta(&delta).unwrap();
        assert!(is_star(&g));
    }
}

#[test]
fn disconnected_inputs_still_reach_a_spanning_star() {
    let mut g = DynGraph::new(14);
    for (u, v) in [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (6, 7)] {
        g.add_edge(u, v).unwrap();
    }
    let inputs = [
        g,
        DynGraph::new(9),
        complete(8),
        gnp(25, 0.05, &mut sim_rng(3)).unwrap(),
    ];
    for (i, g0) in inputs.iter().enumerate() {
        let out = run_general(
            g0,
            &StarProtocol::new(),
            Box::new(UniformRandomScheduler),
            1_000_000,
            i as u64,
        )
        .unwrap();
        assert!(out.reached_target, "input {i}");
        assert!(is_star(&out.final_graph));
        assert!(out.violations.is_empty(), "input {i}: {:?}", out.violations);
    }
}
