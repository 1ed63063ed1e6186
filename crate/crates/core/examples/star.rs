//! A spanning star built by a protocol that moves edges.
//!
//! Unlike the threshold protocols, an interaction may rewrite edges around
//! the pair. Every changing round either merges components or creates a
//! leaf.

use threshold_dynamics::extensions::{run_general, StarProtocol};
use threshold_dynamics::graph::generators::gnp;
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::schedulers::UniformRandomScheduler;

fn main() -> threshold_dynamics::Result<()> {
    for (i, n) in [10, 40, 120].into_iter().enumerate() {
        let g0 = gnp(n, 2.0 / n as f64, &mut sim_rng(i as u64))?;
        let out = run_general(
            &g0,
            &StarProtocol::new(),
            Box::new(UniformRandomScheduler),
            10_000_000,
            5,
        )?;
        println!(
            "n={n:<4} components {:<3} rounds {:<8} merges {:<4} new leaves {:<4} star {}",
            g0.components().1,
            out.trace.rounds,
            out.progress[0],
            out.progress[1],
            out.reached_target
        );
    }
    Ok(())
}
