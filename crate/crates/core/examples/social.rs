//! Friendships driven by niceness and extroversion.
//!
//! Each node has a niceness and an extroversion; the potential sums the
//! niceness of the neighborhoods, and the social scheduler only introduces
//! pairs within reach of their extroversion. Enemies are never introduced.

use std::path::Path;
use std::sync::Arc;

use threshold_dynamics::engine::{run, RunConfig};
use threshold_dynamics::extensions::{read_profile_file, social_potential};
use threshold_dynamics::graph::generators::gnp;
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::schedulers::SocialScheduler;

fn main() -> threshold_dynamics::Result<()> {
    let profile = Arc::new(read_profile_file(
        &Path::new(env!("CARGO_MANIFEST_DIR")).join("data/village.profile"),
    )?);
    let n = profile.node_count();
    let g0 = gnp(n, 0.15, &mut sim_rng(21))?;
    let potential = social_potential(profile.clone(), 10.0, 14.0)?;
    let out = run(RunConfig::new(
        g0.clone(),
        potential,
        Box::new(SocialScheduler::new(profile.clone(), 2)),
    )
    .seed(4))?;
    println!("{:?}", out.trace.verdict);
    println!(
        "edges {} -> {}",
        g0.edge_count(),
        out.final_graph.edge_count()
    );
    let mut by_niceness: Vec<_> = (0..n as u32)
        .map(|u| (profile.niceness(u), out.final_graph.degree(u)))
        .collect();
    by_niceness.sort_by(|a, b| b.0.total_cmp(&a.0));
    for (nice, degree) in by_niceness.iter().take(5) {
        println!("niceness {nice:>4}: {degree} friends");
    }
    let adjacent_enemies = profile
        .enemies()
        .filter(|p| out.final_graph.has_edge(p.lo(), p.hi()))
        .count();
    println!(
        "adjacent enemy pairs: {adjacent_enemies} (at start: {})",
        profile
            .enemies()
            .filter(|p| g0.has_edge(p.lo(), p.hi()))
            .count()
    );
    Ok(())
}
