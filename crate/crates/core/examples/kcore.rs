//! Min-degree dynamics compute the k-core.
//!
//! With ℰ(u, v) = min(deg u, deg v), α = k and a huge β, edges are only ever
//! removed, and the run settles on the k-core of the start graph. The result
//! is compared with classical peeling.

use threshold_dynamics::engine::{run, RunConfig};
use threshold_dynamics::graph::generators::gnp;
use threshold_dynamics::kcore::{peel, verify_kcore_run};
use threshold_dynamics::potentials::min_degree_potential;
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::schedulers::RoundRobinScheduler;

fn main() -> threshold_dynamics::Result<()> {
    let k = 5;
    let g0 = gnp(300, 0.03, &mut sim_rng(11))?;
    let potential = min_degree_potential(k as f64, 1e9)?;
    let out = run(RunConfig::new(
        g0.clone(),
        potential,
        Box::new(RoundRobinScheduler::new(500)?),
    )
    .seed(1))?;

    let core = peel(&g0, k);
    println!(
        "start: {} nodes, {} edges",
        g0.node_count(),
        g0.edge_count()
    );
    println!("{:?} after {} rounds", out.trace.verdict, out.trace.rounds);
    println!(
        "peeling: {}-core has {} nodes, {} edges",
        k,
        core.core.len(),
        core.core_edges(&g0).len()
    );
    println!("dynamics kept {} edges", out.final_graph.edge_count());
    println!("agreement: {}", verify_kcore_run(&out.final_graph, &g0, k));
    Ok(())
}
