//! The same potential under different schedulers.
//!
//! The complete scheduler finishes in few rounds; sparser schedulers need
//! more, but a fixed point of the potential is reached under each of them
//! here. Fairness periods are checked by brute force.

use threshold_dynamics::engine::{run, RunConfig};
use threshold_dynamics::graph::generators::gnp;
use threshold_dynamics::graph::Pair;
use threshold_dynamics::potentials::community_potential;
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::schedulers::{
    find_fairness_gap, CompleteScheduler, CurrentEdgesScheduler, RoundRobinScheduler, Scheduler,
    ScriptedScheduler, UniformRandomScheduler,
};

fn main() -> threshold_dynamics::Result<()> {
    let n = 30;
    let g0 = gnp(n, 0.2, &mut sim_rng(8))?;
    let potential = community_potential(2.0, 3.0)?;

    let singles: Vec<Vec<Pair>> = (0..n as u32)
        .flat_map(|u| (u + 1..n as u32).map(move |v| vec![Pair::new(u, v)]))
        .collect();
    let schedulers: Vec<Box<dyn Scheduler>> = vec![
        Box::new(CompleteScheduler),
        Box::new(RoundRobinScheduler::new(40)?),
        Box::new(ScriptedScheduler::new(singles, true)?.claim_fairness(n)?),
        Box::new(UniformRandomScheduler),
        Box::new(CurrentEdgesScheduler),
    ];
    for mut scheduler in schedulers {
        let mut rng = sim_rng(0);
        let gap = find_fairness_gap(scheduler.as_mut(), &g0, 500, &mut rng)?;
        let name = scheduler.name();
        let period = scheduler.fairness_period(n);
        let out = run(RunConfig::new(g0.clone(), potential.clone(), scheduler)
            .seed(3)
            .max_rounds(200_000))?;
        println!(
            "{name:<24} period {period:?} gap {gap:?}: {:?}, {} edges",
            out.trace.verdict,
            out.final_graph.edge_count()
        );
    }
    Ok(())
}
