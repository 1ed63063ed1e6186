//! Degree-ordered dynamics with a proper function and α = β.
//!
//! Under the complete scheduler the degree order of nodes never inverts and
//! the number of distinct degrees never grows. This runs round by round,
//! keeps every graph, and checks those properties plus the stabilization
//! bound.

use threshold_dynamics::engine::{check_degree_properties, RunConfig, Runner, StopMode};
use threshold_dynamics::graph::generators::gnp;
use threshold_dynamics::potentials::{proper_degree_potential, ProperFunction};
use threshold_dynamics::rng::sim_rng;
use threshold_dynamics::schedulers::CompleteScheduler;

fn main() -> threshold_dynamics::Result<()> {
    let g0 = gnp(60, 0.25, &mut sim_rng(2))?;
    for name in ["sum", "max", "product"] {
        let f = ProperFunction::named(name)?;
        let threshold = match name {
            "product" => 200.0,
            _ => 30.0,
        };
        let potential = proper_degree_potential(f, threshold, threshold)?;
        let config = RunConfig::new(g0.clone(), potential, Box::new(CompleteScheduler))
            .stop_mode(StopMode::Cycle)
            .max_rounds(200);
        let mut runner = Runner::new(config)?;
        let mut graphs = vec![runner.graph().clone()];
        while runner.advance()?.is_none() {
            graphs.push(runner.graph().clone());
        }
        graphs.push(runner.graph().clone());
        let report = check_degree_properties(&graphs);
        let out = runner.finish();
        println!(
            "{name:>8}: {:?}, classes {} -> {}, last change {} (bound {}), violations {}",
            out.trace.verdict,
            report.initial_classes,
            out.final_graph.degree_class_count(),
            report.last_change,
            report.initial_classes + 1,
            report.violations.len()
        );
    }
    Ok(())
}
