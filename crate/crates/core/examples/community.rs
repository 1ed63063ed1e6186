//! Triadic closure: pairs with many common neighbors become linked, pairs
//! with few lose their edge. Dense clusters close up, bridges dissolve.

use std::path::Path;

use threshold_dynamics::engine::{run, RunConfig};
use threshold_dynamics::graph::io::read_edge_list_file;
use threshold_dynamics::potentials::community_potential;
use threshold_dynamics::schedulers::CompleteScheduler;

fn main() -> threshold_dynamics::Result<()> {
    let g0 = read_edge_list_file(&Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sample.edges"))?;
    let out = run(RunConfig::new(
        g0.clone(),
        community_potential(1.0, 2.0)?,
        Box::new(CompleteScheduler),
    ))?;
    println!("{:?}", out.trace.verdict);
    println!(
        "edges {} -> {}",
        g0.edge_count(),
        out.final_graph.edge_count()
    );
    println!(
        "components {} -> {}",
        g0.components().1,
        out.final_graph.components().1
    );
    Ok(())
}
