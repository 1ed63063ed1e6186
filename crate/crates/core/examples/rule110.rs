//! Rule 110 simulated by a threshold dynamics on a gadget graph.
//!
//! Each tape cell becomes four 4862-node gadget groups joined by linking
//! gadgets; cell values are read off the `(h, l)` edge of each group. Two
//! engine rounds make one automaton step.

use threshold_dynamics::rule110::{simulate, Tape};

fn main() -> threshold_dynamics::Result<()> {
    let tape: Tape = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "00010".into())
        .parse()?;
    let steps = 4;
    let sim = simulate(&tape, steps, false)?;
    println!(
        "{} nodes on a ring of {} cells, {} edges",
        sim.assembly.graph.node_count(),
        sim.assembly.ring_cells(),
        sim.assembly.graph.edge_count()
    );
    for (t, (want, got)) in sim.reference.iter().zip(&sim.observed).enumerate() {
        let got = got
            .as_ref()
            .map_or("inconsistent".to_string(), |g| g.to_string());
        println!("step {t}: automaton {want}  graph {got}");
    }
    println!("structure failures: {}", sim.structure_failures.len());
    println!("faithful: {}", sim.faithful());
    Ok(())
}
