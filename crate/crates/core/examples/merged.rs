//! Two rounds folded into one potential.
//!
//! The merged potential looks ahead one half step, so each engine round is a
//! full automaton step and flip gadgets stay at integer parity. Graphs after
//! `t` merged rounds equal graphs after `2t` plain rounds.

use threshold_dynamics::engine::{run, RunConfig, StopMode};
use threshold_dynamics::potentials::{rule110_potential, two_step_merge_with, MergeMode};
use threshold_dynamics::rule110::{build_assembly, Tape, RULE110_BETA};
use threshold_dynamics::schedulers::CompleteScheduler;

fn main() -> threshold_dynamics::Result<()> {
    let tape: Tape = "0110".parse()?;
    let assembly = build_assembly(&tape);
    let base = rule110_potential(RULE110_BETA)?;
    let merged = two_step_merge_with(base.clone(), MergeMode::SharedHalfStep)?;

    let plain = run(
        RunConfig::new(assembly.graph.clone(), base, Box::new(CompleteScheduler))
            .stop_mode(StopMode::Budget)
            .max_rounds(6),
    )?;
    let folded = run(
        RunConfig::new(assembly.graph.clone(), merged, Box::new(CompleteScheduler))
            .stop_mode(StopMode::Budget)
            .max_rounds(3),
    )?;

    for (t, rec) in folded.trace.records.iter().enumerate() {
        let twin = &plain.trace.records[2 * t];
        println!(
            "step {t}: merged {}  plain {}  equal {}",
            rec.fingerprint,
            twin.fingerprint,
            rec.fingerprint == twin.fingerprint
        );
    }
    println!(
        "final graphs equal: {}",
        plain.final_graph == folded.final_graph
    );
    Ok(())
}
