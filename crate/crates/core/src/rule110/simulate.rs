use super::assembly::{build_assembly_on_ring, default_ring_cells, CellAssembly};
use super::checks::{check_structure, extract_values, values_to_tape, Parity, StructureReport};
use super::{reference_run, Tape};
use crate::engine::{RunConfig, RunTrace, Runner, StopMode};
use crate::error::{Error, Result};
use crate::graph::DynGraph;
use crate::potentials::{rule110_potential, two_step_merge_with, MergeMode};
use crate::schedulers::CompleteScheduler;

/// Threshold used for the Rule-110 potential. Decisions do not depend on it.
pub const RULE110_BETA: f64 = 0.0;

#[derive(Debug, Clone)]
pub struct SimOptions {
    /// Run the two-step merged potential, one engine round per automaton step.
    pub merged: bool,
    pub prune: bool,
    /// Check gadget invariants after every round.
    pub check_structure: bool,
    /// Defaults to the smallest multiple of the tape width that is at least 4.
    pub ring_cells: Option<usize>,
    pub beta: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions {
            merged: false,
            prune: true,
            check_structure: true,
            ring_cells: None,
            beta: RULE110_BETA,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Simulation {
    pub assembly: CellAssembly,
    /// Reference tapes for steps `0..=steps`.
    pub reference: Vec<Tape>,
    /// Tape read from the graph at each step; `None` where copies disagree.
    pub observed: Vec<Option<Tape>>,
    /// Failed structure checks as `(round, report)`.
    pub structure_failures: Vec<(u64, StructureReport)>,
    pub trace: RunTrace,
    pub final_graph: DynGraph,
}

impl Simulation {
    /// First step whose observed tape differs from the reference.
    pub fn first_mismatch(&self) -> Option<usize> {
        self.reference
            .iter()
            .zip(&self.observed)
            .position(|(r, o)| o.as_ref() != Some(r))
    }

    pub fn faithful(&self) -> bool {
        self.first_mismatch().is_none() && self.structure_failures.is_empty()
    }
}

pub fn simulate(tape: &Tape, steps: usize, merged: bool) -> Result<Simulation> {
    simulate_with(
        tape,
        steps,
        &SimOptions {
            merged,
            ..SimOptions::default()
        },
    )
}

/// Runs `steps` automaton steps on the gadget graph under the complete
/// scheduler, comparing against the reference automaton.
pub fn simulate_with(tape: &Tape, steps: usize, opts: &SimOptions) -> Result<Simulation> {
    if steps == 0 {
        return Err(Error::config("steps must be at least 1"));
    }
    let ring = opts
        .ring_cells
        .unwrap_or_else(|| default_ring_cells(tape.width()));
    let assembly = build_assembly_on_ring(tape, ring)?;
    let base = rule110_potential(opts.beta)?;
    let (potential, per_step) = if opts.merged {
        (two_step_merge_with(base, MergeMode::SharedHalfStep)?, 1)
    } else {
        (base, 2)
    };
    let config = RunConfig::new(
        assembly.graph.clone(),
        potential,
        Box::new(CompleteScheduler),
    )
    .max_rounds(steps as u64 * per_step)
    .stop_mode(StopMode::Budget)
    .prune(opts.prune)
    .rounds_per_step(per_step)
    .metadata("kind", "rule110")
    .metadata("tape", tape)
    .metadata("ring_cells", ring)
    .metadata("merged", opts.merged)
    .metadata("steps", steps);
    let mut runner = Runner::new(config)?;

    let reference = reference_run(tape, steps);
    let mut observed = Vec::with_capacity(steps + 1);
    let mut structure_failures = Vec::new();
    let mut observe = |round: u64, g: &DynGraph| -> Result<()> {
        if opts.check_structure {
            let parity = if opts.merged {
                Parity::Integer
            } else {
                Parity::of_round(round)
            };
            let report = check_structure(&assembly, g, parity)?;
            if !report.passed() {
                structure_failures.push((round, report));
            }
        }
        if round.is_multiple_of(per_step) {
            observed.push(values_to_tape(&extract_values(&assembly, g)));
        }
        Ok(())
    };
    observe(0, runner.graph())?;
    loop {
        let done = runner.advance()?.is_some();
        observe(runner.round(), runner.graph())?;
        if done {
            break;
        }
    }
    let outcome = runner.finish();
    Ok(Simulation {
        assembly,
        reference,
        observed,
        structure_failures,
        trace: outcome.trace,
        final_graph: outcome.final_graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Verdict;

    #[test]
    fn one_step_matches_reference() {
        let sim = simulate(&"0100".parse().unwrap(), 1, false).unwrap();
        assert!(sim.faithful(), "{:?}", sim.structure_failures.first());
        assert_eq!(sim.observed[1].as_ref().unwrap().to_string(), "1100");
        assert_eq!(sim.trace.rounds, 2);
    }

    #[test]
    fn merged_step_matches_reference() {
        let sim = simulate(&"0100".parse().unwrap(), 1, true).unwrap();
        assert!(sim.faithful(), "{:?}", sim.structure_failures.first());
        assert_eq!(sim.trace.rounds, 1);
    }

    #[test]
    fn zero_tape_verdicts() {
        let zero: Tape = "0000".parse().unwrap();
        let merged = simulate(&zero, 2, true).unwrap();
        assert_eq!(merged.trace.verdict, Verdict::Stabilized { at: 0 });
        let plain = simulate(&zero, 2, false).unwrap();
        assert!(matches!(
            plain.trace.verdict,
            Verdict::Cycle { period: 2, .. }
        ));
    }
}
