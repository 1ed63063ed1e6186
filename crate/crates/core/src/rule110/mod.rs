//! Rule 110 on a cyclic tape, and its simulation by threshold dynamics on a
//! gadget graph.
//!
//! Each tape cell becomes a cell gadget of four primitive cell gadgets
//! (`A1, A2, B1, B2`); a primitive gadget stores one bit as the presence of
//! the edge between its `h` and `l` nodes. Under the Rule-110 potential with
//! the complete scheduler, one automaton step takes two engine rounds: the
//! A gadgets compute the new value, then the B gadgets copy it.

mod assembly;
mod checks;
mod simulate;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub use assembly::{
    build_assembly, build_assembly_on_ring, default_ring_cells, AlwaysOnGadget, CellAssembly,
    FlipGadget, GadgetMap, NodeLabel, NodeRole, PcgRef, PcgRole, ALWAYS_ON_INTERNALS, AUX_PER_PCG,
    NODES_PER_CELL, NODES_PER_PCG,
};
pub use checks::{
    check_structure, extract_values, pcg_values, values_to_tape, CellValue, Parity,
    StructureReport, StructureViolation,
};
pub use simulate::{simulate, simulate_with, SimOptions, Simulation, RULE110_BETA};

/// A cyclic binary tape of width at least 3.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Tape {
    cells: Vec<bool>,
}

impl Tape {
    pub fn new(cells: Vec<bool>) -> Result<Self> {
        if cells.len() < 3 {
            return Err(Error::config(format!(
                "tape width must be at least 3, got {}",
                cells.len()
            )));
        }
        Ok(Tape { cells })
    }

    /// The `width` low bits of `bits`, cell 0 first.
    pub fn from_bits(bits: u64, width: usize) -> Result<Self> {
        Tape::new(
            (0..width)
                .map(|i| bits >> (width - 1 - i) & 1 == 1)
                .collect(),
        )
    }

    pub fn width(&self) -> usize {
        self.cells.len()
    }

    pub fn cells(&self) -> &[bool] {
        &self.cells
    }

    pub fn get(&self, i: usize) -> bool {
        self.cells[i % self.cells.len()]
    }

    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(|&c| !c)
    }
}

impl FromStr for Tape {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let cells = s
            .chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::config(format!(
                    "tape must be a bitstring, found {other:?}"
                ))),
            })
            .collect::<Result<_>>()?;
        Tape::new(cells)
    }
}

impl fmt::Display for Tape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &c in &self.cells {
            f.write_str(if c { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// New value of a cell from `(left, center, right)`: the bits of 110 =
/// 0b01101110 indexed by the pattern.
pub fn rule110(left: bool, center: bool, right: bool) -> bool {
    let pattern = (left as u8) << 2 | (center as u8) << 1 | right as u8;
    110u8 >> pattern & 1 == 1
}

/// One synchronous update of the whole cyclic tape.
pub fn reference_step(tape: &Tape) -> Tape {
    let w = tape.width();
    let cells = (0..w)
        .map(|i| rule110(tape.get(i + w - 1), tape.get(i), tape.get(i + 1)))
        .collect();
    Tape { cells }
}

/// `steps + 1` tapes starting with `tape`.
pub fn reference_run(tape: &Tape, steps: usize) -> Vec<Tape> {
    let mut out = vec![tape.clone()];
    for _ in 0..steps {
        out.push(reference_step(out.last().unwrap()));
    }
    out
}
