use std::fmt;

use super::assembly::{CellAssembly, PcgRef, PcgRole, Special};
use super::Tape;
use crate::error::{Error, Result};
use crate::graph::DynGraph;

/// Whether a graph is at an integer step (`A` flip edges present) or a half
/// step (`B` flip edges present).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Integer,
    Half,
}

impl Parity {
    /// Parity of `G(round)` in an unmerged run.
    pub fn of_round(round: u64) -> Self {
        if round.is_multiple_of(2) {
            Parity::Integer
        } else {
            Parity::Half
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellValue {
    Zero,
    One,
    /// The copies of this cell disagree.
    Inconsistent,
}

/// Value bit of each primitive gadget.
pub fn pcg_values(a: &CellAssembly, g: &DynGraph) -> Vec<(PcgRef, bool)> {
    a.map
        .pcgs()
        .map(|p| (p, g.has_edge(a.map.h(p), a.map.l(p))))
        .collect()
}

/// Reads the tape from the `A` gadgets. Every ring copy of a cell and both
/// `A1` and `A2` must agree.
pub fn extract_values(a: &CellAssembly, g: &DynGraph) -> Vec<CellValue> {
    let w = a.tape.width();
    let mut seen: Vec<Option<bool>> = vec![None; w];
    let mut bad = vec![false; w];
    for (p, value) in pcg_values(a, g) {
        if !p.role.is_a() {
            continue;
        }
        let cell = a.tape_cell(p.cell);
        match seen[cell] {
            None => seen[cell] = Some(value),
            Some(v) if v != value => bad[cell] = true,
            Some(_) => {}
        }
    }
    (0..w)
        .map(|i| match (bad[i], seen[i]) {
            (true, _) => CellValue::Inconsistent,
            (false, Some(true)) => CellValue::One,
            _ => CellValue::Zero,
        })
        .collect()
}

/// The tape, if every cell is consistent.
pub fn values_to_tape(values: &[CellValue]) -> Option<Tape> {
    let cells = values
        .iter()
        .map(|v| match v {
            CellValue::Zero => Some(false),
            CellValue::One => Some(true),
            CellValue::Inconsistent => None,
        })
        .collect::<Option<Vec<_>>>()?;
    Tape::new(cells).ok()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureViolation {
    pub check: &'static str,
    pub location: String,
    pub detail: String,
}

impl fmt::Display for StructureViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.check, self.location, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureReport {
    pub parity: Parity,
    pub violations: Vec<StructureViolation>,
}

impl StructureReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "structure ok ({:?} step)", self.parity);
        }
        write!(
            f,
            "{} structure violations ({:?} step)",
            self.violations.len(),
            self.parity
        )?;
        for v in self.violations.iter().take(10) {
            write!(f, "\n  {v}")?;
        }
        if self.violations.len() > 10 {
            write!(f, "\n  ...")?;
        }
        Ok(())
    }
}

const FLIP_RANGE: (usize, usize) = (40, 41);
const ALWAYS_ON_RANGE: (usize, usize) = (20, 24);

fn expected_cn(role: PcgRole, parity: Parity) -> usize {
    match (role.is_a(), parity) {
        (true, Parity::Integer) => 70,
        (true, Parity::Half) => 10,
        (false, Parity::Integer) => 6,
        (false, Parity::Half) => 66,
    }
}

/// Checks `g` against the gadget invariants at the given parity:
/// flip edges in phase, no change outside value and flip edges, the
/// common-neighbor counts of every value pair, the edge count among them,
/// and the common-neighbor ranges of every gadget's special pair.
pub fn check_structure(a: &CellAssembly, g: &DynGraph, parity: Parity) -> Result<StructureReport> {
    if g.node_count() != a.graph.node_count() {
        return Err(Error::input(format!(
            "graph has {} nodes, assembly has {}",
            g.node_count(),
            a.graph.node_count()
        )));
    }
    let map = &a.map;
    let mut violations = Vec::new();
    let mut flag = |check, location: String, detail: String| {
        violations.push(StructureViolation {
            check,
            location,
            detail,
        });
    };

    let diff = a.graph.diff(g)?;
    for (&pair, added) in diff
        .additions
        .iter()
        .map(|p| (p, true))
        .chain(diff.removals.iter().map(|p| (p, false)))
    {
        match map.special(pair) {
            Some(Special::Value(_)) | Some(Special::Flip(_)) => {}
            _ => flag(
                "stray-edge",
                map.describe_pair(pair),
                format!(
                    "edge {} since construction",
                    if added { "added" } else { "removed" }
                ),
            ),
        }
    }

    for gadget in map.flips() {
        let want = gadget.pcg.role.is_a() == (parity == Parity::Integer);
        let have = g.has_edge(gadget.x, gadget.y);
        if want != have {
            flag(
                "flip-phase",
                gadget.to_string(),
                format!(
                    "special edge {}, expected {}",
                    presence(have),
                    presence(want)
                ),
            );
        }
        let cn = g.common_neighbors(gadget.x, gadget.y)?;
        if !(FLIP_RANGE.0..=FLIP_RANGE.1).contains(&cn) {
            flag(
                "flip-range",
                gadget.to_string(),
                format!("{cn} common neighbors"),
            );
        }
    }
    for gadget in map.always_on() {
        let cn = g.common_neighbors(gadget.x, gadget.y)?;
        if !(ALWAYS_ON_RANGE.0..=ALWAYS_ON_RANGE.1).contains(&cn) {
            flag(
                "always-on-range",
                gadget.to_string(),
                format!("{cn} common neighbors"),
            );
        }
    }

    let value = |p: PcgRef| usize::from(g.has_edge(map.h(p), map.l(p)));
    for p in map.pcgs() {
        let (h, l) = (map.h(p), map.l(p));
        let cn = g.common_neighbors(h, l)?;
        let want_cn = expected_cn(p.role, parity);
        if cn != want_cn {
            flag(
                "cn",
                p.to_string(),
                format!("{cn} common neighbors, expected {want_cn}"),
            );
        }
        let base = if p.role.is_a() { 8 } else { 4 };
        let want_ce = base + map.linked(p).into_iter().map(value).sum::<usize>();
        let ce = g.edges_among_common_neighbors(h, l)?;
        if ce != want_ce {
            flag(
                "ce",
                p.to_string(),
                format!("{ce} edges among common neighbors, expected {want_ce}"),
            );
        }
    }
    Ok(StructureReport { parity, violations })
}

fn presence(b: bool) -> &'static str {
    if b {
        "present"
    } else {
        "absent"
    }
}
