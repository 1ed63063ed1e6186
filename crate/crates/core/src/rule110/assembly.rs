use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use super::Tape;
use crate::error::{Error, Result};
use crate::graph::{DynGraph, NodeId, Pair};

/// Aux nodes `a1..a60` of a primitive cell gadget.
pub const AUX_PER_PCG: usize = 60;
/// Internal nodes of one always-on gadget (a 22-clique with its two ends).
pub const ALWAYS_ON_INTERNALS: usize = 20;
const FLIP_INTERNALS: usize = 2 * ALWAYS_ON_INTERNALS;
const CORE_PER_PCG: usize = 2 + AUX_PER_PCG;
const FLIPS_PER_PCG: usize = 2 * AUX_PER_PCG;
/// `h`, `l`, the aux nodes and the internals of the 120 flip gadgets.
pub const NODES_PER_PCG: usize = CORE_PER_PCG + FLIPS_PER_PCG * FLIP_INTERNALS;
const LINKS_PER_CELL: usize = 8;
const GADGETS_PER_LINK: usize = 4;
/// Four primitive gadgets plus the internals of the cell's outgoing links.
pub const NODES_PER_CELL: usize =
    4 * NODES_PER_PCG + LINKS_PER_CELL * GADGETS_PER_LINK * ALWAYS_ON_INTERNALS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PcgRole {
    A1,
    A2,
    B1,
    B2,
}

impl PcgRole {
    pub const ALL: [PcgRole; 4] = [PcgRole::A1, PcgRole::A2, PcgRole::B1, PcgRole::B2];

    pub fn index(self) -> usize {
        self as usize
    }

    /// A gadgets compute on integer steps; B gadgets copy on half steps.
    pub fn is_a(self) -> bool {
        matches!(self, PcgRole::A1 | PcgRole::A2)
    }

    /// `j` in `A_j` / `B_j`, zero-based.
    pub fn lane(self) -> usize {
        self.index() % 2
    }

    fn a(lane: usize) -> Self {
        PcgRole::ALL[lane]
    }

    fn b(lane: usize) -> Self {
        PcgRole::ALL[2 + lane]
    }
}

impl fmt::Display for PcgRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(["A1", "A2", "B1", "B2"][self.index()])
    }
}

/// One primitive cell gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PcgRef {
    pub cell: usize,
    pub role: PcgRole,
}

impl fmt::Display for PcgRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}.{}", self.cell, self.role)
    }
}

/// Two 22-cliques sharing `x` and `y`; the `x`-`y` edge toggles every round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FlipGadget {
    pub pcg: PcgRef,
    /// `k` of the aux node, 1-based.
    pub aux: usize,
    /// Attached to `l` rather than `h`.
    pub from_l: bool,
    pub x: NodeId,
    pub y: NodeId,
    pub first_internal: NodeId,
}

impl FlipGadget {
    pub fn internals(&self) -> impl Iterator<Item = NodeId> {
        self.first_internal..self.first_internal + FLIP_INTERNALS as NodeId
    }

    pub fn special(&self) -> Pair {
        Pair::new(self.x, self.y)
    }
}

impl fmt::Display for FlipGadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = if self.from_l { "l" } else { "h" };
        write!(f, "flip {}[{end},a{}]", self.pcg, self.aux)
    }
}

/// A 22-clique whose `x`-`y` edge never changes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlwaysOnGadget {
    pub link: (PcgRef, PcgRef),
    /// `true` means the `l` node on that side.
    pub ends: (bool, bool),
    pub x: NodeId,
    pub y: NodeId,
    pub first_internal: NodeId,
}

impl AlwaysOnGadget {
    pub fn internals(&self) -> impl Iterator<Item = NodeId> {
        self.first_internal..self.first_internal + ALWAYS_ON_INTERNALS as NodeId
    }

    pub fn special(&self) -> Pair {
        Pair::new(self.x, self.y)
    }
}

impl fmt::Display for AlwaysOnGadget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |l: bool| if l { "l" } else { "h" };
        write!(
            f,
            "link {}.{}-{}.{}",
            self.link.0,
            side(self.ends.0),
            self.link.1,
            side(self.ends.1)
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeRole {
    H,
    L,
    /// 1-based aux index.
    Aux(usize),
    /// Index into [`GadgetMap::flips`].
    FlipInternal(usize),
    /// Index into [`GadgetMap::always_on`].
    AlwaysOnInternal(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeLabel {
    pub node: NodeId,
    pub role: NodeRole,
    /// Owning primitive gadget, for core nodes and flip internals.
    pub pcg: Option<PcgRef>,
}

/// Node ids of an assembly and the gadgets between them.
///
/// Ids are assigned in blocks: core nodes (`h`, `l`, `a1..a60`) cell by cell
/// in `A1, A2, B1, B2` order, then flip internals in the same gadget order,
/// then always-on internals link by link.
#[derive(Debug, Clone)]
pub struct GadgetMap {
    ring_cells: usize,
    flips: Vec<FlipGadget>,
    always_on: Vec<AlwaysOnGadget>,
    special: HashMap<Pair, Special>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Special {
    Value(PcgRef),
    Flip(usize),
    AlwaysOn(usize),
}

impl GadgetMap {
    fn new(ring_cells: usize) -> Self {
        let mut map = GadgetMap {
            ring_cells,
            flips: Vec::with_capacity(ring_cells * 4 * FLIPS_PER_PCG),
            always_on: Vec::with_capacity(ring_cells * LINKS_PER_CELL * GADGETS_PER_LINK),
            special: HashMap::new(),
        };
        let flip_base = (ring_cells * 4 * CORE_PER_PCG) as NodeId;
        for cell in 0..ring_cells {
            for role in PcgRole::ALL {
                let pcg = PcgRef { cell, role };
                map.special
                    .insert(Pair::new(map.h(pcg), map.l(pcg)), Special::Value(pcg));
                for aux in 1..=AUX_PER_PCG {
                    for from_l in [false, true] {
                        let index = map.flips.len();
                        let gadget = FlipGadget {
                            pcg,
                            aux,
                            from_l,
                            x: if from_l { map.l(pcg) } else { map.h(pcg) },
                            y: map.aux(pcg, aux),
                            first_internal: flip_base + (index * FLIP_INTERNALS) as NodeId,
                        };
                        map.special.insert(gadget.special(), Special::Flip(index));
                        map.flips.push(gadget);
                    }
                }
            }
        }
        let ao_base = flip_base + (map.flips.len() * FLIP_INTERNALS) as NodeId;
        for cell in 0..ring_cells {
            for link in map.links_of(cell) {
                for ends in [(false, false), (false, true), (true, false), (true, true)] {
                    let index = map.always_on.len();
                    let end = |p: PcgRef, l: bool| if l { map.l(p) } else { map.h(p) };
                    let gadget = AlwaysOnGadget {
                        link,
                        ends,
                        x: end(link.0, ends.0),
                        y: end(link.1, ends.1),
                        first_internal: ao_base + (index * ALWAYS_ON_INTERNALS) as NodeId,
                    };
                    map.special
                        .insert(gadget.special(), Special::AlwaysOn(index));
                    map.always_on.push(gadget);
                }
            }
        }
        map
    }

    /// Links owned by `cell`: the four `A_j(i)-B_k(i)`, then `A_j(i)-A_j(i+1)`,
    /// then `A_j(i)-B_j(i+1)`.
    fn links_of(&self, cell: usize) -> Vec<(PcgRef, PcgRef)> {
        let next = (cell + 1) % self.ring_cells;
        let at = |cell, role| PcgRef { cell, role };
        let mut out = Vec::with_capacity(LINKS_PER_CELL);
        for j in 0..2 {
            for k in 0..2 {
                out.push((at(cell, PcgRole::a(j)), at(cell, PcgRole::b(k))));
            }
        }
        for j in 0..2 {
            out.push((at(cell, PcgRole::a(j)), at(next, PcgRole::a(j))));
        }
        for j in 0..2 {
            out.push((at(cell, PcgRole::a(j)), at(next, PcgRole::b(j))));
        }
        out
    }

    pub fn ring_cells(&self) -> usize {
        self.ring_cells
    }

    pub fn node_count(&self) -> usize {
        self.ring_cells * NODES_PER_CELL
    }

    pub fn pcgs(&self) -> impl Iterator<Item = PcgRef> + '_ {
        (0..self.ring_cells).flat_map(|cell| PcgRole::ALL.map(|role| PcgRef { cell, role }))
    }

    fn core_base(pcg: PcgRef) -> NodeId {
        ((pcg.cell * 4 + pcg.role.index()) * CORE_PER_PCG) as NodeId
    }

    pub fn h(&self, pcg: PcgRef) -> NodeId {
        Self::core_base(pcg)
    }

    pub fn l(&self, pcg: PcgRef) -> NodeId {
        Self::core_base(pcg) + 1
    }

    /// Aux node `a_k`, `k` in `1..=60`.
    pub fn aux(&self, pcg: PcgRef, k: usize) -> NodeId {
        assert!((1..=AUX_PER_PCG).contains(&k), "aux index {k} out of range");
        Self::core_base(pcg) + 1 + k as NodeId
    }

    pub fn value_pair(&self, pcg: PcgRef) -> Pair {
        Pair::new(self.h(pcg), self.l(pcg))
    }

    pub fn flips(&self) -> &[FlipGadget] {
        &self.flips
    }

    pub fn always_on(&self) -> &[AlwaysOnGadget] {
        &self.always_on
    }

    /// The PCGs linked to `pcg` by always-on gadgets.
    pub fn linked(&self, pcg: PcgRef) -> Vec<PcgRef> {
        let w = self.ring_cells;
        let at = |cell: usize, role| PcgRef {
            cell: cell % w,
            role,
        };
        let (i, j) = (pcg.cell, pcg.role.lane());
        if pcg.role.is_a() {
            vec![
                at(i, PcgRole::B1),
                at(i, PcgRole::B2),
                at(i + w - 1, PcgRole::a(j)),
                at(i + 1, PcgRole::a(j)),
                at(i + 1, PcgRole::b(j)),
            ]
        } else {
            vec![
                at(i, PcgRole::A1),
                at(i, PcgRole::A2),
                at(i + w - 1, PcgRole::a(j)),
            ]
        }
    }

    pub(crate) fn special(&self, pair: Pair) -> Option<Special> {
        self.special.get(&pair).copied()
    }

    pub fn label(&self, node: NodeId) -> NodeLabel {
        let id = node as usize;
        assert!(id < self.node_count(), "node {node} outside the assembly");
        let core_total = self.ring_cells * 4 * CORE_PER_PCG;
        let flip_total = self.flips.len() * FLIP_INTERNALS;
        if id < core_total {
            let slot = id / CORE_PER_PCG;
            let pcg = PcgRef {
                cell: slot / 4,
                role: PcgRole::ALL[slot % 4],
            };
            let role = match id % CORE_PER_PCG {
                0 => NodeRole::H,
                1 => NodeRole::L,
                k => NodeRole::Aux(k - 1),
            };
            NodeLabel {
                node,
                role,
                pcg: Some(pcg),
            }
        } else if id < core_total + flip_total {
            let index = (id - core_total) / FLIP_INTERNALS;
            NodeLabel {
                node,
                role: NodeRole::FlipInternal(index),
                pcg: Some(self.flips[index].pcg),
            }
        } else {
            let index = (id - core_total - flip_total) / ALWAYS_ON_INTERNALS;
            NodeLabel {
                node,
                role: NodeRole::AlwaysOnInternal(index),
                pcg: None,
            }
        }
    }

    /// Human-readable name of a node, e.g. `c0.A1.h` or `flip c2.B1[l,a7]#3`.
    pub fn label_text(&self, node: NodeId) -> String {
        let label = self.label(node);
        match (label.role, label.pcg) {
            (NodeRole::H, Some(p)) => format!("{p}.h"),
            (NodeRole::L, Some(p)) => format!("{p}.l"),
            (NodeRole::Aux(k), Some(p)) => format!("{p}.a{k}"),
            (NodeRole::FlipInternal(i), _) => {
                let g = &self.flips[i];
                format!("{g}#{}", node - g.first_internal)
            }
            (NodeRole::AlwaysOnInternal(i), _) => {
                let g = &self.always_on[i];
                format!("{g}#{}", node - g.first_internal)
            }
            _ => unreachable!("core nodes always carry a gadget"),
        }
    }

    /// Names the structure an edge belongs to, for diagnostics.
    pub fn describe_pair(&self, pair: Pair) -> String {
        match self.special(pair) {
            Some(Special::Value(p)) => format!("value edge of {p}"),
            Some(Special::Flip(i)) => format!("{}", self.flips[i]),
            Some(Special::AlwaysOn(i)) => format!("{}", self.always_on[i]),
            None => format!(
                "{}-{}",
                self.label_text(pair.lo()),
                self.label_text(pair.hi())
            ),
        }
    }

    /// Writes `id label` lines for every node.
    pub fn write_labels<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# node labels")?;
        for node in 0..self.node_count() as NodeId {
            writeln!(w, "{node} {}", self.label_text(node))?;
        }
        Ok(())
    }
}

/// The gadget graph for a tape, with `A` and `B` gadgets both holding the
/// tape value and the `A` flip edges present.
#[derive(Debug, Clone)]
pub struct CellAssembly {
    pub tape: Tape,
    pub map: GadgetMap,
    pub graph: DynGraph,
}

impl CellAssembly {
    pub fn ring_cells(&self) -> usize {
        self.map.ring_cells()
    }

    /// Tape cell represented by ring cell `cell`.
    pub fn tape_cell(&self, cell: usize) -> usize {
        cell % self.tape.width()
    }
}

/// Smallest multiple of `width` that is at least 4.
///
/// On a ring of three cells, `A_j(i-1)` and `A_j(i+1)` are themselves linked,
/// which adds four edges among the common neighbors of every `A` gadget and
/// breaks the update rule; repeating the tape avoids that.
pub fn default_ring_cells(width: usize) -> usize {
    width * 4usize.div_ceil(width)
}

pub fn build_assembly(tape: &Tape) -> CellAssembly {
    build_assembly_on_ring(tape, default_ring_cells(tape.width())).expect("default ring is valid")
}

/// Builds the assembly on a ring of `ring_cells` cells; the tape repeats
/// around the ring.
pub fn build_assembly_on_ring(tape: &Tape, ring_cells: usize) -> Result<CellAssembly> {
    if ring_cells < 3 || !ring_cells.is_multiple_of(tape.width()) {
        return Err(Error::config(format!(
            "ring of {ring_cells} cells cannot hold a tape of width {}",
            tape.width()
        )));
    }
    let map = GadgetMap::new(ring_cells);
    let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); map.node_count()];
    let mut link = |a: NodeId, b: NodeId| {
        adj[a as usize].push(b);
        adj[b as usize].push(a);
    };
    fn clique(nodes: &[NodeId], link: &mut dyn FnMut(NodeId, NodeId)) {
        for (i, &a) in nodes.iter().enumerate() {
            for &b in &nodes[i + 1..] {
                link(a, b);
            }
        }
    }
    let mut members = Vec::with_capacity(ALWAYS_ON_INTERNALS + 1);
    for g in map.flips() {
        let internals: Vec<NodeId> = g.internals().collect();
        for half in internals.chunks(ALWAYS_ON_INTERNALS) {
            // Each half is a 22-clique minus the special edge.
            members.clear();
            members.extend_from_slice(half);
            clique(&members, &mut link);
            for &z in half {
                link(g.x, z);
                link(g.y, z);
            }
        }
        if g.pcg.role.is_a() {
            link(g.x, g.y);
        }
    }
    for g in map.always_on() {
        members.clear();
        members.push(g.x);
        members.push(g.y);
        members.extend(g.internals());
        clique(&members, &mut link);
    }
    for pcg in map.pcgs().collect::<Vec<_>>() {
        if tape.get(pcg.cell) {
            link(map.h(pcg), map.l(pcg));
        }
    }
    Ok(CellAssembly {
        tape: tape.clone(),
        graph: DynGraph::from_adjacency(adj),
        map,
    })
}
