//! The evolving simple undirected graph and its structural queries.
//!
//! Node ids are dense `u32` values `0..n`; the node set is fixed for the
//! lifetime of a graph and only edges change. Neighbor lists are kept sorted
//! so common-neighbor counting is a linear merge (or a galloping search when
//! the two degrees are very different).

mod ball;
pub mod generators;
pub mod io;
mod view;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ball::{induced_ball, Ball};
pub use view::LocalView;

pub type NodeId = u32;

/// An unordered pair of distinct nodes, stored with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pair {
    lo: NodeId,
    hi: NodeId,
}

impl Pair {
    /// Panics if `a == b`; use [`Pair::try_new`] for untrusted input.
    pub fn new(a: NodeId, b: NodeId) -> Self {
        assert_ne!(a, b, "self-pair ({a},{a}) is not a valid interaction");
        if a < b {
            Pair { lo: a, hi: b }
        } else {
            Pair { lo: b, hi: a }
        }
    }

    pub fn try_new(a: NodeId, b: NodeId) -> Result<Self> {
        if a == b {
            return Err(Error::input(format!("self-pair ({a},{a})")));
        }
        Ok(Pair::new(a, b))
    }

    pub fn lo(self) -> NodeId {
        self.lo
    }

    pub fn hi(self) -> NodeId {
        self.hi
    }

    pub fn contains(self, x: NodeId) -> bool {
        self.lo == x || self.hi == x
    }

    /// Position of this pair in the lexicographic enumeration of all pairs of
    /// an `n`-node graph.
    pub fn rank(self, n: usize) -> u64 {
        let (u, v, n) = (self.lo as u64, self.hi as u64, n as u64);
        u * (2 * n - u - 1) / 2 + (v - u - 1)
    }

    /// Inverse of [`Pair::rank`].
    pub fn unrank(mut index: u64, n: usize) -> Self {
        let n = n as u64;
        let mut u = 0u64;
        loop {
            let row = n - u - 1;
            if index < row {
                return Pair::new(u as NodeId, (u + 1 + index) as NodeId);
            }
            index -= row;
            u += 1;
        }
    }
}

impl fmt::Display for Pair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

/// Number of unordered pairs of an `n`-node graph.
pub fn pair_count(n: usize) -> u64 {
    let n = n as u64;
    n * n.saturating_sub(1) / 2
}

/// Fixed-width digest of a labeled edge set.
///
/// Each edge `(lo, hi)` is packed into `lo << 32 | hi` and passed through the
/// splitmix64 finalizer under two different seeds; the digest is the wrapping
/// sum of those per-edge values (one lane per seed), with the node count mixed
/// into the first lane. Because the sum is commutative it equals the fold over
/// the sorted edge list, and it can be maintained incrementally as edges are
/// toggled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fingerprint(pub [u64; 2]);

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:016x}{:016x}", self.0[0], self.0[1])
    }
}

impl std::str::FromStr for Fingerprint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 32 {
            return Err(Error::input(format!(
                "fingerprint must be 32 hex digits, got {s:?}"
            )));
        }
        let a = u64::from_str_radix(&s[..16], 16).map_err(Error::input)?;
        let b = u64::from_str_radix(&s[16..], 16).map_err(Error::input)?;
        Ok(Fingerprint([a, b]))
    }
}

const LANE_SEEDS: [u64; 2] = [0x243f_6a88_85a3_08d3, 0x1319_8a2e_0370_7344];

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn edge_hash(p: Pair) -> [u64; 2] {
    let key = ((p.lo as u64) << 32) | p.hi as u64;
    [
        splitmix64(key ^ LANE_SEEDS[0]),
        splitmix64(key ^ LANE_SEEDS[1]),
    ]
}

/// A round's worth of edge toggles.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeDelta {
    pub additions: Vec<Pair>,
    pub removals: Vec<Pair>,
}

impl EdgeDelta {
    pub fn is_empty(&self) -> bool {
        self.additions.is_empty() && self.removals.is_empty()
    }

    pub fn len(&self) -> usize {
        self.additions.len() + self.removals.len()
    }

    pub fn inverse(&self) -> EdgeDelta {
        EdgeDelta {
            additions: self.removals.clone(),
            removals: self.additions.clone(),
        }
    }

    /// Checks the delta against `g`: no duplicates, additions absent from
    /// `g`, removals present in `g` (which also makes the two lists disjoint).
    pub fn validate(&self, g: &DynGraph) -> Result<()> {
        let mut seen = std::collections::HashSet::with_capacity(self.len());
        for p in self.additions.iter().chain(&self.removals) {
            g.check_node(p.hi)?;
            if !seen.insert(*p) {
                return Err(Error::contract(format!("pair {p} listed twice in delta")));
            }
        }
        if let Some(p) = self.additions.iter().find(|p| g.has_edge(p.lo, p.hi)) {
            return Err(Error::contract(format!("addition {p} is already an edge")));
        }
        if let Some(p) = self.removals.iter().find(|p| !g.has_edge(p.lo, p.hi)) {
            return Err(Error::contract(format!("removal {p} is not an edge")));
        }
        Ok(())
    }
}

/// Mutable simple undirected graph on a fixed node set.
#[derive(Clone)]
pub struct DynGraph {
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
    digest: [u64; 2],
    degree_hist: Vec<u32>,
    distinct_degrees: usize,
}

impl fmt::Debug for DynGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DynGraph")
            .field("nodes", &self.node_count())
            .field("edges", &self.edge_count)
            .field("fingerprint", &self.fingerprint().to_string())
            .finish()
    }
}

impl PartialEq for DynGraph {
    fn eq(&self, other: &Self) -> bool {
        self.edge_count == other.edge_count && self.adj == other.adj
    }
}

impl Eq for DynGraph {}

impl DynGraph {
    /// The null graph on `n` nodes.
    pub fn new(n: usize) -> Self {
        assert!(
            n <= NodeId::MAX as usize,
            "node count {n} exceeds u32 id space"
        );
        let mut degree_hist = vec![0; n.max(1)];
        degree_hist[0] = n as u32;
        DynGraph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
            digest: [0, 0],
            degree_hist,
            distinct_degrees: usize::from(n > 0),
        }
    }

    /// Builds a graph from an edge list. Self-loops are rejected; repeated
    /// pairs are collapsed.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (NodeId, NodeId)>,
    {
        let mut adj: Vec<Vec<NodeId>> = vec![Vec::new(); n];
        for (a, b) in edges {
            if a as usize >= n || b as usize >= n {
                return Err(Error::input(format!(
                    "edge ({a},{b}) out of range for {n} nodes"
                )));
            }
            if a == b {
                return Err(Error::input(format!("self-loop on node {a}")));
            }
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        Ok(Self::from_adjacency(adj))
    }

    /// Sorts and deduplicates neighbor lists, then derives the bookkeeping.
    /// Callers guarantee symmetry and absence of self-loops.
    pub(crate) fn from_adjacency(mut adj: Vec<Vec<NodeId>>) -> Self {
        let n = adj.len();
        for list in adj.iter_mut() {
            list.sort_unstable();
            list.dedup();
        }
        let mut g = DynGraph::new(n);
        let mut total = 0usize;
        let mut digest = [0u64; 2];
        for (u, list) in adj.iter().enumerate() {
            total += list.len();
            for &v in list.iter().filter(|&&v| v as usize > u) {
                let h = edge_hash(Pair::new(u as NodeId, v));
                digest[0] = digest[0].wrapping_add(h[0]);
                digest[1] = digest[1].wrapping_add(h[1]);
            }
            g.bump_degree(0, list.len());
        }
        g.adj = adj;
        g.edge_count = total / 2;
        g.digest = digest;
        g
    }

    pub fn node_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.adj.len() as NodeId
    }

    pub fn check_node(&self, u: NodeId) -> Result<()> {
        if (u as usize) < self.adj.len() {
            Ok(())
        } else {
            Err(Error::input(format!(
                "node {u} out of range (graph has {} nodes)",
                self.adj.len()
            )))
        }
    }

    fn check_pair(&self, u: NodeId, v: NodeId) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if u == v {
            return Err(Error::input(format!(
                "pair ({u},{v}) must have distinct endpoints"
            )));
        }
        Ok(())
    }

    /// Sorted neighbor list of `u`.
    pub fn neighbors(&self, u: NodeId) -> &[NodeId] {
        &self.adj[u as usize]
    }

    pub fn degree(&self, u: NodeId) -> usize {
        self.adj[u as usize].len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        let (a, b) = (&self.adj[u as usize], &self.adj[v as usize]);
        if a.len() <= b.len() {
            a.binary_search(&v).is_ok()
        } else {
            b.binary_search(&u).is_ok()
        }
    }

    /// All edges as pairs, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Pair> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let u = u as NodeId;
            let start = list.partition_point(|&v| v < u);
            list[start..].iter().map(move |&v| Pair::new(u, v))
        })
    }

    /// `|N(u) ∩ N(v)|`.
    pub fn common_neighbors(&self, u: NodeId, v: NodeId) -> Result<usize> {
        self.check_pair(u, v)?;
        Ok(intersect_count(self.neighbors(u), self.neighbors(v)))
    }

    /// Number of edges with both endpoints in `N(u) ∩ N(v)`.
    pub fn edges_among_common_neighbors(&self, u: NodeId, v: NodeId) -> Result<usize> {
        self.check_pair(u, v)?;
        let common = self.common_neighbor_list(u, v);
        Ok(self.edges_within_sorted(&common))
    }

    pub(crate) fn common_neighbor_list(&self, u: NodeId, v: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        intersect_into(self.neighbors(u), self.neighbors(v), &mut out);
        out
    }

    /// Edges of the subgraph induced by a sorted node set.
    pub(crate) fn edges_within_sorted(&self, set: &[NodeId]) -> usize {
        let twice: usize = set
            .iter()
            .map(|&x| intersect_count(self.neighbors(x), set))
            .sum();
        twice / 2
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let n = self.adj.len() as u64;
        Fingerprint([self.digest[0] ^ splitmix64(n), self.digest[1]])
    }

    /// Number of distinct degrees, i.e. the degree-equivalence class count.
    pub fn degree_class_count(&self) -> usize {
        self.distinct_degrees
    }

    /// How many nodes currently have degree `d`.
    pub fn nodes_with_degree(&self, d: usize) -> usize {
        self.degree_hist.get(d).copied().unwrap_or(0) as usize
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    fn bump_degree(&mut self, old: usize, new: usize) {
        if old == new {
            return;
        }
        if self.degree_hist.len() <= new {
            self.degree_hist.resize(new + 1, 0);
        }
        self.degree_hist[old] -= 1;
        if self.degree_hist[old] == 0 {
            self.distinct_degrees -= 1;
        }
        if self.degree_hist[new] == 0 {
            self.distinct_degrees += 1;
        }
        self.degree_hist[new] += 1;
    }

    fn toggle_digest(&mut self, p: Pair, add: bool) {
        let h = edge_hash(p);
        for (lane, h) in self.digest.iter_mut().zip(h) {
            *lane = if add {
                lane.wrapping_add(h)
            } else {
                lane.wrapping_sub(h)
            };
        }
    }

    /// Inserts an edge; returns `false` if it was already present.
    pub fn add_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check_pair(u, v)?;
        let pos = match self.adj[u as usize].binary_search(&v) {
            Ok(_) => return Ok(false),
            Err(pos) => pos,
        };
        self.adj[u as usize].insert(pos, v);
        let pos = self.adj[v as usize].binary_search(&u).unwrap_err();
        self.adj[v as usize].insert(pos, u);
        let (du, dv) = (self.degree(u), self.degree(v));
        self.bump_degree(du - 1, du);
        self.bump_degree(dv - 1, dv);
        self.edge_count += 1;
        self.toggle_digest(Pair::new(u, v), true);
        Ok(true)
    }

    /// Deletes an edge; returns `false` if it was absent.
    pub fn remove_edge(&mut self, u: NodeId, v: NodeId) -> Result<bool> {
        self.check_pair(u, v)?;
        let pos = match self.adj[u as usize].binary_search(&v) {
            Ok(pos) => pos,
            Err(_) => return Ok(false),
        };
        self.adj[u as usize].remove(pos);
        let pos = self.adj[v as usize].binary_search(&u).unwrap();
        self.adj[v as usize].remove(pos);
        let (du, dv) = (self.degree(u), self.degree(v));
        self.bump_degree(du + 1, du);
        self.bump_degree(dv + 1, dv);
        self.edge_count -= 1;
        self.toggle_digest(Pair::new(u, v), false);
        Ok(true)
    }

    /// Applies a validated delta. A malformed delta is a contract error and
    /// leaves the graph untouched.
    pub fn apply_delta(&mut self, delta: &EdgeDelta) -> Result<()> {
        delta.validate(self)?;
        for p in &delta.removals {
            self.remove_edge(p.lo, p.hi)?;
        }
        for p in &delta.additions {
            self.add_edge(p.lo, p.hi)?;
        }
        Ok(())
    }

    /// The delta that turns `self` into `other` (same node count required).
    pub fn diff(&self, other: &DynGraph) -> Result<EdgeDelta> {
        if self.node_count() != other.node_count() {
            return Err(Error::input(format!(
                "cannot diff graphs with {} and {} nodes",
                self.node_count(),
                other.node_count()
            )));
        }
        let mut delta = EdgeDelta::default();
        for u in self.nodes() {
            let (a, b) = (self.neighbors(u), other.neighbors(u));
            let (mut i, mut j) = (0, 0);
            while i < a.len() || j < b.len() {
                let (x, y) = (a.get(i).copied(), b.get(j).copied());
                match (x, y) {
                    (Some(x), Some(y)) if x == y => {
                        i += 1;
                        j += 1;
                    }
                    (Some(x), y) if y.is_none_or(|y| x < y) => {
                        if x > u {
                            delta.removals.push(Pair::new(u, x));
                        }
                        i += 1;
                    }
                    (_, Some(y)) => {
                        if y > u {
                            delta.additions.push(Pair::new(u, y));
                        }
                        j += 1;
                    }
                    _ => unreachable!(),
                }
            }
        }
        Ok(delta)
    }

    /// Connected components as a per-node component index, plus the count.
    pub fn components(&self) -> (Vec<u32>, usize) {
        let n = self.node_count();
        let mut comp = vec![u32::MAX; n];
        let mut count = 0u32;
        let mut stack = Vec::new();
        for s in 0..n {
            if comp[s] != u32::MAX {
                continue;
            }
            comp[s] = count;
            stack.push(s as NodeId);
            while let Some(x) = stack.pop() {
                for &y in self.neighbors(x) {
                    if comp[y as usize] == u32::MAX {
                        comp[y as usize] = count;
                        stack.push(y);
                    }
                }
            }
            count += 1;
        }
        (comp, count as usize)
    }

    /// Breadth-first distances from a set of sources, truncated at `limit`.
    /// Returns `(node, distance)` pairs for every node reached, sources first.
    pub fn bfs_within(&self, sources: &[NodeId], limit: usize) -> Vec<(NodeId, usize)> {
        let mut seen = std::collections::HashSet::new();
        let mut out = Vec::new();
        for &s in sources {
            if seen.insert(s) {
                out.push((s, 0));
            }
        }
        let mut head = 0;
        while head < out.len() {
            let (x, d) = out[head];
            head += 1;
            if d == limit {
                continue;
            }
            for &y in self.neighbors(x) {
                if seen.insert(y) {
                    out.push((y, d + 1));
                }
            }
        }
        out
    }
}

/// Size of the intersection of two sorted slices.
pub(crate) fn intersect_count(a: &[NodeId], b: &[NodeId]) -> usize {
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    if small.is_empty() {
        return 0;
    }
    if large.len() / small.len() >= 16 {
        let mut rest = large;
        let mut count = 0;
        for &x in small {
            match rest.binary_search(&x) {
                Ok(i) => {
                    count += 1;
                    rest = &rest[i + 1..];
                }
                Err(i) => rest = &rest[i..],
            }
            if rest.is_empty() {
                break;
            }
        }
        return count;
    }
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < small.len() && j < large.len() {
        match small[i].cmp(&large[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

pub(crate) fn intersect_into(a: &[NodeId], b: &[NodeId], out: &mut Vec<NodeId>) {
    out.clear();
    let (small, large) = if a.len() <= b.len() { (a, b) } else { (b, a) };
    let mut rest = large;
    for &x in small {
        match rest.binary_search(&x) {
            Ok(i) => {
                out.push(x);
                rest = &rest[i + 1..];
            }
            Err(i) => rest = &rest[i..],
        }
        if rest.is_empty() {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> DynGraph {
        let mut edges = Vec::new();
        for u in 0..n as NodeId {
            for v in u + 1..n as NodeId {
                edges.push((u, v));
            }
        }
        DynGraph::from_edges(n, edges).unwrap()
    }

    #[test]
    fn common_neighbors_small_cases() {
        let k3 = complete(3);
        assert_eq!(k3.common_neighbors(0, 1).unwrap(), 1);
        assert_eq!(k3.common_neighbors(2, 0).unwrap(), 1);
        let null = DynGraph::new(2);
        assert_eq!(null.common_neighbors(0, 1).unwrap(), 0);
        assert!(matches!(null.common_neighbors(0, 5), Err(Error::Input(_))));
        assert!(null.common_neighbors(1, 1).is_err());
    }

    #[test]
    fn edges_among_common_neighbors_small_cases() {
        let k4 = complete(4);
        assert_eq!(k4.edges_among_common_neighbors(0, 1).unwrap(), 1);
        let star = DynGraph::from_edges(5, (1..5).map(|l| (0, l))).unwrap();
        assert_eq!(star.edges_among_common_neighbors(1, 2).unwrap(), 0);
        assert_eq!(star.common_neighbors(1, 2).unwrap(), 1);
    }

    #[test]
    fn apply_delta_cases() {
        let mut g = DynGraph::new(2);
        let before = g.fingerprint();
        g.apply_delta(&EdgeDelta::default()).unwrap();
        assert_eq!(g.fingerprint(), before);
        g.apply_delta(&EdgeDelta {
            additions: vec![Pair::new(0, 1)],
            removals: vec![],
        })
        .unwrap();
        assert_eq!((g.degree(0), g.degree(1), g.edge_count()), (1, 1, 1));

        let mut k3 = complete(3);
        let all: Vec<Pair> = k3.edges().collect();
        k3.apply_delta(&EdgeDelta {
            additions: vec![],
            removals: all,
        })
        .unwrap();
        assert_eq!(k3.edge_count(), 0);
        assert_eq!(k3, DynGraph::new(3));
    }

    #[test]
    fn malformed_delta_is_contract_error() {
        let mut g = complete(3);
        let dup = EdgeDelta {
            additions: vec![Pair::new(0, 1)],
            removals: vec![],
        };
        assert!(matches!(g.apply_delta(&dup), Err(Error::Contract(_))));
        let missing = EdgeDelta {
            additions: vec![],
            removals: vec![Pair::new(0, 1), Pair::new(0, 1)],
        };
        assert!(matches!(g.apply_delta(&missing), Err(Error::Contract(_))));
        assert_eq!(g, complete(3));
    }

    #[test]
    fn fingerprint_distinguishes_and_restores() {
        let k3 = complete(3);
        let p3 = DynGraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(k3.fingerprint(), complete(3).fingerprint());
        assert_ne!(k3.fingerprint(), p3.fingerprint());
        assert_ne!(k3, p3);

        let mut g = p3.clone();
        g.add_edge(0, 2).unwrap();
        g.remove_edge(0, 2).unwrap();
        assert_eq!(g.fingerprint(), p3.fingerprint());
        // Same edges, different node count.
        assert_ne!(
            DynGraph::new(3).fingerprint(),
            DynGraph::new(4).fingerprint()
        );
    }

    #[test]
    fn fingerprint_round_trips_through_text() {
        let fp = complete(5).fingerprint();
        let parsed: Fingerprint = fp.to_string().parse().unwrap();
        assert_eq!(parsed, fp);
    }

    #[test]
    fn degree_classes_tracked_incrementally() {
        let mut g = DynGraph::new(4);
        assert_eq!(g.degree_class_count(), 1);
        g.add_edge(0, 1).unwrap();
        assert_eq!(g.degree_class_count(), 2);
        g.add_edge(2, 3).unwrap();
        assert_eq!(g.degree_class_count(), 1);
        g.add_edge(1, 2).unwrap();
        assert_eq!(g.degree_class_count(), 2);
        assert_eq!(g.nodes_with_degree(2), 2);
    }

    #[test]
    fn pair_rank_round_trip() {
        let n = 7;
        let mut k = 0;
        for u in 0..n as NodeId {
            for v in u + 1..n as NodeId {
                let p = Pair::new(u, v);
                assert_eq!(p.rank(n), k);
                assert_eq!(Pair::unrank(k, n), p);
                k += 1;
            }
        }
        assert_eq!(k, pair_count(n));
    }

    #[test]
    fn diff_matches_toggles() {
        let a = DynGraph::from_edges(4, [(0, 1), (1, 2)]).unwrap();
        let b = DynGraph::from_edges(4, [(1, 2), (2, 3), (0, 3)]).unwrap();
        let d = a.diff(&b).unwrap();
        assert_eq!(d.removals, vec![Pair::new(0, 1)]);
        assert_eq!(d.additions, vec![Pair::new(0, 3), Pair::new(2, 3)]);
        let mut c = a.clone();
        c.apply_delta(&d).unwrap();
        assert_eq!(c, b);
    }
}
