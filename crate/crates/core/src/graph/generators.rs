//! Standard graph families.

use rand::Rng;

use super::{DynGraph, NodeId};
use crate::error::{Error, Result};
use crate::rng::SimRng;

/// Erdős–Rényi G(n, p).
pub fn gnp(n: usize, p: f64, rng: &mut SimRng) -> Result<DynGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::config(format!(
            "edge probability {p} is outside [0,1]"
        )));
    }
    let mut edges = Vec::new();
    for u in 0..n as NodeId {
        for v in u + 1..n as NodeId {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DynGraph::from_edges(n, edges)
}

/// G(n, p) conditioned on connectivity: a uniform random spanning tree
/// (random-attachment) overlaid with independent extra edges.
pub fn connected_gnp(n: usize, p: f64, rng: &mut SimRng) -> Result<DynGraph> {
    let mut g = gnp(n, p, rng)?;
    for v in 1..n as NodeId {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v)?;
    }
    Ok(g)
}

pub fn path(n: usize) -> DynGraph {
    let edges = (1..n as NodeId).map(|v| (v - 1, v));
    DynGraph::from_edges(n, edges).expect("path edges are valid")
}

pub fn cycle(n: usize) -> Result<DynGraph> {
    if n < 3 {
        return Err(Error::config(format!(
            "a cycle needs at least 3 nodes, got {n}"
        )));
    }
    let edges = (0..n as NodeId).map(|v| (v, (v + 1) % n as NodeId));
    DynGraph::from_edges(n, edges)
}

/// Star with center 0 and `n - 1` leaves.
pub fn star(n: usize) -> DynGraph {
    DynGraph::from_edges(n, (1..n as NodeId).map(|v| (0, v))).expect("star edges are valid")
}

pub fn complete(n: usize) -> DynGraph {
    let mut adj = vec![Vec::new(); n];
    for (u, list) in adj.iter_mut().enumerate() {
        list.extend((0..n as NodeId).filter(|&v| v as usize != u));
    }
    DynGraph::from_adjacency(adj)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::sim_rng;

    #[test]
    fn family_sizes() {
        assert_eq!(path(5).edge_count(), 4);
        assert_eq!(cycle(5).unwrap().edge_count(), 5);
        assert_eq!(star(6).degree(0), 5);
        assert_eq!(complete(5).edge_count(), 10);
        assert!(cycle(2).is_err());
    }

    #[test]
    fn gnp_is_seeded_and_validated() {
        let a = gnp(30, 0.2, &mut sim_rng(7)).unwrap();
        let b = gnp(30, 0.2, &mut sim_rng(7)).unwrap();
        assert_eq!(a, b);
        assert!(gnp(3, 1.5, &mut sim_rng(0)).is_err());
        assert_eq!(gnp(6, 1.0, &mut sim_rng(0)).unwrap(), complete(6));
    }

    #[test]
    fn connected_variant_is_connected() {
        for seed in 0..20 {
            let g = connected_gnp(25, 0.02, &mut sim_rng(seed)).unwrap();
            assert_eq!(g.components().1, 1);
        }
    }
}
