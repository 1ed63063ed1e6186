use std::borrow::Cow;
use std::collections::HashMap;

use super::{intersect_count, intersect_into, DynGraph, NodeId, Pair};

/// Read-only window onto the ball of radius `r` around a pair.
///
/// This is the only graph access a potential receives. Every query is
/// answered as if on the induced subgraph of the ball; asking about a node
/// outside it panics with a locality violation.
pub struct LocalView<'g> {
    graph: &'g DynGraph,
    pair: Pair,
    u: NodeId,
    v: NodeId,
    radius: usize,
    dist: Option<HashMap<NodeId, usize>>,
}

impl<'g> LocalView<'g> {
    /// `(u, v)` keeps the caller's order so potentials can be checked for
    /// symmetry under swapping.
    pub fn new(graph: &'g DynGraph, u: NodeId, v: NodeId, radius: usize) -> Self {
        let pair = Pair::new(u, v);
        let dist = (radius >= 2).then(|| graph.bfs_within(&[u, v], radius).into_iter().collect());
        LocalView {
            graph,
            pair,
            u,
            v,
            radius,
            dist,
        }
    }

    pub fn u(&self) -> NodeId {
        self.u
    }

    pub fn v(&self) -> NodeId {
        self.v
    }

    pub fn pair(&self) -> Pair {
        self.pair
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Distance of `x` from the nearer center, if inside the ball.
    pub fn distance(&self, x: NodeId) -> Option<usize> {
        if x == self.u || x == self.v {
            return Some(0);
        }
        match &self.dist {
            Some(d) => d.get(&x).copied(),
            None if self.radius == 1
                && (self.graph.has_edge(x, self.u) || self.graph.has_edge(x, self.v)) =>
            {
                Some(1)
            }
            None => None,
        }
    }

    pub fn contains(&self, x: NodeId) -> bool {
        (x as usize) < self.graph.node_count() && self.distance(x).is_some()
    }

    fn require(&self, x: NodeId) -> usize {
        match self.distance(x) {
            Some(d) => d,
            None => panic!(
                "locality violation: node {x} is outside the radius-{} ball of {}",
                self.radius, self.pair
            ),
        }
    }

    pub fn adjacent(&self, x: NodeId, y: NodeId) -> bool {
        self.require(x);
        self.require(y);
        x != y && self.graph.has_edge(x, y)
    }

    /// Whether the centers are adjacent.
    pub fn has_edge(&self) -> bool {
        self.graph.has_edge(self.u, self.v)
    }

    /// Neighbors of `x` inside the ball, sorted.
    pub fn neighbors(&self, x: NodeId) -> Cow<'g, [NodeId]> {
        let d = self.require(x);
        let all = self.graph.neighbors(x);
        if d < self.radius {
            Cow::Borrowed(all)
        } else {
            Cow::Owned(all.iter().copied().filter(|&y| self.contains(y)).collect())
        }
    }

    pub fn degree(&self, x: NodeId) -> usize {
        let d = self.require(x);
        if d < self.radius {
            self.graph.degree(x)
        } else {
            self.neighbors(x).len()
        }
    }

    pub fn common_neighbors(&self, x: NodeId, y: NodeId) -> usize {
        intersect_count(&self.neighbors(x), &self.neighbors(y))
    }

    pub fn common_neighbor_list(&self, x: NodeId, y: NodeId) -> Vec<NodeId> {
        let mut out = Vec::new();
        intersect_into(&self.neighbors(x), &self.neighbors(y), &mut out);
        out
    }

    /// Edges inside `N(x) ∩ N(y)`, restricted to the ball.
    pub fn edges_among_common_neighbors(&self, x: NodeId, y: NodeId) -> usize {
        let common = self.common_neighbor_list(x, y);
        let twice: usize = common
            .iter()
            .map(|&w| intersect_count(&self.neighbors(w), &common))
            .sum();
        twice / 2
    }

    /// Nodes of the ball, sorted. Materializes the member set for radius ≤ 1.
    pub fn members(&self) -> Vec<NodeId> {
        let mut out: Vec<NodeId> = match &self.dist {
            Some(d) => d.keys().copied().collect(),
            None => {
                let mut m = vec![self.u, self.v];
                if self.radius == 1 {
                    m.extend_from_slice(self.graph.neighbors(self.u));
                    m.extend_from_slice(self.graph.neighbors(self.v));
                }
                m
            }
        };
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> DynGraph {
        DynGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn boundary_degrees_are_truncated() {
        let g = path4();
        let view = LocalView::new(&g, 0, 1, 1);
        assert_eq!(view.degree(1), 2);
        // Node 2 sits on the boundary; its edge to 3 is outside the ball.
        assert_eq!(view.degree(2), 1);
        assert_eq!(view.members(), vec![0, 1, 2]);
    }

    #[test]
    fn radius_zero_sees_only_the_pair() {
        let g = path4();
        let view = LocalView::new(&g, 1, 2, 0);
        assert_eq!(view.degree(1), 1);
        assert!(view.has_edge());
        assert!(!view.contains(0));
    }

    #[test]
    #[should_panic(expected = "locality violation")]
    fn outside_access_panics() {
        let g = path4();
        let view = LocalView::new(&g, 0, 1, 1);
        view.degree(3);
    }

    #[test]
    fn radius_two_distances() {
        let g = path4();
        let view = LocalView::new(&g, 0, 1, 2);
        assert_eq!(view.distance(3), Some(2));
        assert_eq!(view.degree(3), 1);
        assert_eq!(view.degree(2), 2);
    }
}
