use super::{DynGraph, NodeId, Pair};

/// Induced subgraph on every node within `radius` of either center, with
/// local ids `0..len` mapped back to the original ids through `nodes`.
#[derive(Debug, Clone)]
pub struct Ball {
    pub graph: DynGraph,
    /// Original id of each local node, sorted ascending.
    pub nodes: Vec<NodeId>,
    pub u_local: NodeId,
    pub v_local: NodeId,
}

impl Ball {
    pub fn to_local(&self, x: NodeId) -> Option<NodeId> {
        self.nodes.binary_search(&x).ok().map(|i| i as NodeId)
    }

    pub fn to_global(&self, x: NodeId) -> NodeId {
        self.nodes[x as usize]
    }

    pub fn centers(&self) -> Pair {
        Pair::new(self.u_local, self.v_local)
    }
}

pub fn induced_ball(g: &DynGraph, centers: Pair, radius: usize) -> Ball {
    let mut nodes: Vec<NodeId> = g
        .bfs_within(&[centers.lo(), centers.hi()], radius)
        .into_iter()
        .map(|(x, _)| x)
        .collect();
    nodes.sort_unstable();
    let local = |x: NodeId| nodes.binary_search(&x).ok().map(|i| i as NodeId);
    let adj: Vec<Vec<NodeId>> = nodes
        .iter()
        .map(|&x| g.neighbors(x).iter().filter_map(|&y| local(y)).collect())
        .collect();
    let u_local = local(centers.lo()).unwrap();
    let v_local = local(centers.hi()).unwrap();
    Ball {
        graph: DynGraph::from_adjacency(adj),
        nodes,
        u_local,
        v_local,
    }
}
