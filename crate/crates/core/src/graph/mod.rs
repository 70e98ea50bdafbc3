//! Problem data model: the edge-server network, EDD instances and plans,
//! shortest paths, metric closures, spanning trees and plan validation.

mod instance;
mod mst;
mod paths;
mod solution;
mod validate;

pub use instance::{CostModel, EddInstance, InstanceError, InstanceFile};
pub(crate) use mst::DisjointSet;
pub use mst::{mst, spanning_forest, CompleteGraph, MstError, MstResult, WeightedEdge};
pub use paths::{all_pairs_bfs, metric_closure, MetricClosure, ShortestPaths, UNREACHABLE};
pub use solution::{forest_from_pool, CostBreakdown, EddSolution};
pub(crate) use solution::{plan_cost, prune_parents};
pub use validate::{validate_solution, Violation};

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

/// Node identifier. Edge servers are numbered `1..=N`; [`CLOUD`] is reserved.
pub type NodeId = usize;

/// Sentinel id of the cloud server, the root of every distribution plan.
pub const CLOUD: NodeId = 0;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge ({0}, {1}) references a node outside 1..={2}")]
    NodeOutOfRange(NodeId, NodeId, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(NodeId),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(NodeId, NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("graph is disconnected: node {0} is unreachable from node 1")]
    Disconnected(NodeId),
}

/// Undirected, unit-weight, connected network of edge servers.
///
/// Adjacency lists are kept sorted so every traversal visits neighbours in
/// ascending id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    node_count: usize,
    // index 0 (the cloud) is always empty
    adj: Vec<Vec<NodeId>>,
    edge_count: usize,
}

impl Graph {
    pub fn new(node_count: usize, edges: &[(NodeId, NodeId)]) -> Result<Self, GraphError> {
        if node_count == 0 {
            return Err(GraphError::Empty);
        }
        let mut sets = vec![BTreeSet::new(); node_count + 1];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > node_count || v > node_count {
                return Err(GraphError::NodeOutOfRange(u, v, node_count));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !sets[u].insert(v) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            sets[v].insert(u);
        }
        let adj: Vec<Vec<NodeId>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let graph = Graph {
            node_count,
            adj,
            edge_count: edges.len(),
        };
        if let Some(v) = graph.first_unreachable() {
            return Err(GraphError::Disconnected(v));
        }
        Ok(graph)
    }

    fn first_unreachable(&self) -> Option<NodeId> {
        let mut seen = vec![false; self.node_count + 1];
        let mut queue = VecDeque::from([1]);
        seen[1] = true;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    queue.push_back(v);
                }
            }
        }
        (1..=self.node_count).find(|&v| !seen[v])
    }

    pub fn node_count(&self) -> usize {
        self.node_count
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        1..=self.node_count
    }

    pub fn contains(&self, v: NodeId) -> bool {
        (1..=self.node_count).contains(&v)
    }

    /// Neighbours of `v` in ascending order. Empty for the cloud or unknown ids.
    pub fn neighbors(&self, v: NodeId) -> &[NodeId] {
        self.adj.get(v).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, u: NodeId, v: NodeId) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Every undirected edge once, as `(smaller, larger)`, in ascending order.
    pub fn edges(&self) -> impl Iterator<Item = (NodeId, NodeId)> + '_ {
        self.nodes()
            .flat_map(move |u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }
}

/// Normalises an undirected edge to `(smaller, larger)`.
pub fn undirected(u: NodeId, v: NodeId) -> (NodeId, NodeId) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_malformed_graphs() {
        assert_eq!(Graph::new(0, &[]), Err(GraphError::Empty));
        assert_eq!(Graph::new(2, &[(1, 3)]), Err(GraphError::NodeOutOfRange(1, 3, 2)));
        assert_eq!(Graph::new(2, &[(2, 2)]), Err(GraphError::SelfLoop(2)));
        assert_eq!(Graph::new(2, &[(1, 2), (2, 1)]), Err(GraphError::DuplicateEdge(2, 1)));
        assert_eq!(Graph::new(3, &[(1, 2)]), Err(GraphError::Disconnected(3)));
    }

    #[test]
    fn adjacency_is_symmetric_and_sorted() {
        let g = Graph::new(4, &[(3, 1), (1, 2), (4, 1)]).unwrap();
        assert_eq!(g.neighbors(1), &[2, 3, 4]);
        assert_eq!(g.neighbors(3), &[1]);
        assert!(g.has_edge(4, 1) && g.has_edge(1, 4));
        assert!(!g.has_edge(2, 3));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(1, 2), (1, 3), (1, 4)]);
        assert_eq!(g.neighbors(CLOUD), &[] as &[NodeId]);
    }

    #[test]
    fn single_node_graph_is_valid() {
        let g = Graph::new(1, &[]).unwrap();
        assert_eq!(g.node_count(), 1);
        assert_eq!(g.edge_count(), 0);
    }
}
