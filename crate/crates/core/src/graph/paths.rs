use std::collections::VecDeque;
use std::sync::Arc;

use super::{Graph, GraphError, NodeId};

/// Distance marker for pairs that are not connected (never produced for a
/// valid [`Graph`], but used for the cloud row/column).
pub const UNREACHABLE: u32 = u32::MAX;

/// All-pairs hop distances with predecessor links for path reconstruction.
///
/// Rows and columns are indexed by node id; index 0 (the cloud) is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortestPaths {
    stride: usize,
    dist: Vec<u32>,
    pred: Vec<NodeId>,
}

impl ShortestPaths {
    pub fn node_count(&self) -> usize {
        self.stride - 1
    }

    pub fn dist(&self, u: NodeId, v: NodeId) -> u32 {
        self.dist[u * self.stride + v]
    }

    /// Predecessor of `v` on the chosen shortest path from `source`.
    pub fn pred(&self, source: NodeId, v: NodeId) -> NodeId {
        self.pred[source * self.stride + v]
    }

    /// Node sequence of the chosen shortest path `from -> to`, both ends included.
    pub fn path(&self, from: NodeId, to: NodeId) -> Vec<NodeId> {
        let mut path = vec![to];
        let mut cur = to;
        while cur != from {
            cur = self.pred(from, cur);
            path.push(cur);
        }
        path.reverse();
        path
    }

    /// Edges of [`ShortestPaths::path`] as consecutive `(u, v)` pairs.
    pub fn path_edges(&self, from: NodeId, to: NodeId) -> Vec<(NodeId, NodeId)> {
        self.path(from, to).windows(2).map(|w| (w[0], w[1])).collect()
    }
}

/// BFS from every node. Neighbours are scanned in ascending order, so the
/// predecessor of each node is the smallest-id parent on its first BFS layer.
pub fn all_pairs_bfs(graph: &Graph) -> ShortestPaths {
    let stride = graph.node_count() + 1;
    let mut dist = vec![UNREACHABLE; stride * stride];
    let mut pred = vec![0; stride * stride];
    let mut queue = VecDeque::with_capacity(stride);
    for s in graph.nodes() {
        let row = s * stride;
        dist[row + s] = 0;
        pred[row + s] = s;
        queue.clear();
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            let du = dist[row + u];
            for &v in graph.neighbors(u) {
                if dist[row + v] == UNREACHABLE {
                    dist[row + v] = du + 1;
                    pred[row + v] = u;
                    queue.push_back(v);
                }
            }
        }
    }
    ShortestPaths { stride, dist, pred }
}

/// Complete graph over a terminal set whose weights are hop distances in the
/// underlying network. Keeps the all-pairs table for path expansion.
#[derive(Debug, Clone)]
pub struct MetricClosure {
    terminals: Vec<NodeId>,
    dist: Vec<u32>,
    paths: Arc<ShortestPaths>,
}

impl MetricClosure {
    pub fn from_paths(paths: Arc<ShortestPaths>, terminals: &[NodeId]) -> Result<Self, GraphError> {
        if let Some(&bad) = terminals.iter().find(|&&t| t == 0 || t > paths.node_count()) {
            return Err(GraphError::UnknownNode(bad));
        }
        let k = terminals.len();
        let mut dist = vec![0; k * k];
        for (i, &a) in terminals.iter().enumerate() {
            for (j, &b) in terminals.iter().enumerate() {
                dist[i * k + j] = paths.dist(a, b);
            }
        }
        Ok(MetricClosure {
            terminals: terminals.to_vec(),
            dist,
            paths,
        })
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn len(&self) -> usize {
        self.terminals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terminals.is_empty()
    }

    /// Distance between the `i`-th and `j`-th terminals.
    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.dist[i * self.terminals.len() + j]
    }

    pub fn paths(&self) -> &ShortestPaths {
        &self.paths
    }

    pub fn shared_paths(&self) -> Arc<ShortestPaths> {
        Arc::clone(&self.paths)
    }
}

pub fn metric_closure(graph: &Graph, terminals: &[NodeId]) -> Result<MetricClosure, GraphError> {
    MetricClosure::from_paths(Arc::new(all_pairs_bfs(graph)), terminals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn identity_distances_are_zero() {
        let g = fixtures::ten_node().graph().clone();
        let sp = all_pairs_bfs(&g);
        for v in g.nodes() {
            assert_eq!(sp.dist(v, v), 0);
            assert_eq!(sp.path(v, v), vec![v]);
        }
    }

    #[test]
    fn ten_node_distances_and_paths() {
        let g = fixtures::ten_node().graph().clone();
        let sp = all_pairs_bfs(&g);
        assert_eq!(sp.dist(2, 6), 2);
        assert_eq!(sp.path(2, 6), vec![2, 8, 6]);
        assert_eq!(sp.dist(6, 9), 2);
        assert_eq!(sp.path(6, 9), vec![6, 5, 9]);
    }

    #[test]
    fn closure_over_single_terminal_is_zero() {
        let g = fixtures::ten_node().graph().clone();
        let mc = metric_closure(&g, &[4]).unwrap();
        assert_eq!(mc.len(), 1);
        assert_eq!(mc.weight(0, 0), 0);
    }

    #[test]
    fn closure_on_a_path() {
        let g = Graph::new(3, &[(1, 2), (2, 3)]).unwrap();
        let mc = metric_closure(&g, &[1, 3]).unwrap();
        assert_eq!(mc.weight(0, 1), 2);
        assert_eq!(mc.paths().path(1, 3), vec![1, 2, 3]);
    }

    #[test]
    fn closure_rejects_unknown_terminals() {
        let g = Graph::new(3, &[(1, 2), (2, 3)]).unwrap();
        assert_eq!(metric_closure(&g, &[1, 4]).unwrap_err(), GraphError::UnknownNode(4));
        assert_eq!(metric_closure(&g, &[0]).unwrap_err(), GraphError::UnknownNode(0));
    }
}
