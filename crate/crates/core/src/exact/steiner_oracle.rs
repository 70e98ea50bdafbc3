use std::collections::BTreeSet;
use std::sync::Arc;

use super::ExactError;
use crate::graph::{all_pairs_bfs, mst, spanning_forest, undirected, CompleteGraph, Graph, MetricClosure, NodeId};

/// Largest number of candidate Steiner points [`brute_force_steiner`] enumerates.
pub const MAX_STEINER_CANDIDATES: usize = 16;

/// Minimum Steiner tree by enumerating every subset of non-terminal nodes and
/// taking the metric MST over terminals plus that subset.
pub fn brute_force_steiner(
    graph: &Graph,
    terminals: &BTreeSet<NodeId>,
) -> Result<(BTreeSet<(NodeId, NodeId)>, usize), ExactError> {
    if terminals.is_empty() {
        return Err(ExactError::NoTerminals);
    }
    let candidates: Vec<NodeId> = graph.nodes().filter(|v| !terminals.contains(v)).collect();
    if candidates.len() > MAX_STEINER_CANDIDATES {
        return Err(ExactError::TooLarge {
            limit: MAX_STEINER_CANDIDATES,
            actual: candidates.len(),
        });
    }
    let paths = Arc::new(all_pairs_bfs(graph));
    let closure_over = |subset: usize| {
        let mut nodes: Vec<NodeId> = terminals.iter().copied().collect();
        nodes.extend(
            candidates
                .iter()
                .enumerate()
                .filter(|&(i, _)| subset & (1 << i) != 0)
                .map(|(_, &v)| v),
        );
        nodes.sort_unstable();
        MetricClosure::from_paths(Arc::clone(&paths), &nodes).expect("nodes come from the graph")
    };

    let mut best: Option<(u64, usize)> = None;
    for subset in 0..(1usize << candidates.len()) {
        let total = mst(&CompleteGraph::from_closure(&closure_over(subset)))
            .expect("terminals are non-empty")
            .total;
        if best.is_none_or(|(b, _)| total < b) {
            best = Some((total, subset));
        }
    }
    let (total, subset) = best.expect("at least the empty subset");

    let closure = closure_over(subset);
    let tree = mst(&CompleteGraph::from_closure(&closure)).expect("terminals are non-empty");
    let nodes = closure.terminals();
    let pool = tree.edges.iter().flat_map(|e| {
        let (a, b) = undirected(nodes[e.u], nodes[e.v]);
        paths.path_edges(a, b)
    });
    let edges: BTreeSet<(NodeId, NodeId)> = spanning_forest(pool).into_iter().collect();
    debug_assert_eq!(edges.len() as u64, total);
    Ok((edges, total as usize))
}
