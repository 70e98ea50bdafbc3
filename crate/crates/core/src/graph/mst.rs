use thiserror::Error;

use super::{undirected, MetricClosure, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MstError {
    #[error("cannot build a spanning tree over an empty node set")]
    Empty,
}

/// Dense symmetric weight matrix over labelled vertices.
///
/// Vertices are addressed by position; `labels` maps positions back to node
/// ids and drives tie-breaking.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompleteGraph {
    labels: Vec<NodeId>,
    weights: Vec<u32>,
}

impl CompleteGraph {
    pub fn new(labels: Vec<NodeId>, weight: impl Fn(usize, usize) -> u32) -> Self {
        let k = labels.len();
        let mut weights = vec![0; k * k];
        for i in 0..k {
            for j in (i + 1)..k {
                let w = weight(i, j);
                weights[i * k + j] = w;
                weights[j * k + i] = w;
            }
        }
        CompleteGraph { labels, weights }
    }

    pub fn from_closure(closure: &MetricClosure) -> Self {
        Self::new(closure.terminals().to_vec(), |i, j| closure.weight(i, j))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[NodeId] {
        &self.labels
    }

    pub fn weight(&self, i: usize, j: usize) -> u32 {
        self.weights[i * self.labels.len() + j]
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: u32) {
        let k = self.labels.len();
        self.weights[i * k + j] = w;
        self.weights[j * k + i] = w;
    }
}

/// Edge between two vertex positions of a [`CompleteGraph`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct WeightedEdge {
    pub u: usize,
    pub v: usize,
    pub weight: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MstResult {
    pub edges: Vec<WeightedEdge>,
    pub total: u64,
}

pub(crate) struct DisjointSet {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl DisjointSet {
    pub(crate) fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
            rank: vec![0; n],
        }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
        true
    }
}

/// Kruskal over a complete graph. Ties are broken by
/// `(weight, smaller endpoint id, larger endpoint id)`.
pub fn mst(graph: &CompleteGraph) -> Result<MstResult, MstError> {
    if graph.is_empty() {
        return Err(MstError::Empty);
    }
    let k = graph.len();
    let labels = graph.labels();
    let mut candidates = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let (a, b) = undirected(labels[i], labels[j]);
            candidates.push((graph.weight(i, j), a, b, i, j));
        }
    }
    candidates.sort_unstable();
    let mut dsu = DisjointSet::new(k);
    let mut edges = Vec::with_capacity(k - 1);
    let mut total = 0u64;
    for (weight, _, _, i, j) in candidates {
        if dsu.union(i, j) {
            edges.push(WeightedEdge { u: i, v: j, weight });
            total += u64::from(weight);
            if edges.len() == k - 1 {
                break;
            }
        }
    }
    Ok(MstResult { edges, total })
}

/// Spanning forest of an unweighted edge set over node ids, scanning edges in
/// ascending `(smaller, larger)` order.
pub fn spanning_forest(edges: impl IntoIterator<Item = (NodeId, NodeId)>) -> Vec<(NodeId, NodeId)> {
    let mut sorted: Vec<(NodeId, NodeId)> = edges.into_iter().map(|(u, v)| undirected(u, v)).collect();
    sorted.sort_unstable();
    sorted.dedup();
    let max_id = sorted.iter().map(|&(_, b)| b).max().unwrap_or(0);
    let mut dsu = DisjointSet::new(max_id + 1);
    sorted.into_iter().filter(|&(u, v)| dsu.union(u, v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle() {
        let w = [[0, 1, 2], [1, 0, 3], [2, 3, 0]];
        let g = CompleteGraph::new(vec![1, 2, 3], |i, j| w[i][j]);
        let t = mst(&g).unwrap();
        assert_eq!(t.total, 3);
        assert_eq!(t.edges.len(), 2);
    }

    #[test]
    fn single_node_and_empty() {
        let g = CompleteGraph::new(vec![7], |_, _| 0);
        assert_eq!(
            mst(&g).unwrap(),
            MstResult {
                edges: vec![],
                total: 0
            }
        );
        let empty = CompleteGraph::new(vec![], |_, _| 0);
        assert_eq!(mst(&empty), Err(MstError::Empty));
    }

    #[test]
    fn ties_follow_endpoint_ids() {
        // labels deliberately out of order: position 0 is node 9
        let g = CompleteGraph::new(vec![9, 2, 5], |_, _| 1);
        let t = mst(&g).unwrap();
        let picked: Vec<(NodeId, NodeId)> = t
            .edges
            .iter()
            .map(|e| undirected(g.labels()[e.u], g.labels()[e.v]))
            .collect();
        assert_eq!(picked, vec![(2, 5), (2, 9)]);
    }

    #[test]
    fn forest_drops_cycle_edges() {
        let f = spanning_forest([(2, 1), (2, 3), (1, 3), (5, 6)]);
        assert_eq!(f, vec![(1, 2), (1, 3), (5, 6)]);
    }
}
