//! Network Steiner tree estimation by triple loss contraction.
//!
//! Starting from the metric closure over the destinations, the solver
//! repeatedly looks for a 3-subset `z` whose centroid `v(z)` shortens the
//! minimum spanning tree of the (contracted) terminal graph `F`. The gain of
//! a triple is `max save + min save - d(z)`, where `save(a, b)` is the drop in
//! `mst(F)` when the edge `a-b` is contracted to length zero and `d(z)` is the
//! summed distance from the centroid to the three members. Accepted triples
//! are contracted in `F` and their centroids join the Steiner point set `W`.
//! The final tree is an MST over the closure of `R ∪ W`, expanded back to
//! network links.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{
    all_pairs_bfs, mst, spanning_forest, undirected, CompleteGraph, Graph, GraphError, MetricClosure, MstResult,
    NodeId, ShortestPaths,
};

// below this many triples the rayon fan-out costs more than it saves
const PARALLEL_TRIPLES: usize = 4096;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SteinerError {
    #[error("at least one terminal is required")]
    NoTerminals,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// A destination 3-subset with its centroid and centroid distance sum `d(z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triple {
    pub members: [NodeId; 3],
    pub centroid: NodeId,
    pub spread: u32,
}

/// All 3-subsets of `destinations`, lexicographic by position.
pub fn enumerate_triples(destinations: &[NodeId]) -> Vec<[NodeId; 3]> {
    let k = destinations.len();
    let mut out = Vec::with_capacity(k.saturating_sub(2) * k.saturating_sub(1) * k / 6);
    for a in 0..k {
        for b in (a + 1)..k {
            for c in (b + 1)..k {
                out.push([destinations[a], destinations[b], destinations[c]]);
            }
        }
    }
    out
}

/// Node minimising the summed hop distance to `z`; ties go to the smallest id.
pub fn centroid(closure: &MetricClosure, z: [NodeId; 3]) -> (NodeId, u32) {
    let paths = closure.paths();
    (1..=paths.node_count())
        .map(|v| (z.iter().map(|&s| paths.dist(v, s)).sum::<u32>(), v))
        .min()
        .map(|(d, v)| (v, d))
        .expect("graph has at least one node")
}

/// `save(a, b)`: heaviest edge on the tree path between positions `a` and `b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaveMatrix {
    k: usize,
    save: Vec<u32>,
}

impl SaveMatrix {
    pub fn len(&self) -> usize {
        self.k
    }

    pub fn is_empty(&self) -> bool {
        self.k == 0
    }

    pub fn get(&self, a: usize, b: usize) -> u32 {
        self.save[a * self.k + b]
    }

    fn set(&mut self, a: usize, b: usize, w: u32) {
        self.save[a * self.k + b] = w;
        self.save[b * self.k + a] = w;
    }
}

/// Recursive max-edge split over a spanning tree on `k` vertices.
pub fn find_save(tree: &MstResult, k: usize) -> SaveMatrix {
    let mut out = SaveMatrix {
        k,
        save: vec![0; k * k],
    };
    let vertices: Vec<usize> = (0..k).collect();
    split(
        &mut out,
        tree.edges.iter().map(|e| (e.u, e.v, e.weight)).collect(),
        vertices,
    );
    out
}

fn split(out: &mut SaveMatrix, mut edges: Vec<(usize, usize, u32)>, vertices: Vec<usize>) {
    if edges.is_empty() {
        return;
    }
    let heaviest = edges
        .iter()
        .enumerate()
        .max_by_key(|&(i, e)| (e.2, std::cmp::Reverse(i)))
        .map(|(i, _)| i)
        .expect("non-empty");
    let (a, _, x) = edges.swap_remove(heaviest);

    // side containing `a` once the heaviest edge is gone
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(u, v, _) in &edges {
        adj.entry(u).or_default().push(v);
        adj.entry(v).or_default().push(u);
    }
    let mut side_a = BTreeSet::from([a]);
    let mut stack = vec![a];
    while let Some(u) = stack.pop() {
        for &v in adj.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if side_a.insert(v) {
                stack.push(v);
            }
        }
    }
    let (left, right): (Vec<usize>, Vec<usize>) = vertices.into_iter().partition(|v| side_a.contains(v));
    for &v1 in &left {
        for &v2 in &right {
            out.set(v1, v2, x);
        }
    }
    let (left_edges, right_edges): (Vec<_>, Vec<_>) = edges.into_iter().partition(|e| side_a.contains(&e.0));
    split(out, left_edges, left);
    split(out, right_edges, right);
}

/// Shrinks the three pairwise distances inside `z` (vertex positions) to zero.
pub fn contract_triple(f: &mut CompleteGraph, z: [usize; 3]) {
    f.set_weight(z[0], z[1], 0);
    f.set_weight(z[1], z[2], 0);
    f.set_weight(z[0], z[2], 0);
}

/// One accepted contraction, kept for introspection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionStep {
    pub triple: Triple,
    pub win: i64,
    /// `mst(F)` before the contraction.
    pub mst_cost: u64,
}

/// Approximate Steiner tree, expressed in network links.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SteinerTree {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<(NodeId, NodeId)>,
    /// Centroids selected by accepted contractions (`W`).
    pub steiner_points: BTreeSet<NodeId>,
    pub steps: Vec<ContractionStep>,
}

impl SteinerTree {
    pub fn cost(&self) -> usize {
        self.edges.len()
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }
}

pub fn steiner_approx(graph: &Graph, destinations: &BTreeSet<NodeId>) -> Result<SteinerTree, SteinerError> {
    steiner_approx_with_paths(Arc::new(all_pairs_bfs(graph)), destinations)
}

/// Same as [`steiner_approx`] but reuses a precomputed all-pairs table.
pub fn steiner_approx_with_paths(
    paths: Arc<ShortestPaths>,
    destinations: &BTreeSet<NodeId>,
) -> Result<SteinerTree, SteinerError> {
    if destinations.is_empty() {
        return Err(SteinerError::NoTerminals);
    }
    let terminals: Vec<NodeId> = destinations.iter().copied().collect();
    let closure = MetricClosure::from_paths(Arc::clone(&paths), &terminals)?;
    let position: BTreeMap<NodeId, usize> = terminals.iter().enumerate().map(|(i, &t)| (t, i)).collect();

    let triples: Vec<Triple> = enumerate_triples(&terminals)
        .into_iter()
        .map(|members| {
            let (c, spread) = centroid(&closure, members);
            Triple {
                members,
                centroid: c,
                spread,
            }
        })
        .collect();
    let positions: Vec<[usize; 3]> = triples.iter().map(|t| t.members.map(|m| position[&m])).collect();

    let mut f = CompleteGraph::from_closure(&closure);
    let mut steiner_points = BTreeSet::new();
    let mut steps = Vec::new();
    loop {
        let tree = mst(&f).expect("terminal set is non-empty");
        let save = find_save(&tree, f.len());
        let Some((win, idx)) = best_triple(&triples, &positions, &save) else {
            break;
        };
        if win <= 0 {
            break;
        }
        let triple = triples[idx];
        log::debug!(
            "steiner contraction: triple={:?} centroid={} win={} mst={}",
            triple.members,
            triple.centroid,
            win,
            tree.total
        );
        steps.push(ContractionStep {
            triple,
            win,
            mst_cost: tree.total,
        });
        contract_triple(&mut f, positions[idx]);
        steiner_points.insert(triple.centroid);
    }

    let mut extended: BTreeSet<NodeId> = destinations.clone();
    extended.extend(&steiner_points);
    let extended: Vec<NodeId> = extended.into_iter().collect();
    let closure = MetricClosure::from_paths(Arc::clone(&paths), &extended)?;
    let metric_tree = mst(&CompleteGraph::from_closure(&closure)).expect("terminal set is non-empty");
    let mut pool = Vec::new();
    for e in &metric_tree.edges {
        let (a, b) = undirected(extended[e.u], extended[e.v]);
        pool.extend(paths.path_edges(a, b));
    }
    let mut edges: BTreeSet<(NodeId, NodeId)> = spanning_forest(pool).into_iter().collect();
    trim_leaves(&mut edges, destinations);

    let mut nodes: BTreeSet<NodeId> = edges.iter().flat_map(|&(a, b)| [a, b]).collect();
    nodes.extend(destinations);
    Ok(SteinerTree {
        nodes,
        edges,
        steiner_points,
        steps,
    })
}

fn win_of(t: &Triple, p: &[usize; 3], save: &SaveMatrix) -> i64 {
    let s = [save.get(p[0], p[1]), save.get(p[1], p[2]), save.get(p[0], p[2])];
    let max = *s.iter().max().expect("three entries");
    let min = *s.iter().min().expect("three entries");
    i64::from(max) + i64::from(min) - i64::from(t.spread)
}

// Highest win; ties go to the earliest triple in enumeration order.
fn best_triple(triples: &[Triple], positions: &[[usize; 3]], save: &SaveMatrix) -> Option<(i64, usize)> {
    let score = |i: usize| (win_of(&triples[i], &positions[i], save), std::cmp::Reverse(i));
    let best = if triples.len() >= PARALLEL_TRIPLES {
        (0..triples.len()).into_par_iter().map(score).max()
    } else {
        (0..triples.len()).map(score).max()
    };
    best.map(|(w, std::cmp::Reverse(i))| (w, i))
}

// Repeatedly removes leaves that are not terminals.
fn trim_leaves(edges: &mut BTreeSet<(NodeId, NodeId)>, keep: &BTreeSet<NodeId>) {
    loop {
        let mut degree: BTreeMap<NodeId, usize> = BTreeMap::new();
        for &(a, b) in edges.iter() {
            *degree.entry(a).or_default() += 1;
            *degree.entry(b).or_default() += 1;
        }
        let before = edges.len();
        edges.retain(|&(a, b)| !((degree[&a] == 1 && !keep.contains(&a)) || (degree[&b] == 1 && !keep.contains(&b))));
        if edges.len() == before {
            break;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::metric_closure;

    #[test]
    fn triple_counts() {
        assert_eq!(enumerate_triples(&[1, 2, 3]), vec![[1, 2, 3]]);
        assert_eq!(enumerate_triples(&[2, 3, 4, 5, 6, 8, 9]).len(), 35);
        assert!(enumerate_triples(&[1, 2]).is_empty());
    }

    fn star(spokes: usize) -> Graph {
        // centre is node 1
        let edges: Vec<(NodeId, NodeId)> = (2..=spokes + 1).map(|v| (1, v)).collect();
        Graph::new(spokes + 1, &edges).unwrap()
    }

    #[test]
    fn centroid_of_a_star_is_the_centre() {
        let g = star(3);
        let mc = metric_closure(&g, &[2, 3, 4]).unwrap();
        assert_eq!(centroid(&mc, [2, 3, 4]), (1, 3));
    }

    // brute force over every node, independent of the min-scan above
    fn centroid_oracle(paths: &ShortestPaths, z: [NodeId; 3]) -> (NodeId, u32) {
        let mut best: Option<(NodeId, u32)> = None;
        for v in 1..=paths.node_count() {
            let d = paths.dist(v, z[0]) + paths.dist(v, z[1]) + paths.dist(v, z[2]);
            if best.is_none_or(|(_, bd)| d < bd) {
                best = Some((v, d));
            }
        }
        best.unwrap()
    }

    #[test]
    fn ten_node_centroids_match_oracle() {
        let inst = fixtures::ten_node();
        let mc = metric_closure(inst.graph(), &fixtures::TEN_NODE_DESTINATIONS).unwrap();
        // {2, 5, 9}: node 3 is adjacent to all three
        assert_eq!(centroid(&mc, [2, 5, 9]), (3, 3));
        assert_eq!(centroid_oracle(mc.paths(), [2, 5, 9]), (3, 3));
        for z in enumerate_triples(&fixtures::TEN_NODE_DESTINATIONS) {
            assert_eq!(centroid(&mc, z), centroid_oracle(mc.paths(), z), "{z:?}");
        }
        // member as centroid: 3 with neighbours 2 and 5 gives 0 + 1 + 1
        assert_eq!(centroid(&mc, [2, 3, 5]), (3, 2));
    }

    #[test]
    fn save_on_small_trees() {
        // path a-b (2), b-c (3)
        let w = [[0, 2, 5], [2, 0, 3], [5, 3, 0]];
        let g = CompleteGraph::new(vec![1, 2, 3], |i, j| w[i][j]);
        let t = mst(&g).unwrap();
        let s = find_save(&t, 3);
        assert_eq!((s.get(0, 2), s.get(1, 2), s.get(0, 1)), (3, 3, 2));

        let g = CompleteGraph::new(vec![1, 2], |_, _| 5);
        let s = find_save(&mst(&g).unwrap(), 2);
        assert_eq!(s.get(0, 1), 5);

        let g = CompleteGraph::new(vec![1, 2, 3, 4, 5], |_, _| 1);
        let s = find_save(&mst(&g).unwrap(), 5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(s.get(a, b), u32::from(a != b));
            }
        }
    }

    #[test]
    fn contraction_zeroes_the_triangle() {
        let w = [[0, 2, 4], [2, 0, 3], [4, 3, 0]];
        let mut g = CompleteGraph::new(vec![1, 2, 3], |i, j| w[i][j]);
        contract_triple(&mut g, [0, 1, 2]);
        assert_eq!(mst(&g).unwrap().total, 0);
        let snapshot = g.clone();
        contract_triple(&mut g, [0, 1, 2]);
        assert_eq!(g, snapshot);
    }

    #[test]
    fn contraction_leaves_cheapest_attachment() {
        // terminals 0..3; triple {0,1,2}; node 3 attaches at weights 4, 6, 7
        let w = [[0, 2, 3, 4], [2, 0, 2, 6], [3, 2, 0, 7], [4, 6, 7, 0]];
        let mut g = CompleteGraph::new(vec![1, 2, 3, 4], |i, j| w[i][j]);
        contract_triple(&mut g, [0, 1, 2]);
        assert_eq!(mst(&g).unwrap().total, 4);
    }

    #[test]
    fn ten_node_tree_matches_reference() {
        let inst = fixtures::ten_node();
        let st = steiner_approx(inst.graph(), inst.destinations()).unwrap();
        let expected: BTreeSet<(NodeId, NodeId)> = [(2, 3), (2, 4), (2, 8), (3, 5), (3, 9), (5, 6)].into();
        assert_eq!(st.edges, expected);
        assert_eq!(st.cost(), 6);
        assert!(st.steps.is_empty());
    }

    #[test]
    fn single_terminal_tree_is_a_point() {
        let inst = fixtures::ten_node();
        let st = steiner_approx(inst.graph(), &BTreeSet::from([7])).unwrap();
        assert_eq!(st.cost(), 0);
        assert_eq!(st.nodes, BTreeSet::from([7]));
    }

    #[test]
    fn star_centre_is_selected() {
        let g = star(4);
        let r: BTreeSet<NodeId> = (2..=5).collect();
        let st = steiner_approx(&g, &r).unwrap();
        assert_eq!(st.cost(), 4);
        assert!(st.steiner_points.contains(&1));
        assert_eq!(st.steps[0].win, 1);
        let plain = mst(&CompleteGraph::from_closure(
            &metric_closure(&g, &[2, 3, 4, 5]).unwrap(),
        ))
        .unwrap();
        assert_eq!(plain.total, 6);
    }

    #[test]
    fn empty_terminal_set_is_an_error() {
        let g = star(2);
        assert_eq!(steiner_approx(&g, &BTreeSet::new()), Err(SteinerError::NoTerminals));
    }
}
