//! Cloud-rooted plans from an approximate Steiner tree.
//!
//! The Steiner tree is hung from the cloud at its best-connected node and
//! walked depth-first in ascending id order. Destinations that fall beyond
//! the depth budget are re-attached straight to the cloud; their unvisited
//! network neighbours are then pulled underneath them when that makes them
//! shallower, and depths are recomputed. A final pass drops every branch that
//! serves no destination.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{all_pairs_bfs, prune_parents, EddInstance, EddSolution, Graph, NodeId, ShortestPaths, CLOUD};
use crate::steiner::{steiner_approx_with_paths, SteinerError, SteinerTree};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NsteError {
    #[error("cannot root an empty tree")]
    EmptyTree,
    #[error("tree edge ({0}, {1}) is not a link of the network")]
    NotAnEdge(NodeId, NodeId),
    #[error(transparent)]
    Steiner(#[from] SteinerError),
}

/// Steiner tree hung from the cloud.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DirectedTree {
    /// Tree node wired to the cloud.
    pub attach: NodeId,
    /// Parent of every tree node; `attach` maps to [`CLOUD`].
    pub parent: BTreeMap<NodeId, NodeId>,
    /// Depth from the cloud (cloud = 0, `attach` = 1).
    pub depth: BTreeMap<NodeId, u32>,
}

/// Attaches the highest-degree tree node (smallest id on ties) to the cloud
/// and orients every tree edge away from it.
pub fn root_at_cloud(st: &SteinerTree, graph: &Graph) -> Result<DirectedTree, NsteError> {
    if st.nodes.is_empty() {
        return Err(NsteError::EmptyTree);
    }
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = st.nodes.iter().map(|&v| (v, BTreeSet::new())).collect();
    for &(a, b) in &st.edges {
        if !graph.has_edge(a, b) {
            return Err(NsteError::NotAnEdge(a, b));
        }
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    let attach = adj
        .iter()
        .max_by_key(|&(&v, n)| (n.len(), std::cmp::Reverse(v)))
        .map(|(&v, _)| v)
        .expect("non-empty");

    let mut parent = BTreeMap::from([(attach, CLOUD)]);
    let mut depth = BTreeMap::from([(attach, 1)]);
    let mut queue = VecDeque::from([attach]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[&u] {
            if let std::collections::btree_map::Entry::Vacant(e) = parent.entry(v) {
                e.insert(u);
                depth.insert(v, depth[&u] + 1);
                queue.push_back(v);
            }
        }
    }
    Ok(DirectedTree { attach, parent, depth })
}

const UNSET: u32 = u32::MAX;

// Mutable copy of the rooted tree used while slicing.
struct WorkingTree {
    parent: Vec<Option<NodeId>>,
    children: Vec<BTreeSet<NodeId>>,
    depth: Vec<u32>,
}

impl WorkingTree {
    fn new(dt: &DirectedTree, node_count: usize) -> Self {
        let mut tree = WorkingTree {
            parent: vec![None; node_count + 1],
            children: vec![BTreeSet::new(); node_count + 1],
            depth: vec![UNSET; node_count + 1],
        };
        for (&v, &p) in &dt.parent {
            tree.parent[v] = Some(p);
            tree.children[p].insert(v);
        }
        tree.recompute_depths();
        tree
    }

    fn in_tree(&self, v: NodeId) -> bool {
        self.parent[v].is_some()
    }

    fn reparent(&mut self, v: NodeId, new_parent: NodeId) {
        if let Some(old) = self.parent[v] {
            self.children[old].remove(&v);
        }
        self.parent[v] = Some(new_parent);
        self.children[new_parent].insert(v);
    }

    fn recompute_depths(&mut self) {
        self.depth.iter_mut().for_each(|d| *d = UNSET);
        self.depth[CLOUD] = 0;
        let mut queue = VecDeque::from([CLOUD]);
        while let Some(u) = queue.pop_front() {
            for &v in &self.children[u] {
                self.depth[v] = self.depth[u] + 1;
                queue.push_back(v);
            }
        }
    }
}

/// Slices the rooted tree so every destination meets the depth budget.
///
/// Always returns a feasible plan: in the worst case every destination hangs
/// directly off the cloud.
pub fn slice_and_tune(dt: &DirectedTree, instance: &EddInstance) -> EddSolution {
    let graph = instance.graph();
    let limit = instance.depth_limit();
    let mut tree = WorkingTree::new(dt, graph.node_count());
    let mut visited = vec![false; graph.node_count() + 1];
    visited[CLOUD] = true;
    // final parent of every kept node
    let mut kept: BTreeMap<NodeId, NodeId> = BTreeMap::new();

    let mut stack: Vec<NodeId> = tree.children[CLOUD].iter().rev().copied().collect();
    while let Some(v) = stack.pop() {
        let Some(p) = tree.parent[v] else { continue };
        // stale entries: already handled, or moved under a parent not reached yet
        if visited[v] || !visited[p] {
            continue;
        }
        visited[v] = true;
        if !instance.is_destination(v) || tree.depth[v] <= limit {
            kept.insert(v, p);
        } else {
            tree.reparent(v, CLOUD);
            tree.depth[v] = 1;
            kept.insert(v, CLOUD);
            let step = tree.depth[v] + 1;
            if step <= limit {
                for &u in graph.neighbors(v) {
                    // only unvisited tree nodes move; visited ones already have final parents
                    if tree.in_tree(u) && !visited[u] && tree.depth[u] > step && tree.parent[u] != Some(v) {
                        tree.reparent(u, v);
                        tree.depth[u] = step;
                    }
                }
            }
            tree.recompute_depths();
        }
        stack.extend(tree.children[v].iter().rev().copied());
    }
    prune(instance, &kept)
}

/// Drops every node that is not on the cloud path of some destination.
pub fn prune(instance: &EddInstance, working: &BTreeMap<NodeId, NodeId>) -> EddSolution {
    let kept = prune_parents(working, instance.destinations());
    EddSolution::from_parents(instance, &kept)
}

/// Intermediate artefacts of one solve.
#[derive(Debug, Clone)]
pub struct NsteRun {
    pub steiner: SteinerTree,
    pub rooted: DirectedTree,
    pub solution: EddSolution,
}

pub fn solve_detailed(instance: &EddInstance, paths: Arc<ShortestPaths>) -> Result<NsteRun, NsteError> {
    let steiner = steiner_approx_with_paths(paths, instance.destinations())?;
    let rooted = root_at_cloud(&steiner, instance.graph())?;
    let solution = slice_and_tune(&rooted, instance);
    Ok(NsteRun {
        steiner,
        rooted,
        solution,
    })
}

/// Full pipeline: Steiner estimation, rooting, slicing.
pub fn solve(instance: &EddInstance) -> EddSolution {
    solve_detailed(instance, Arc::new(all_pairs_bfs(instance.graph())))
        .expect("valid instances always have a non-empty destination set")
        .solution
}
