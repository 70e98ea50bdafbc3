use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{undirected, EddInstance, InstanceError, NodeId, CLOUD};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub c2e_cost: f64,
    pub e2e_cost: f64,
    pub total: f64,
}

/// A cloud-rooted distribution plan.
///
/// `transit` receives data over C2E links, `e2e_edges` are directed
/// `(from, to)` transfers, and `depth` holds each visited node's distance from
/// the cloud (transit servers sit at depth 1).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EddSolution {
    pub transit: BTreeSet<NodeId>,
    pub e2e_edges: BTreeSet<(NodeId, NodeId)>,
    pub depth: BTreeMap<NodeId, u32>,
    pub visited: BTreeSet<NodeId>,
    pub cost: CostBreakdown,
}

impl EddSolution {
    /// Builds a plan from a parent map; a parent of [`CLOUD`] marks a transit server.
    pub fn from_parents(instance: &EddInstance, parents: &BTreeMap<NodeId, NodeId>) -> Self {
        let transit: BTreeSet<NodeId> = parents.iter().filter(|&(_, &p)| p == CLOUD).map(|(&v, _)| v).collect();
        let e2e_edges: BTreeSet<(NodeId, NodeId)> = parents
            .iter()
            .filter(|&(_, &p)| p != CLOUD)
            .map(|(&v, &p)| (p, v))
            .collect();
        let mut depth = BTreeMap::new();
        for &v in parents.keys() {
            let mut d = 0u32;
            let mut cur = v;
            // a malformed (cyclic or dangling) map yields u32::MAX, which validation reports
            while cur != CLOUD {
                match parents.get(&cur) {
                    Some(&p) if (d as usize) <= parents.len() => {
                        d += 1;
                        cur = p;
                    }
                    _ => {
                        d = u32::MAX;
                        break;
                    }
                }
            }
            depth.insert(v, d);
        }
        let visited = parents.keys().copied().collect();
        let cost = plan_cost(instance, &transit, &e2e_edges);
        EddSolution {
            transit,
            e2e_edges,
            depth,
            visited,
            cost,
        }
    }

    /// Parent of every visited node (cloud for transit servers).
    pub fn parents(&self) -> BTreeMap<NodeId, NodeId> {
        let mut parents: BTreeMap<NodeId, NodeId> = self.transit.iter().map(|&s| (s, CLOUD)).collect();
        for &(u, v) in &self.e2e_edges {
            parents.insert(v, u);
        }
        parents
    }

    pub fn total_cost(&self) -> f64 {
        self.cost.total
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("solution serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        serde_json::from_str(text).map_err(|e| InstanceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, InstanceError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }
}

pub(crate) fn plan_cost(
    instance: &EddInstance,
    transit: &BTreeSet<NodeId>,
    e2e_edges: &BTreeSet<(NodeId, NodeId)>,
) -> CostBreakdown {
    let c2e_cost: f64 = transit.iter().map(|&s| instance.c2e_cost(s)).sum();
    let e2e_cost: f64 = e2e_edges.iter().map(|&(u, v)| instance.e2e_cost(u, v)).sum();
    CostBreakdown {
        c2e_cost,
        e2e_cost,
        total: c2e_cost + e2e_cost,
    }
}

/// Keeps only nodes that lie on the cloud path of some destination.
pub(crate) fn prune_parents(
    parents: &BTreeMap<NodeId, NodeId>,
    destinations: &BTreeSet<NodeId>,
) -> BTreeMap<NodeId, NodeId> {
    let mut kept = BTreeMap::new();
    for &r in destinations {
        let mut cur = r;
        while cur != CLOUD && !kept.contains_key(&cur) {
            let Some(&p) = parents.get(&cur) else { break };
            kept.insert(cur, p);
            cur = p;
        }
    }
    kept
}

/// Turns a transit set plus an undirected edge pool into a feasible plan.
///
/// Runs a multi-source BFS from `transit` over the pool, so every node hangs
/// off its nearest transit server, then drops branches that serve no
/// destination. Returns `None` if some destination is unreachable within the
/// hop limit. The result never costs more than the transit set plus the pool.
pub fn forest_from_pool(
    instance: &EddInstance,
    transit: &BTreeSet<NodeId>,
    pool: impl IntoIterator<Item = (NodeId, NodeId)>,
) -> Option<EddSolution> {
    let mut adj: BTreeMap<NodeId, BTreeSet<NodeId>> = BTreeMap::new();
    for (u, v) in pool {
        let (a, b) = undirected(u, v);
        adj.entry(a).or_default().insert(b);
        adj.entry(b).or_default().insert(a);
    }
    let mut parents: BTreeMap<NodeId, NodeId> = BTreeMap::new();
    let mut hops: BTreeMap<NodeId, u32> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for &s in transit {
        parents.insert(s, CLOUD);
        hops.insert(s, 0);
        queue.push_back(s);
    }
    while let Some(u) = queue.pop_front() {
        let h = hops[&u];
        if h >= instance.d_limit() {
            continue;
        }
        if let Some(next) = adj.get(&u) {
            for &v in next {
                if let std::collections::btree_map::Entry::Vacant(e) = parents.entry(v) {
                    e.insert(u);
                    hops.insert(v, h + 1);
                    queue.push_back(v);
                }
            }
        }
    }
    if !instance.destinations().iter().all(|r| parents.contains_key(r)) {
        return None;
    }
    let pruned = prune_parents(&parents, instance.destinations());
    Some(EddSolution::from_parents(instance, &pruned))
}
