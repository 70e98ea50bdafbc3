//! Slow, independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use edd_core::graph::{CompleteGraph, EddInstance, Graph, NodeId};
use edd_core::harness::generate_instance;

/// Density that yields exactly `n - 1 + extra` edges.
pub fn delta_for(n: usize, extra: usize) -> f64 {
    (n - 1 + extra) as f64 / n as f64
}

pub fn max_extra(n: usize) -> usize {
    n * (n - 1) / 2 - (n - 1)
}

pub fn instance(n: usize, r: usize, extra: usize, gamma: f64, d_limit: u32, seed: u64) -> EddInstance {
    let extra = extra.min(max_extra(n));
    generate_instance(n, r.clamp(1, n), delta_for(n, extra), gamma, d_limit, seed).expect("feasible parameters")
}

/// Floyd-Warshall hop distances, indexed by node id (0 unused).
pub fn floyd_warshall(graph: &Graph) -> Vec<Vec<u32>> {
    let n = graph.node_count();
    let inf = u32::MAX / 4;
    let mut d = vec![vec![inf; n + 1]; n + 1];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in graph.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 1..=n {
        for i in 1..=n {
            for j in 1..=n {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    d
}

/// Minimum spanning tree weight by decoding every Prüfer sequence.
pub fn prufer_mst(g: &CompleteGraph) -> u64 {
    let k = g.len();
    if k <= 1 {
        return 0;
    }
    if k == 2 {
        return u64::from(g.weight(0, 1));
    }
    let len = k - 2;
    let mut seq = vec![0usize; len];
    let mut best = u64::MAX;
    loop {
        let mut degree = vec![1usize; k];
        for &s in &seq {
            degree[s] += 1;
        }
        let mut total = 0u64;
        for &s in &seq {
            let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
            total += u64::from(g.weight(leaf, s));
            degree[leaf] -= 1;
            degree[s] -= 1;
        }
        let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
        total += u64::from(g.weight(rest[0], rest[1]));
        best = best.min(total);

        let mut i = 0;
        loop {
            if i == len {
                return best;
            }
            seq[i] += 1;
            if seq[i] < k {
                break;
            }
            seq[i] = 0;
            i += 1;
        }
    }
}

fn components_joined(n: usize, edges: &[(NodeId, NodeId)], mask: u64, terminals: &BTreeSet<NodeId>) -> bool {
    let mut adj = vec![Vec::new(); n + 1];
    for (i, &(u, v)) in edges.iter().enumerate() {
        if mask & (1 << i) != 0 {
            adj[u].push(v);
            adj[v].push(u);
        }
    }
    let start = *terminals.iter().next().unwrap();
    let mut seen = vec![false; n + 1];
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    terminals.iter().all(|&t| seen[t])
}

/// Fewest network links connecting all terminals, by enumerating link subsets.
pub fn edge_subset_steiner(graph: &Graph, terminals: &BTreeSet<NodeId>) -> usize {
    let edges: Vec<_> = graph.edges().collect();
    assert!(edges.len() <= 20, "oracle limited to 20 links");
    (0u64..1 << edges.len())
        .filter(|&mask| components_joined(graph.node_count(), &edges, mask, terminals))
        .map(|mask| mask.count_ones() as usize)
        .min()
        .unwrap()
}

/// Optimal plan cost by enumerating every transit set `S` and every link set
/// `F`: the pair is feasible when each destination is within `d_limit` links
/// of `S` using only `F`.
pub fn brute_force_edd(instance: &EddInstance) -> f64 {
    let g = instance.graph();
    let n = g.node_count();
    let edges: Vec<_> = g.edges().collect();
    assert!(n <= 8 && edges.len() <= 12, "oracle limited to tiny graphs");
    let dests: Vec<NodeId> = instance.destinations().iter().copied().collect();
    let d_limit = instance.d_limit() as usize;
    let mut best = f64::INFINITY;
    for s_mask in 1u32..(1 << n) {
        let c2e: f64 = (1..=n)
            .filter(|v| s_mask & (1 << (v - 1)) != 0)
            .map(|v| instance.c2e_cost(v))
            .sum();
        if c2e >= best {
            continue;
        }
        for f_mask in 0u32..(1 << edges.len()) {
            let e2e: f64 = edges
                .iter()
                .enumerate()
                .filter(|(i, _)| f_mask & (1 << i) != 0)
                .map(|(_, &(u, v))| instance.e2e_cost(u, v))
                .sum();
            if c2e + e2e >= best {
                continue;
            }
            let mut adj = vec![Vec::new(); n + 1];
            for (i, &(u, v)) in edges.iter().enumerate() {
                if f_mask & (1 << i) != 0 {
                    adj[u].push(v);
                    adj[v].push(u);
                }
            }
            let mut dist = vec![usize::MAX; n + 1];
            let mut queue = VecDeque::new();
            for (v, d) in dist.iter_mut().enumerate().skip(1) {
                if s_mask & (1 << (v - 1)) != 0 {
                    *d = 0;
                    queue.push_back(v);
                }
            }
            while let Some(u) = queue.pop_front() {
                for &v in &adj[u] {
                    if dist[v] == usize::MAX {
                        dist[v] = dist[u] + 1;
                        queue.push_back(v);
                    }
                }
            }
            if dests.iter().all(|&r| dist[r] <= d_limit) {
                best = c2e + e2e;
            }
        }
    }
    best
}

/// Same graph with node ids permuted by `perm` (`perm[old - 1]` is the new id).
pub fn relabel(instance: &EddInstance, perm: &[NodeId]) -> EddInstance {
    let g = instance.graph();
    let edges: Vec<_> = g.edges().map(|(u, v)| (perm[u - 1], perm[v - 1])).collect();
    let graph = Graph::new(g.node_count(), &edges).unwrap();
    let dests: Vec<NodeId> = instance.destinations().iter().map(|&r| perm[r - 1]).collect();
    EddInstance::new(graph, dests, instance.gamma(), instance.d_limit()).unwrap()
}
