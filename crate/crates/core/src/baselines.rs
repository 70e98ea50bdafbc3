//! Reference strategies: greedy connectivity and random transit selection.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::graph::{all_pairs_bfs, forest_from_pool, EddInstance, EddSolution, NodeId, ShortestPaths};

/// Destinations in `unserved` within `d_limit` hops of `v` (including `v`).
fn coverage(paths: &ShortestPaths, instance: &EddInstance, unserved: &BTreeSet<NodeId>, v: NodeId) -> Vec<NodeId> {
    unserved
        .iter()
        .copied()
        .filter(|&r| paths.dist(v, r) <= instance.d_limit())
        .collect()
}

fn serve(
    paths: &ShortestPaths,
    s: NodeId,
    covered: &[NodeId],
    pool: &mut BTreeSet<(NodeId, NodeId)>,
    unserved: &mut BTreeSet<NodeId>,
) {
    for &r in covered {
        pool.extend(paths.path_edges(s, r));
        unserved.remove(&r);
    }
}

fn finish(instance: &EddInstance, transit: &BTreeSet<NodeId>, pool: BTreeSet<(NodeId, NodeId)>) -> EddSolution {
    forest_from_pool(instance, transit, pool).expect("every destination lies within d_limit of a chosen transit")
}

pub fn greedy_connectivity(instance: &EddInstance) -> EddSolution {
    greedy_with_paths(instance, &all_pairs_bfs(instance.graph()))
}

/// Repeatedly promotes the node that covers the most unserved destinations.
/// Ties go to the candidate closest to what it covers (summed hops), then to
/// the smallest id.
pub fn greedy_with_paths(instance: &EddInstance, paths: &ShortestPaths) -> EddSolution {
    let mut unserved = instance.destinations().clone();
    let mut transit = BTreeSet::new();
    let mut pool = BTreeSet::new();
    while !unserved.is_empty() {
        let (_, _, s, covered) = instance
            .graph()
            .nodes()
            .map(|v| {
                let covered = coverage(paths, instance, &unserved, v);
                let hops: u64 = covered.iter().map(|&r| u64::from(paths.dist(v, r))).sum();
                (covered.len(), std::cmp::Reverse(hops), std::cmp::Reverse(v), covered)
            })
            .max_by(|a, b| (a.0, a.1, a.2).cmp(&(b.0, b.1, b.2)))
            .map(|(n, h, std::cmp::Reverse(v), c)| (n, h, v, c))
            .expect("graph has nodes");
        transit.insert(s);
        serve(paths, s, &covered, &mut pool, &mut unserved);
    }
    finish(instance, &transit, pool)
}

pub fn random_strategy(instance: &EddInstance, seed: u64) -> EddSolution {
    random_with_paths(instance, &all_pairs_bfs(instance.graph()), seed)
}

/// Draws candidate transit servers uniformly without replacement until every
/// destination is served. Candidates that serve nobody new are discarded.
pub fn random_with_paths(instance: &EddInstance, paths: &ShortestPaths, seed: u64) -> EddSolution {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = instance.graph().nodes().collect();
    order.shuffle(&mut rng);

    let mut unserved = instance.destinations().clone();
    let mut transit = BTreeSet::new();
    let mut pool = BTreeSet::new();
    for v in order {
        if unserved.is_empty() {
            break;
        }
        let covered = coverage(paths, instance, &unserved, v);
        if covered.is_empty() {
            continue;
        }
        transit.insert(v);
        serve(paths, v, &covered, &mut pool, &mut unserved);
    }
    finish(instance, &transit, pool)
}
