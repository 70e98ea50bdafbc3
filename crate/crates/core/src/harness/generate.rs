use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{EddInstance, Graph, InstanceError, NodeId};

#[derive(Debug, Error)]
pub enum GenerateError {
    #[error("need at least one node")]
    NoNodes,
    #[error("destination count {r_count} must lie in 1..={n}")]
    DestinationCount { r_count: usize, n: usize },
    #[error("edge density {delta} gives {edges} edges; a connected simple graph on {n} nodes needs {min}..={max}")]
    Density {
        delta: f64,
        n: usize,
        edges: usize,
        min: usize,
        max: usize,
    },
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

/// Target edge count for density `delta` on `n` nodes.
pub(crate) fn edge_target(n: usize, delta: f64) -> usize {
    // tolerance absorbs products such as 1.4 * 10 landing just below 14
    (delta * n as f64 + 1e-9).floor().max(0.0) as usize
}

/// Random connected instance: a random recursive spanning tree plus uniformly
/// chosen extra links up to `floor(delta * n)` edges, and `r_count`
/// destinations sampled without replacement. Deterministic per `seed`.
pub fn generate_instance(
    n: usize,
    r_count: usize,
    delta_target: f64,
    gamma: f64,
    d_limit: u32,
    seed: u64,
) -> Result<EddInstance, GenerateError> {
    if n == 0 {
        return Err(GenerateError::NoNodes);
    }
    if r_count == 0 || r_count > n {
        return Err(GenerateError::DestinationCount { r_count, n });
    }
    let edges_wanted = edge_target(n, delta_target);
    let (min, max) = (n - 1, n * (n - 1) / 2);
    if !(min..=max).contains(&edges_wanted) {
        return Err(GenerateError::Density {
            delta: delta_target,
            n,
            edges: edges_wanted,
            min,
            max,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<NodeId> = (1..=n).collect();
    order.shuffle(&mut rng);
    let mut adjacent = vec![false; (n + 1) * (n + 1)];
    let mut edges = Vec::with_capacity(edges_wanted);
    for i in 1..n {
        let (u, v) = (order[i], order[rng.gen_range(0..i)]);
        adjacent[u * (n + 1) + v] = true;
        adjacent[v * (n + 1) + u] = true;
        edges.push((u.min(v), u.max(v)));
    }
    let extra = edges_wanted - (n - 1);
    if extra > 0 {
        let mut free: Vec<(NodeId, NodeId)> = Vec::new();
        for u in 1..=n {
            for v in (u + 1)..=n {
                if !adjacent[u * (n + 1) + v] {
                    free.push((u, v));
                }
            }
        }
        let (picked, _) = free.partial_shuffle(&mut rng, extra);
        edges.extend_from_slice(picked);
    }
    edges.sort_unstable();

    let graph = Graph::new(n, &edges).map_err(InstanceError::from)?;
    let nodes: Vec<NodeId> = (1..=n).collect();
    let destinations: Vec<NodeId> = nodes.choose_multiple(&mut rng, r_count).copied().collect();
    Ok(EddInstance::new(graph, destinations, gamma, d_limit)?)
}
