use std::collections::{BTreeMap, VecDeque};

use thiserror::Error;

use super::{plan_cost, EddInstance, EddSolution, NodeId};

/// One broken constraint of a distribution plan.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Violation {
    #[error("node {0} does not exist")]
    UnknownNode(NodeId),
    #[error("no transit server: at least one C2E transfer is required")]
    NoTransit,
    #[error("destination {0} is not visited")]
    DestinationNotVisited(NodeId),
    #[error("transfer {0} -> {1} is not a link of the network")]
    NotAnEdge(NodeId, NodeId),
    #[error("transfer {0} -> {1} touches an unvisited node")]
    EndpointNotVisited(NodeId, NodeId),
    #[error("transit server {0} is not marked visited")]
    TransitNotVisited(NodeId),
    #[error("transit server {node} also receives an E2E transfer from {from}")]
    TransitHasIncoming { node: NodeId, from: NodeId },
    #[error("visited node {0} receives no transfer")]
    MissingIncoming(NodeId),
    #[error("node {node} receives {count} transfers")]
    MultipleIncoming { node: NodeId, count: usize },
    #[error("visited node {0} has no depth label")]
    DepthMissing(NodeId),
    #[error("node {node} has depth {depth} but transit membership is {transit}")]
    TransitDepth { node: NodeId, depth: u32, transit: bool },
    #[error("node {node} has depth {depth}, outside 1..={limit}")]
    DepthOutOfRange { node: NodeId, depth: u32, limit: u32 },
    #[error("transfer {from} -> {to} joins depths {from_depth} and {to_depth}")]
    DepthStep {
        from: NodeId,
        to: NodeId,
        from_depth: u32,
        to_depth: u32,
    },
    #[error("destination {0} is not reachable from a transit server within the hop limit")]
    DestinationUnreachable(NodeId),
    #[error("stored cost {stored} differs from recomputed cost {recomputed}")]
    CostMismatch { stored: f64, recomputed: f64 },
}

fn costs_match(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

/// Checks every plan constraint and reports all violations found.
pub fn validate_solution(instance: &EddInstance, solution: &EddSolution) -> Result<(), Vec<Violation>> {
    let graph = instance.graph();
    let mut out = Vec::new();

    let mentioned = solution
        .transit
        .iter()
        .chain(solution.visited.iter())
        .chain(solution.depth.keys())
        .chain(solution.e2e_edges.iter().flat_map(|(u, v)| [u, v]));
    let mut unknown: Vec<NodeId> = mentioned.copied().filter(|&v| !graph.contains(v)).collect();
    unknown.sort_unstable();
    unknown.dedup();
    if !unknown.is_empty() {
        out.extend(unknown.into_iter().map(Violation::UnknownNode));
        return Err(out);
    }

    if solution.transit.is_empty() {
        out.push(Violation::NoTransit);
    }
    for &r in instance.destinations() {
        if !solution.visited.contains(&r) {
            out.push(Violation::DestinationNotVisited(r));
        }
    }

    let mut incoming: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(u, v) in &solution.e2e_edges {
        if !graph.has_edge(u, v) {
            out.push(Violation::NotAnEdge(u, v));
        }
        if !solution.visited.contains(&u) || !solution.visited.contains(&v) {
            out.push(Violation::EndpointNotVisited(u, v));
        }
        incoming.entry(v).or_default().push(u);
    }
    for &s in &solution.transit {
        if !solution.visited.contains(&s) {
            out.push(Violation::TransitNotVisited(s));
        }
        if let Some(from) = incoming.get(&s) {
            out.extend(from.iter().map(|&f| Violation::TransitHasIncoming { node: s, from: f }));
        }
    }
    for &v in &solution.visited {
        if solution.transit.contains(&v) {
            continue;
        }
        match incoming.get(&v).map_or(0, Vec::len) {
            0 => out.push(Violation::MissingIncoming(v)),
            1 => {}
            count => out.push(Violation::MultipleIncoming { node: v, count }),
        }
    }

    let limit = instance.depth_limit();
    for &v in &solution.visited {
        let Some(&depth) = solution.depth.get(&v) else {
            out.push(Violation::DepthMissing(v));
            continue;
        };
        let transit = solution.transit.contains(&v);
        if (depth == 1) != transit {
            out.push(Violation::TransitDepth {
                node: v,
                depth,
                transit,
            });
        }
        if depth < 1 || depth > limit {
            out.push(Violation::DepthOutOfRange { node: v, depth, limit });
        }
    }
    for &(u, v) in &solution.e2e_edges {
        if let (Some(&du), Some(&dv)) = (solution.depth.get(&u), solution.depth.get(&v)) {
            if dv.checked_sub(du) != Some(1) {
                out.push(Violation::DepthStep {
                    from: u,
                    to: v,
                    from_depth: du,
                    to_depth: dv,
                });
            }
        }
    }

    // reachability along the stored transfers, independent of the depth labels
    let mut children: BTreeMap<NodeId, Vec<NodeId>> = BTreeMap::new();
    for &(u, v) in &solution.e2e_edges {
        children.entry(u).or_default().push(v);
    }
    let mut hops: BTreeMap<NodeId, u32> = BTreeMap::new();
    let mut queue: VecDeque<NodeId> = solution.transit.iter().copied().collect();
    for &s in &solution.transit {
        hops.insert(s, 0);
    }
    while let Some(u) = queue.pop_front() {
        let h = hops[&u];
        if h == instance.d_limit() {
            continue;
        }
        for &v in children.get(&u).map(Vec::as_slice).unwrap_or(&[]) {
            if let std::collections::btree_map::Entry::Vacant(e) = hops.entry(v) {
                e.insert(h + 1);
                queue.push_back(v);
            }
        }
    }
    for &r in instance.destinations() {
        if solution.visited.contains(&r) && !hops.contains_key(&r) {
            out.push(Violation::DestinationUnreachable(r));
        }
    }

    let recomputed = plan_cost(instance, &solution.transit, &solution.e2e_edges);
    let stored = solution.cost;
    if !costs_match(stored.total, recomputed.total)
        || !costs_match(stored.c2e_cost, recomputed.c2e_cost)
        || !costs_match(stored.e2e_cost, recomputed.e2e_cost)
    {
        out.push(Violation::CostMismatch {
            stored: stored.total,
            recomputed: recomputed.total,
        });
    }

    if out.is_empty() {
        Ok(())
    } else {
        Err(out)
    }
}
