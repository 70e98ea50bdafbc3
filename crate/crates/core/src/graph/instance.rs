use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{undirected, Graph, GraphError, NodeId};

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("field `edges`: {0}")]
    Graph(#[from] GraphError),
}

fn field_error(field: impl Into<String>, message: impl Into<String>) -> InstanceError {
    InstanceError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// Per-transfer costs. Missing entries fall back to the uniform model:
/// one unit per E2E hop and `gamma` per C2E transfer.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CostModel {
    e2e: BTreeMap<(NodeId, NodeId), f64>,
    c2e: BTreeMap<NodeId, f64>,
}

impl CostModel {
    /// Overrides the cost of the link `u-v`. Checked when the instance is built.
    pub fn with_e2e(mut self, u: NodeId, v: NodeId, cost: f64) -> Self {
        self.e2e.insert(undirected(u, v), cost);
        self
    }

    /// Overrides the C2E cost of `v`. Checked when the instance is built.
    pub fn with_c2e(mut self, v: NodeId, cost: f64) -> Self {
        self.c2e.insert(v, cost);
        self
    }

    pub fn is_uniform(&self) -> bool {
        self.e2e.is_empty() && self.c2e.is_empty()
    }
}

/// One EDD problem: network, destination set, C2E/E2E cost ratio and hop limit.
#[derive(Debug, Clone, PartialEq)]
pub struct EddInstance {
    graph: Graph,
    destinations: BTreeSet<NodeId>,
    gamma: f64,
    d_limit: u32,
    costs: CostModel,
}

impl EddInstance {
    pub fn new(
        graph: Graph,
        destinations: impl IntoIterator<Item = NodeId>,
        gamma: f64,
        d_limit: u32,
    ) -> Result<Self, InstanceError> {
        Self::with_costs(graph, destinations, gamma, d_limit, CostModel::default())
    }

    pub fn with_costs(
        graph: Graph,
        destinations: impl IntoIterator<Item = NodeId>,
        gamma: f64,
        d_limit: u32,
        costs: CostModel,
    ) -> Result<Self, InstanceError> {
        let destinations: BTreeSet<NodeId> = destinations.into_iter().collect();
        if destinations.is_empty() {
            return Err(field_error("destinations", "at least one destination is required"));
        }
        if let Some(&bad) = destinations.iter().find(|&&v| !graph.contains(v)) {
            return Err(field_error(
                "destinations",
                format!("node {bad} is outside 1..={}", graph.node_count()),
            ));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(field_error(
                "gamma",
                format!("must be a positive finite number, got {gamma}"),
            ));
        }
        for (&(u, v), &c) in &costs.e2e {
            if !graph.has_edge(u, v) {
                return Err(field_error(
                    "e2e_costs",
                    format!("({u}, {v}) is not an edge of the graph"),
                ));
            }
            if !(c.is_finite() && c > 0.0) {
                return Err(field_error(
                    "e2e_costs",
                    format!("cost of ({u}, {v}) must be positive, got {c}"),
                ));
            }
        }
        for (&v, &c) in &costs.c2e {
            if !graph.contains(v) {
                return Err(field_error("c2e_costs", format!("node {v} is outside the graph")));
            }
            if !(c.is_finite() && c > 0.0) {
                return Err(field_error(
                    "c2e_costs",
                    format!("cost of node {v} must be positive, got {c}"),
                ));
            }
        }
        Ok(EddInstance {
            graph,
            destinations,
            gamma,
            d_limit,
            costs,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn destinations(&self) -> &BTreeSet<NodeId> {
        &self.destinations
    }

    pub fn is_destination(&self, v: NodeId) -> bool {
        self.destinations.contains(&v)
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Maximum number of E2E hops between a transit server and a destination.
    pub fn d_limit(&self) -> u32 {
        self.d_limit
    }

    /// Depth budget measured from the cloud, counting the C2E hop.
    pub fn depth_limit(&self) -> u32 {
        self.d_limit + 1
    }

    pub fn costs(&self) -> &CostModel {
        &self.costs
    }

    pub fn c2e_cost(&self, v: NodeId) -> f64 {
        self.costs.c2e.get(&v).copied().unwrap_or(self.gamma)
    }

    pub fn e2e_cost(&self, u: NodeId, v: NodeId) -> f64 {
        self.costs.e2e.get(&undirected(u, v)).copied().unwrap_or(1.0)
    }

    /// Destination density |R| / |V|.
    pub fn rho(&self) -> f64 {
        self.destinations.len() as f64 / self.graph.node_count() as f64
    }

    /// Edge density |E| / |V|.
    pub fn delta(&self) -> f64 {
        self.graph.edge_count() as f64 / self.graph.node_count() as f64
    }

    /// Same instance with a different hop limit.
    pub fn with_d_limit(&self, d_limit: u32) -> Self {
        EddInstance {
            d_limit,
            ..self.clone()
        }
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile {
            n: self.graph.node_count(),
            edges: self.graph.edges().map(|(u, v)| [u, v]).collect(),
            destinations: self.destinations.iter().copied().collect(),
            gamma: self.gamma,
            d_limit: self.d_limit,
            e2e_costs: self.costs.e2e.iter().map(|(&(u, v), &c)| (u, v, c)).collect(),
            c2e_costs: self.costs.c2e.iter().map(|(&v, &c)| (v, c)).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("instance serialization is infallible")
    }

    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        let file: InstanceFile = serde_json::from_str(text).map_err(|e| InstanceError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        file.into_instance()
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

/// On-disk instance document (JSON).
///
/// ```json
/// { "n": 3, "edges": [[1, 2], [2, 3]], "destinations": [3], "gamma": 20.0, "d_limit": 2 }
/// ```
///
/// `e2e_costs` (`[u, v, cost]` triples) and `c2e_costs` (`[v, cost]` pairs)
/// are optional overrides of the uniform cost model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub n: usize,
    pub edges: Vec<[NodeId; 2]>,
    pub destinations: Vec<NodeId>,
    pub gamma: f64,
    pub d_limit: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub e2e_costs: Vec<(NodeId, NodeId, f64)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub c2e_costs: Vec<(NodeId, f64)>,
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<EddInstance, InstanceError> {
        let edges: Vec<(NodeId, NodeId)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        let graph = Graph::new(self.n, &edges)?;
        let mut seen = BTreeSet::new();
        for (i, &d) in self.destinations.iter().enumerate() {
            if !seen.insert(d) {
                return Err(field_error(format!("destinations[{i}]"), format!("duplicate node {d}")));
            }
        }
        let mut costs = CostModel::default();
        for (i, &(u, v, c)) in self.e2e_costs.iter().enumerate() {
            if costs.e2e.insert(undirected(u, v), c).is_some() {
                return Err(field_error(
                    format!("e2e_costs[{i}]"),
                    format!("duplicate entry for ({u}, {v})"),
                ));
            }
        }
        for (i, &(v, c)) in self.c2e_costs.iter().enumerate() {
            if costs.c2e.insert(v, c).is_some() {
                return Err(field_error(
                    format!("c2e_costs[{i}]"),
                    format!("duplicate entry for node {v}"),
                ));
            }
        }
        EddInstance::with_costs(graph, self.destinations, self.gamma, self.d_limit, costs)
    }
}
