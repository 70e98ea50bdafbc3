//! Built-in reference instances.

use std::collections::BTreeMap;

use crate::graph::{EddInstance, EddSolution, Graph, NodeId, CLOUD};

/// Links of the ten-server reference network.
pub const TEN_NODE_EDGES: [(NodeId, NodeId); 14] = [
    (1, 4),
    (1, 10),
    (2, 3),
    (2, 4),
    (2, 8),
    (3, 5),
    (3, 9),
    (4, 9),
    (5, 6),
    (5, 9),
    (5, 10),
    (6, 8),
    (7, 8),
    (7, 10),
];

pub const TEN_NODE_DESTINATIONS: [NodeId; 7] = [2, 3, 4, 5, 6, 8, 9];

/// Links of the nine-server hop-limit illustration.
pub const NINE_NODE_EDGES: [(NodeId, NodeId); 11] = [
    (1, 2),
    (1, 4),
    (1, 5),
    (2, 3),
    (3, 8),
    (4, 6),
    (4, 8),
    (5, 6),
    (6, 7),
    (7, 9),
    (8, 9),
];

pub const NINE_NODE_DESTINATIONS: [NodeId; 7] = [1, 2, 3, 4, 5, 6, 8];

/// Ten-server network with seven destinations, `d_limit = 1`, `gamma = 20`.
pub fn ten_node() -> EddInstance {
    ten_node_with(1, 20.0)
}

pub fn ten_node_with(d_limit: u32, gamma: f64) -> EddInstance {
    let graph = Graph::new(10, &TEN_NODE_EDGES).expect("fixture graph is valid");
    EddInstance::new(graph, TEN_NODE_DESTINATIONS, gamma, d_limit).expect("fixture instance is valid")
}

/// Nine-server network, `d_limit = 2`, `gamma = 20`.
pub fn nine_node() -> EddInstance {
    let graph = Graph::new(9, &NINE_NODE_EDGES).expect("fixture graph is valid");
    EddInstance::new(graph, NINE_NODE_DESTINATIONS, 20.0, 2).expect("fixture instance is valid")
}

/// The known optimum of [`ten_node`]: transit servers 8 and 9.
pub fn ten_node_optimum(instance: &EddInstance) -> EddSolution {
    let parents: BTreeMap<NodeId, NodeId> =
        BTreeMap::from([(8, CLOUD), (9, CLOUD), (2, 8), (6, 8), (3, 9), (4, 9), (5, 9)]);
    EddSolution::from_parents(instance, &parents)
}

/// All built-in instances by name.
pub fn all() -> Vec<(&'static str, EddInstance)> {
    vec![("ten_node", ten_node()), ("nine_node", nine_node())]
}
