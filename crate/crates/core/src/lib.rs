//! Edge data distribution (EDD): push application data from the cloud to a
//! set of destination edge servers within a hop limit, paying `gamma` per
//! cloud-to-edge transfer and one unit per edge-to-edge hop.
//!
//! * [`graph`]: network, instances, plans, shortest paths, MST, validation.
//! * [`steiner`]: triple-contraction Steiner tree estimation.
//! * [`nste`]: turns the Steiner tree into a depth-limited cloud-rooted plan.
//! * [`baselines`]: greedy connectivity and random transit selection.
//! * [`exact`]: optimal plans for small instances, plus a Steiner oracle.
//! * [`harness`]: dataset loading, random instances, parameter sweeps.

pub mod baselines;
pub mod exact;
pub mod fixtures;
pub mod graph;
pub mod harness;
pub mod nste;
pub mod steiner;

pub use graph::{validate_solution, EddInstance, EddSolution, Graph, NodeId, CLOUD};
pub use harness::Algorithm;
