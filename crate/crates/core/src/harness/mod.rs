//! Experiment tooling: dataset ingestion, instance generation and sweeps.

mod eua;
mod generate;
mod sweep;

pub use eua::{instance_from_points, load_eua, proximity_graph, EuaError, GeoPoint};
pub use generate::{generate_instance, GenerateError};
pub use sweep::{read_rows, run_sweep, summarize, write_rows, Status, SweepConfig, SweepError, SweepRow, CSV_HEADER};

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::exact::{exact_solve, ExactError};
use crate::graph::{all_pairs_bfs, EddInstance, EddSolution};
use crate::{baselines, nste};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Exact,
    Nste,
    Greedy,
    Random,
}

impl Algorithm {
    pub const ALL: [Algorithm; 4] = [Algorithm::Exact, Algorithm::Nste, Algorithm::Greedy, Algorithm::Random];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Nste => "nste",
            Algorithm::Greedy => "greedy",
            Algorithm::Random => "random",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| format!("unknown algorithm `{s}` (expected exact, nste, greedy or random)"))
    }
}

/// Runs one algorithm. Only `exact` can fail, and only on its work budget.
pub fn run_algorithm(
    instance: &EddInstance,
    algorithm: Algorithm,
    seed: u64,
    exact_budget: u64,
) -> Result<EddSolution, ExactError> {
    match algorithm {
        Algorithm::Exact => exact_solve(instance, exact_budget),
        Algorithm::Nste => Ok(
            nste::solve_detailed(instance, Arc::new(all_pairs_bfs(instance.graph())))
                .expect("valid instances have destinations")
                .solution,
        ),
        Algorithm::Greedy => Ok(baselines::greedy_connectivity(instance)),
        Algorithm::Random => Ok(baselines::random_strategy(instance, seed)),
    }
}
