//! Exact solvers for small instances.
//!
//! [`exact_solve`] computes a provably cheapest plan with a depth-layered
//! Dreyfus-Wagner recursion. `best[S][h][v]` is the cheapest subtree rooted
//! at `v` that reaches every destination in `S` within `h` E2E hops; it is
//! built either by merging two subtrees at `v` or by stepping one link down
//! from `v` into a subtree with one hop less. The top level splits the
//! destination set among transit servers, each paying its C2E cost plus
//! `best[group][d_limit][transit]`. Because hop layers are explicit, the
//! recursion never needs a shortest-path relaxation, and every value is a
//! lower bound on any plan with the same shape: the minimum over all shapes is
//! the optimum of the 0-1 model.

mod steiner_oracle;

pub use steiner_oracle::{brute_force_steiner, MAX_STEINER_CANDIDATES};

use std::collections::BTreeSet;

use thiserror::Error;

use crate::graph::{forest_from_pool, EddInstance, EddSolution, NodeId};

/// Default work budget, in recursion transitions (roughly one second of CPU).
pub const DEFAULT_BUDGET: u64 = 100_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ExactError {
    #[error("exact search needs about {required} transitions, budget is {budget}")]
    BudgetExceeded { required: u128, budget: u64 },
    #[error("brute-force Steiner search limited to {limit} non-terminal nodes, got {actual}")]
    TooLarge { limit: usize, actual: usize },
    #[error("at least one terminal is required")]
    NoTerminals,
}

/// Upper bound on the number of transitions [`exact_solve`] evaluates.
pub fn estimated_work(instance: &EddInstance) -> u128 {
    let k = instance.destinations().len() as u32;
    let n = instance.graph().node_count() as u128;
    let layers = u128::from(hop_layers(instance)) + 1;
    let (Some(pow3), Some(pow2)) = (3u128.checked_pow(k), 2u128.checked_pow(k)) else {
        return u128::MAX;
    };
    let merges = pow3 / 2 * layers * n;
    let steps = pow2 * layers * 2 * instance.graph().edge_count() as u128;
    let top = pow3 / 2 + pow2 * n;
    merges + steps + top
}

// Hop limits beyond N - 1 cannot change the optimum.
fn hop_layers(instance: &EddInstance) -> u32 {
    instance
        .d_limit()
        .min(instance.graph().node_count().saturating_sub(1) as u32)
}

struct Table {
    layers: usize,
    stride: usize,
    best: Vec<f64>,
}

impl Table {
    fn at(&self, mask: usize, h: usize, v: NodeId) -> f64 {
        self.best[(mask * self.layers + h) * self.stride + v]
    }
}

struct Solver<'a> {
    instance: &'a EddInstance,
    terminal_of: Vec<Option<usize>>,
    table: Table,
    group: Vec<f64>,
    group_root: Vec<NodeId>,
    top: Vec<f64>,
}

/// Cheapest feasible plan, or [`ExactError::BudgetExceeded`] when the
/// estimated work exceeds `budget`.
pub fn exact_solve(instance: &EddInstance, budget: u64) -> Result<EddSolution, ExactError> {
    let required = estimated_work(instance);
    if required > u128::from(budget) {
        return Err(ExactError::BudgetExceeded { required, budget });
    }
    let solver = Solver::run(instance);
    let (transit, pool) = solver.reconstruct();
    let solution = forest_from_pool(instance, &transit, pool).expect("reconstructed plan reaches every destination");
    debug_assert!(
        (solution.total_cost() - solver.optimum()).abs() <= 1e-9 * solver.optimum().max(1.0),
        "plan cost {} differs from optimum {}",
        solution.total_cost(),
        solver.optimum()
    );
    Ok(solution)
}

/// Optimal plan cost without building the plan.
pub fn exact_cost(instance: &EddInstance, budget: u64) -> Result<f64, ExactError> {
    let required = estimated_work(instance);
    if required > u128::from(budget) {
        return Err(ExactError::BudgetExceeded { required, budget });
    }
    Ok(Solver::run(instance).optimum())
}

impl<'a> Solver<'a> {
    fn run(instance: &'a EddInstance) -> Self {
        let graph = instance.graph();
        let n = graph.node_count();
        let stride = n + 1;
        let k = instance.destinations().len();
        let layers = hop_layers(instance) as usize + 1;
        let full = 1usize << k;

        let mut terminal_of = vec![None; stride];
        for (i, &r) in instance.destinations().iter().enumerate() {
            terminal_of[r] = Some(i);
        }

        let mut best = vec![f64::INFINITY; full * layers * stride];
        let idx = |mask: usize, h: usize, v: usize| (mask * layers + h) * stride + v;
        for h in 0..layers {
            for v in 1..=n {
                best[idx(0, h, v)] = 0.0;
            }
        }
        for mask in 1..full {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            for h in 0..layers {
                for v in 1..=n {
                    let value = match terminal_of[v] {
                        Some(t) if mask & (1 << t) != 0 => best[idx(mask ^ (1 << t), h, v)],
                        _ => {
                            let mut value = f64::INFINITY;
                            if rest != 0 {
                                let mut s = (rest - 1) & rest;
                                loop {
                                    let cand = best[idx(low | s, h, v)] + best[idx(rest ^ s, h, v)];
                                    if cand < value {
                                        value = cand;
                                    }
                                    if s == 0 {
                                        break;
                                    }
                                    s = (s - 1) & rest;
                                }
                            }
                            if h > 0 {
                                for &u in graph.neighbors(v) {
                                    let cand = instance.e2e_cost(v, u) + best[idx(mask, h - 1, u)];
                                    if cand < value {
                                        value = cand;
                                    }
                                }
                            }
                            value
                        }
                    };
                    best[idx(mask, h, v)] = value;
                }
            }
        }

        let table = Table { layers, stride, best };
        let top_layer = layers - 1;
        let mut group = vec![f64::INFINITY; full];
        let mut group_root = vec![0; full];
        for (mask, (g, root)) in group.iter_mut().zip(group_root.iter_mut()).enumerate().skip(1) {
            for s in graph.nodes() {
                let cand = instance.c2e_cost(s) + table.at(mask, top_layer, s);
                if cand < *g {
                    *g = cand;
                    *root = s;
                }
            }
        }
        let mut top = vec![f64::INFINITY; full];
        top[0] = 0.0;
        for mask in 1..full {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut s = rest;
            loop {
                let cand = group[low | s] + top[rest ^ s];
                if cand < top[mask] {
                    top[mask] = cand;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & rest;
            }
        }

        Solver {
            instance,
            terminal_of,
            table,
            group,
            group_root,
            top,
        }
    }

    fn optimum(&self) -> f64 {
        self.top[self.top.len() - 1]
    }

    fn reconstruct(&self) -> (BTreeSet<NodeId>, Vec<(NodeId, NodeId)>) {
        let mut transit = BTreeSet::new();
        let mut pool = Vec::new();
        let mut mask = self.top.len() - 1;
        while mask != 0 {
            let low = mask & mask.wrapping_neg();
            let rest = mask ^ low;
            let mut s = rest;
            let chosen = loop {
                if self.group[low | s] + self.top[rest ^ s] == self.top[mask] {
                    break low | s;
                }
                assert!(s != 0, "no split reproduces the stored optimum");
                s = (s - 1) & rest;
            };
            let root = self.group_root[chosen];
            transit.insert(root);
            self.trace(chosen, self.table.layers - 1, root, &mut pool);
            mask ^= chosen;
        }
        (transit, pool)
    }

    fn trace(&self, mask: usize, h: usize, v: NodeId, pool: &mut Vec<(NodeId, NodeId)>) {
        if mask == 0 {
            return;
        }
        if let Some(t) = self.terminal_of[v].filter(|&t| mask & (1 << t) != 0) {
            return self.trace(mask ^ (1 << t), h, v, pool);
        }
        let value = self.table.at(mask, h, v);
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        if rest != 0 {
            let mut s = (rest - 1) & rest;
            loop {
                if self.table.at(low | s, h, v) + self.table.at(rest ^ s, h, v) == value {
                    self.trace(low | s, h, v, pool);
                    self.trace(rest ^ s, h, v, pool);
                    return;
                }
                if s == 0 {
                    break;
                }
                s = (s - 1) & rest;
            }
        }
        if h > 0 {
            for &u in self.instance.graph().neighbors(v) {
                if self.instance.e2e_cost(v, u) + self.table.at(mask, h - 1, u) == value {
                    pool.push((v, u));
                    return self.trace(mask, h - 1, u, pool);
                }
            }
        }
        unreachable!("no transition reproduces table entry ({mask}, {h}, {v})");
    }
}
