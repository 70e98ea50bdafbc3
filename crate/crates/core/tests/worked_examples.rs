use std::collections::BTreeSet;

use edd_core::baselines::greedy_connectivity;
use edd_core::exact::{brute_force_steiner, exact_solve, DEFAULT_BUDGET};
use edd_core::fixtures;
use edd_core::graph::{all_pairs_bfs, metric_closure, mst, validate_solution, CompleteGraph, EddSolution, CLOUD};
use edd_core::nste::{self, root_at_cloud};
use edd_core::steiner::{enumerate_triples, steiner_approx};

#[test]
fn ten_node_distances_and_closure() {
    let inst = fixtures::ten_node();
    let sp = all_pairs_bfs(inst.graph());
    assert_eq!(sp.path(2, 6), vec![2, 8, 6]);
    assert_eq!(sp.path(6, 9), vec![6, 5, 9]);
    let terminals: Vec<_> = inst.destinations().iter().copied().collect();
    let closure = metric_closure(inst.graph(), &terminals).unwrap();
    assert_eq!(mst(&CompleteGraph::from_closure(&closure)).unwrap().total, 6);
    assert_eq!(enumerate_triples(&terminals).len(), 35);
}

#[test]
fn ten_node_pipeline_end_to_end() {
    let inst = fixtures::ten_node();
    let st = steiner_approx(inst.graph(), inst.destinations()).unwrap();
    assert_eq!(st.cost(), 6);
    assert_eq!(brute_force_steiner(inst.graph(), inst.destinations()).unwrap().1, 6);
    let rooted = root_at_cloud(&st, inst.graph()).unwrap();
    assert_eq!(rooted.attach, 2);

    let plan = nste::solve(&inst);
    assert_eq!(plan.transit, BTreeSet::from([2, 5]));
    let parents = plan.parents();
    let children: BTreeSet<(usize, usize)> = parents
        .iter()
        .filter(|(_, &p)| p != CLOUD)
        .map(|(&v, &p)| (p, v))
        .collect();
    assert_eq!(children, BTreeSet::from([(2, 3), (2, 4), (2, 8), (5, 6), (5, 9)]));
    assert_eq!(plan.total_cost(), 45.0);
}

#[test]
fn ten_node_all_methods_agree_at_one_hop() {
    let inst = fixtures::ten_node();
    let optimal = fixtures::ten_node_optimum(&inst);
    assert_eq!(validate_solution(&inst, &optimal), Ok(()));
    assert_eq!(optimal.total_cost(), 45.0);
    assert_eq!(exact_solve(&inst, DEFAULT_BUDGET).unwrap().total_cost(), 45.0);
    assert_eq!(greedy_connectivity(&inst).total_cost(), 45.0);
}

#[test]
fn ten_node_single_hop_limit_costs_gamma_per_destination() {
    let inst = fixtures::ten_node_with(0, 20.0);
    for plan in [
        nste::solve(&inst),
        exact_solve(&inst, DEFAULT_BUDGET).unwrap(),
        greedy_connectivity(&inst),
    ] {
        assert_eq!(plan.total_cost(), 140.0);
    }
}

#[test]
fn generous_limit_uses_one_transit_and_the_steiner_tree() {
    let inst = fixtures::ten_node_with(9, 20.0);
    let plan = nste::solve(&inst);
    assert_eq!(plan.transit.len(), 1);
    assert_eq!(plan.total_cost(), 20.0 + 6.0);
}

#[test]
fn solutions_survive_a_json_round_trip() {
    let inst = fixtures::nine_node();
    let plan = nste::solve(&inst);
    let back = EddSolution::from_json(&plan.to_json()).unwrap();
    assert_eq!(back, plan);
    assert_eq!(validate_solution(&inst, &back), Ok(()));
}
