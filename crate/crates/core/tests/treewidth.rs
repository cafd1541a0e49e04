mod common;

use common::{arb_graph, labeled_graphs};
use mdskit::*;
use proptest::prelude::*;

#[test]
fn treewidth_solver_matches_brute_force_on_small_graphs() {
    for n in 1..=5 {
        for g in labeled_graphs(n) {
            let opt = brute_force_mds(&g, OracleLimits::default()).unwrap().size();
            let out = solve_treewidth(&g, None).unwrap();
            assert_eq!(out.solution.size(), opt, "{:?}", g.edges());
            assert!(validate_mds(&g, &out.solution).unwrap().valid);
        }
    }
}

#[test]
fn distance2_of_incidence_graph_is_the_mds_optimum() {
    let wide = OracleLimits { max_n_subset: 10, ..OracleLimits::default() };
    for n in 1..=5 {
        for g in labeled_graphs(n) {
            let opt = brute_force_mds(&g, OracleLimits::default()).unwrap().size();
            let inc = incidence_graph(&g);
            let set = distance2_brute(&inc.graph, wide).unwrap();
            assert_eq!(set.len(), opt, "{:?}", g.edges());
            assert!(validate_mds(&g, &inc.to_solution(&set)).unwrap().valid);
        }
    }
}

#[test]
fn path_table() {
    for n in 1..=15 {
        let g = Graph::path(n);
        let opt = partition_oracle(&g, OracleLimits::default()).unwrap().size();
        assert_eq!(solve_treewidth(&g, None).unwrap().solution.size(), opt, "P{n}");
    }
}

fn shuffled(n: usize, keys: &[u32]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| (keys[v % keys.len()], v));
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn dp_matches_distance2_brute(g in arb_graph(8), keys in proptest::collection::vec(any::<u32>(), 8)) {
        let td = elimination_decomposition(&g, &shuffled(g.n(), &keys)).unwrap();
        td.validate(&g).unwrap();
        let nd = make_nice_decomposition(&td, &g).unwrap();
        nd.validate(&g).unwrap();
        prop_assert_eq!(nd.width(), td.width());
        let (set, stats) = distance2_dp_with_stats(&g, &nd).unwrap();
        let brute = distance2_brute(&g, OracleLimits::default()).unwrap();
        prop_assert_eq!(set.len(), brute.len());
        prop_assert!(stats.max_table <= 5usize.pow(td.width() as u32 + 1));
        let ball_cover = (0..g.n()).all(|v| set.iter().any(|&s| {
            s == v || g.has_edge(s, v) || g.neighbors(s).iter().any(|&w| g.has_edge(w, v))
        }));
        prop_assert!(ball_cover);
    }

    #[test]
    fn lift_keeps_validity_and_width(g in arb_graph(8), keys in proptest::collection::vec(any::<u32>(), 8)) {
        let td = elimination_decomposition(&g, &shuffled(g.n(), &keys)).unwrap();
        let lifted = lift_to_incidence(&td, &g).unwrap();
        lifted.validate(&incidence_graph(&g).graph).unwrap();
        prop_assert!(lifted.width() <= td.width().max(2));
    }

    #[test]
    fn given_decomposition_gives_the_optimum(g in arb_graph(7), keys in proptest::collection::vec(any::<u32>(), 7)) {
        let td = elimination_decomposition(&g, &shuffled(g.n(), &keys)).unwrap();
        let out = solve_treewidth(&g, Some(&td)).unwrap();
        prop_assert!(validate_mds(&g, &out.solution).unwrap().valid);
        prop_assert_eq!(out.solution.size(), brute_force_mds(&g, OracleLimits::default()).unwrap().size());
    }
}
