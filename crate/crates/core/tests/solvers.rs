mod common;

use common::labeled_graphs;
use mdskit::*;

#[test]
fn exact_and_fpt_match_brute_force_on_small_graphs() {
    let lim = OracleLimits::default();
    for n in 1..=5 {
        for g in labeled_graphs(n) {
            let opt = brute_force_mds(&g, lim).unwrap().size();
            let exact = solve_exact(&g, ExactOptions::default());
            assert_eq!(exact.solution.size(), opt, "exact on {:?}", g.edges());
            assert!(validate_mds(&g, &exact.solution).unwrap().valid);
            assert_eq!(exact.stats.invalid_leaves, 0);
            for k in 0..=n {
                let out = solve_fpt(&g, k, FptOptions::default());
                assert_eq!(out.solution.is_some(), k >= opt, "fpt k={k} on {:?}", g.edges());
                if let Some(s) = out.solution {
                    assert!(s.size() <= k);
                    assert!(validate_mds(&g, &s).unwrap().valid);
                }
                assert_eq!(out.stats.invalid_leaves, 0);
            }
        }
    }
}
