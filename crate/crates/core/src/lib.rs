//! Solvers, validators and instance generators for Mixed Dominating Set.

pub mod covers;
pub mod decomposition;
pub mod exact;
pub mod format;
pub mod fpt;
pub mod error;
pub mod generate;
pub mod graph;
pub mod lowerbound;
pub mod matching;
pub mod nice;
pub mod oracle;
pub mod solution;
pub mod transform;
pub mod treewidth;

pub use decomposition::{elimination_decomposition, heuristic_decomposition, lift_to_incidence, TreeDecomposition};
pub use covers::{is_minimal_vertex_cover, minimal_vertex_covers, MinimalVertexCovers};
pub use exact::{
    complete_exact, expand, measure_l, select_rule, solve_exact, ExactOptions, ExactOutcome,
    ExactRuleId, ExactState, ExactStats,
};
pub use error::{Error, Result};
pub use fpt::{
    complete_fpt, expand_fpt, is_compatible, is_feasible_pair, measure_fpt, raw_children_fpt,
    sanity_check, select_rule_fpt, solve_fpt, FptOptions, FptOutcome, FptRuleId, FptState,
    FptStats,
};
pub use graph::Graph;
pub use matching::{cover_vertices_with_edges, max_matching, max_matching_mates, min_edge_cover};
pub use nice::{is_nice, make_nice, sandwiched_minimal_vc, NicePartition};
pub use oracle::{
    brute_force_eds, brute_force_mds, distance2_brute, partition_oracle, IsolatedSplit,
    OracleLimits,
};
pub use solution::{validate_mds, Cost, MixedSolution, ValidationReport, Violation};
pub use transform::{incidence_graph, reduce_eds_to_mds, Incidence, IncidenceGraph};
pub use treewidth::{
    distance2_dp, distance2_dp_with_stats, make_nice_decomposition, solve_treewidth, DpStats,
    NiceDecomposition, NiceKind, NiceNode, TreewidthOutcome, TreewidthStats,
};
pub use generate::{gen_instance, GenKind};
pub use lowerbound::{
    build_seth_instance, build_witness_solution, emit_path_decomposition, normalize_csp,
    random_satisfiable_csp, ConstructionOutput, Constraint, Csp5Instance, EmittedPath, SethParams,
};
pub use format::{read_csp, read_graph, read_solution, read_td, write_csp, write_graph, write_solution, write_td};
