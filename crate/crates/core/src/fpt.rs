//! Branching parameterized by the solution size `k`.
//!
//! Step 1 branches until every undecided vertex is dominated by `D_f`
//! (`U* = ∅`), step 2 splits `G[U]` down to maximum degree one, and a
//! matching computation finishes each leaf.

use std::collections::BTreeMap;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{contract, Result};
use crate::graph::Graph;
use crate::matching::max_matching_mates;
use crate::oracle::IsolatedSplit;
use crate::solution::{is_valid, MixedSolution};

/// Rules in priority order. `B7` is only considered once `U*` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum FptRuleId {
    Sanity,
    R1,
    B1,
    B2_1,
    B2_2,
    B3_1,
    B3_2,
    B3_3,
    B4_1,
    B4_2,
    B5,
    B6,
    B7,
}

/// `(D_f, P_f)` with budget `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptState {
    d: FixedBitSet,
    p: FixedBitSet,
    k: usize,
    undecided: FixedBitSet,
    undominated: FixedBitSet,
}

struct Ctx<'g> {
    g: &'g Graph,
    nbrs: Vec<FixedBitSet>,
}

impl<'g> Ctx<'g> {
    fn new(g: &'g Graph) -> Self {
        Ctx { g, nbrs: g.neighbor_sets() }
    }

    fn deg_in(&self, v: usize, set: &FixedBitSet) -> usize {
        self.nbrs[v].intersection_count(set)
    }

    fn nbrs_in(&self, v: usize, set: &FixedBitSet) -> FixedBitSet {
        &self.nbrs[v] & set
    }
}

impl FptState {
    pub fn new(g: &Graph, d: &[usize], p: &[usize], k: usize) -> Result<Self> {
        for &v in d.iter().chain(p) {
            g.check_vertex(v)?;
        }
        let n = g.n();
        let mut st = FptState {
            d: FixedBitSet::with_capacity(n),
            p: FixedBitSet::with_capacity(n),
            k,
            undecided: FixedBitSet::with_capacity(n),
            undominated: FixedBitSet::with_capacity(n),
        };
        d.iter().for_each(|&v| st.d.insert(v));
        p.iter().for_each(|&v| st.p.insert(v));
        if !st.d.is_disjoint(&st.p) {
            return Err(contract("D_f and P_f overlap"));
        }
        st.refresh(&Ctx::new(g));
        Ok(st)
    }

    fn refresh(&mut self, ctx: &Ctx) {
        let (u, ustar) = self.compute_sets(ctx);
        self.undecided = u;
        self.undominated = ustar;
    }

    fn compute_sets(&self, ctx: &Ctx) -> (FixedBitSet, FixedBitSet) {
        let n = ctx.g.n();
        let mut u = FixedBitSet::with_capacity(n);
        u.insert_range(..);
        u.difference_with(&self.d);
        u.difference_with(&self.p);
        let mut ustar = u.clone();
        for v in self.d.ones() {
            ustar.difference_with(&ctx.nbrs[v]);
        }
        (u, ustar)
    }

    pub fn d_f(&self) -> Vec<usize> {
        self.d.ones().collect()
    }

    pub fn p_f(&self) -> Vec<usize> {
        self.p.ones().collect()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `U = V \ (D_f ∪ P_f)`.
    pub fn undecided(&self) -> Vec<usize> {
        self.undecided.ones().collect()
    }

    /// `U* = U \ N(D_f)`.
    pub fn undominated(&self) -> Vec<usize> {
        self.undominated.ones().collect()
    }

    fn child(&self, ctx: &Ctx, add_d: &[usize], add_p: &[usize]) -> Option<Self> {
        let mut st = self.clone();
        for &v in add_d {
            if st.p.contains(v) {
                return None;
            }
            st.d.insert(v);
        }
        for &v in add_p {
            if st.d.contains(v) {
                return None;
            }
            st.p.insert(v);
        }
        st.refresh(ctx);
        Some(st)
    }
}

/// `2k − 2|D_f| − |P_f|`.
pub fn measure_fpt(st: &FptState) -> i64 {
    2 * st.k as i64 - 2 * st.d.count_ones(..) as i64 - st.p.count_ones(..) as i64
}

/// Undecided vertices whose only `D_f`-neighbor is `u`.
fn private_candidates(ctx: &Ctx, st: &FptState, u: usize) -> usize {
    ctx.nbrs_in(u, &st.undecided)
        .ones()
        .filter(|&w| ctx.nbrs[w].intersection_count(&st.d) == 1)
        .count()
}

fn sanity(ctx: &Ctx, st: &FptState) -> bool {
    if measure_fpt(st) < 0 {
        return false;
    }
    st.d.ones().all(|u| private_candidates(ctx, st, u) >= 2)
}

/// Rejects when `|D_f| + |P_f|/2 > k`, or when some `u ∈ D_f` has at most one
/// undecided neighbor that no other `D_f` vertex sees.
pub fn sanity_check(g: &Graph, st: &FptState) -> bool {
    sanity(&Ctx::new(g), st)
}

fn feasible_pair(ctx: &Ctx, st: &FptState, v1: usize, v2: usize) -> bool {
    let side = |a: usize, b: usize| {
        let mut s = ctx.nbrs_in(a, &st.undominated);
        s.difference_with(&ctx.nbrs[b]);
        s.count_ones(..) >= 2
    };
    side(v1, v2) && side(v2, v1)
}

/// Both `v1` and `v2` keep two undominated neighbors the other one misses.
pub fn is_feasible_pair(g: &Graph, st: &FptState, v1: usize, v2: usize) -> bool {
    feasible_pair(&Ctx::new(g), st, v1, v2)
}

fn compatible(ctx: &Ctx, st: &FptState, u: usize, vi: usize) -> bool {
    let mut own = ctx.nbrs_in(vi, &st.undominated);
    for vj in ctx.nbrs_in(u, &st.undecided).ones().filter(|&vj| vj != vi) {
        own.difference_with(&ctx.nbrs[vj]);
    }
    own.count_ones(..) >= 2
}

/// `N_{U*}(vi)` has two vertices adjacent to no other member of `N_U(u)`.
pub fn is_compatible(g: &Graph, st: &FptState, u: usize, vi: usize) -> bool {
    compatible(&Ctx::new(g), st, u, vi)
}

type Moves = Vec<(Vec<usize>, Vec<usize>)>;

fn minus(set: FixedBitSet, x: usize) -> Vec<usize> {
    set.ones().filter(|&w| w != x).collect()
}

fn subset_moves(vs: &[usize], include_empty: bool) -> Moves {
    let start = if include_empty { 0 } else { 1 };
    (start..1usize << vs.len())
        .map(|mask: usize| {
            let mut d = Vec::new();
            let mut p = Vec::new();
            for (i, &v) in vs.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    d.push(v);
                } else {
                    p.push(v);
                }
            }
            (d, p)
        })
        .collect()
}

struct Node {
    u: usize,
    nu: Vec<usize>,
    d_u: usize,
    d_ustar: usize,
}

fn node(ctx: &Ctx, st: &FptState, u: usize) -> Node {
    let nu: Vec<usize> = ctx.nbrs_in(u, &st.undecided).ones().collect();
    let d_ustar = nu.iter().filter(|&&v| st.undominated.contains(v)).count();
    Node { u, d_u: nu.len(), nu, d_ustar }
}

/// `N_U(u)` with `U*` members first (then by id) and the first feasible pair
/// among them moved into the first two positions.
fn ordered_neighbors(ctx: &Ctx, st: &FptState, x: &Node) -> Vec<usize> {
    let mut vs = x.nu.clone();
    vs.sort_by_key(|&v| (!st.undominated.contains(v), v));
    let k = x.d_ustar;
    'scan: for i in 0..k {
        for j in i + 1..k {
            if feasible_pair(ctx, st, vs[i], vs[j]) {
                let (a, b) = (vs[i], vs[j]);
                vs.retain(|&v| v != a && v != b);
                vs.insert(0, b);
                vs.insert(0, a);
                break 'scan;
            }
        }
    }
    vs
}

fn pair_union(ctx: &Ctx, st: &FptState, u: usize, a: usize, b: usize) -> Vec<usize> {
    let mut s = ctx.nbrs_in(a, &st.undecided);
    s.union_with(&ctx.nbrs_in(b, &st.undecided));
    minus(s, u)
}

fn single(ctx: &Ctx, st: &FptState, u: usize, a: usize) -> Vec<usize> {
    minus(ctx.nbrs_in(a, &st.undecided), u)
}

fn guard(ctx: &Ctx, st: &FptState, rule: FptRuleId) -> Option<Moves> {
    use FptRuleId::*;
    let nodes = || st.undominated.ones().map(|u| node(ctx, st, u));
    let pu = |u: usize| (vec![], vec![u]);
    match rule {
        Sanity => None,
        R1 => nodes().find(|x| x.d_u == 0).map(|x| vec![pu(x.u)]),
        B1 => nodes().find(|x| x.d_u == 1).map(|x| vec![pu(x.u), (vec![x.nu[0]], vec![])]),
        B2_1 | B2_2 => nodes()
            .find(|x| x.d_u == 2 && (rule == B2_2 || x.d_ustar <= 1))
            .map(|x| {
                let (u, v1, v2) = (x.u, x.nu[0], x.nu[1]);
                let mut moves = Vec::new();
                if rule == B2_2 {
                    moves.push((vec![u], pair_union(ctx, st, u, v1, v2)));
                }
                moves.push(pu(u));
                moves.extend(subset_moves(&[v1, v2], false));
                moves
            }),
        B3_1 => nodes().find(|x| x.d_u == 3 && x.d_ustar <= 2).map(|x| {
            let mut vs = x.nu.clone();
            vs.sort_by_key(|&v| (!st.undominated.contains(v), v));
            let mut moves = vec![pu(x.u), (vec![x.u], pair_union(ctx, st, x.u, vs[0], vs[1]))];
            moves.extend(subset_moves(&vs, false));
            moves
        }),
        B3_2 => nodes()
            .filter(|x| x.d_u == 3)
            .find(|x| {
                let vs = &x.nu;
                [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .filter(|&&(i, j)| feasible_pair(ctx, st, vs[i], vs[j]))
                    .count()
                    >= 2
            })
            .map(|x| {
                let vs = &x.nu;
                let mut moves: Moves = [(0, 1), (0, 2), (1, 2)]
                    .iter()
                    .map(|&(i, j)| (vec![x.u], pair_union(ctx, st, x.u, vs[i], vs[j])))
                    .collect();
                moves.push(pu(x.u));
                moves.extend(subset_moves(vs, false));
                moves
            }),
        B3_3 => nodes().find(|x| x.d_u == 3).map(|x| {
            let vs = &x.nu;
            let mut moves = vec![
                pu(x.u),
                (vec![x.u], single(ctx, st, x.u, vs[0])),
                (vec![x.u], pair_union(ctx, st, x.u, vs[1], vs[2])),
            ];
            moves.extend(subset_moves(vs, false));
            moves
        }),
        B4_1 => nodes()
            .find(|x| x.d_u == 4 && x.d_ustar == 4 && x.nu.iter().all(|&v| compatible(ctx, st, x.u, v)))
            .map(|x| {
                let vs = &x.nu;
                let mut moves = vec![pu(x.u)];
                for i in 0..4 {
                    for j in i + 1..4 {
                        moves.push((vec![x.u], pair_union(ctx, st, x.u, vs[i], vs[j])));
                    }
                }
                moves.extend(subset_moves(vs, false));
                moves
            }),
        B4_2 | B5 => {
            let pick = if rule == B4_2 {
                nodes().find(|x| x.d_u == 4)
            } else {
                nodes().filter(|x| (5..=8).contains(&x.d_u)).min_by_key(|x| (x.d_u, x.u))
            };
            pick.map(|x| {
                let vs = ordered_neighbors(ctx, st, &x);
                let mut moves = vec![pu(x.u)];
                moves.extend(subset_moves(&vs, false));
                if x.d_ustar >= 2 {
                    moves.push((vec![x.u], pair_union(ctx, st, x.u, vs[0], vs[1])));
                }
                for &vj in vs.iter().take(x.d_ustar).skip(2) {
                    moves.push((vec![x.u], single(ctx, st, x.u, vj)));
                }
                moves
            })
        }
        B6 => nodes().find(|x| x.d_u >= 9).map(|x| {
            let mut moves = vec![(vec![x.u], vec![]), pu(x.u)];
            moves.extend(subset_moves(&x.nu[..9], true));
            moves
        }),
        B7 => st.undecided.ones().find_map(|u| {
            let nu: Vec<usize> = ctx.nbrs_in(u, &st.undecided).ones().collect();
            (nu.len() >= 2).then(|| vec![pu(u), (vec![], nu)])
        }),
    }
}

const BRANCH_ORDER: [FptRuleId; 12] = [
    FptRuleId::R1,
    FptRuleId::B1,
    FptRuleId::B2_1,
    FptRuleId::B2_2,
    FptRuleId::B3_1,
    FptRuleId::B3_2,
    FptRuleId::B3_3,
    FptRuleId::B4_1,
    FptRuleId::B4_2,
    FptRuleId::B5,
    FptRuleId::B6,
    FptRuleId::B7,
];

fn next_rule(ctx: &Ctx, st: &FptState) -> Option<(FptRuleId, Moves)> {
    for rule in BRANCH_ORDER {
        if rule == FptRuleId::B7 {
            debug_assert!(st.undominated.is_clear(), "rules R1..B6 left U* nonempty");
        }
        if let Some(moves) = guard(ctx, st, rule) {
            return Some((rule, moves));
        }
    }
    None
}

fn check_consistent(ctx: &Ctx, st: &FptState) -> Result<()> {
    if st.d.len() != ctx.g.n() || (st.undecided.clone(), st.undominated.clone()) != st.compute_sets(ctx) {
        return Err(contract("state does not belong to this graph"));
    }
    Ok(())
}

/// First applicable rule: `Sanity` when the state is rejected, `None` when
/// `U* = ∅` and `G[U]` has maximum degree at most one.
pub fn select_rule_fpt(g: &Graph, st: &FptState) -> Result<Option<FptRuleId>> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    if !sanity(&ctx, st) {
        return Ok(Some(FptRuleId::Sanity));
    }
    Ok(next_rule(&ctx, st).map(|(r, _)| r))
}

fn children(ctx: &Ctx, st: &FptState, moves: &Moves) -> (Vec<FptState>, u64) {
    let mut rejected = 0;
    let kids = moves
        .iter()
        .filter_map(|(d, p)| st.child(ctx, d, p))
        .filter(|c| {
            let ok = sanity(ctx, c);
            rejected += u64::from(!ok);
            ok
        })
        .collect();
    (kids, rejected)
}

/// Children of `st` under `rule` that survive the sanity check.
pub fn expand_fpt(g: &Graph, st: &FptState, rule: FptRuleId) -> Result<Vec<FptState>> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    if rule == FptRuleId::Sanity || !sanity(&ctx, st) {
        return Err(contract("cannot expand a state rejected by the sanity check"));
    }
    match next_rule(&ctx, st) {
        Some((r, moves)) if r == rule => Ok(children(&ctx, st, &moves).0),
        _ => Err(contract(format!("{rule:?} is not the rule selected for this state"))),
    }
}

/// Rule children before sanity filtering; useful for counting.
pub fn raw_children_fpt(g: &Graph, st: &FptState, rule: FptRuleId) -> Result<usize> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    guard(&ctx, st, rule)
        .map(|m| m.len())
        .ok_or_else(|| contract(format!("{rule:?} does not apply")))
}

fn complete(ctx: &Ctx, st: &FptState) -> Option<MixedSolution> {
    let g = ctx.g;
    let p: Vec<usize> = st.p.ones().collect();
    // targets: P_f vertices first, then one per edge of G[U]
    let mut target = vec![usize::MAX; g.n()];
    for (i, &v) in p.iter().enumerate() {
        target[v] = i;
    }
    let mut x_edges = Vec::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        if st.undecided.contains(a) && st.undecided.contains(b) {
            target[a] = p.len() + x_edges.len();
            target[b] = target[a];
            x_edges.push(e);
        }
    }
    let t = p.len() + x_edges.len();
    let mut rep: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (e, &(a, b)) in g.edges().iter().enumerate() {
        let (ta, tb) = (target[a], target[b]);
        if ta != usize::MAX && tb != usize::MAX && ta != tb {
            rep.entry((ta.min(tb), ta.max(tb))).or_insert(e);
        }
    }
    let h = Graph::from_edges(t, rep.keys().copied()).expect("auxiliary graph is simple");
    let mates = max_matching_mates(&h);
    let mut m = Vec::new();
    for (i, mate) in mates.iter().enumerate() {
        match *mate {
            Some(j) if i < j => m.push(rep[&(i, j)]),
            Some(_) => {}
            None if i < p.len() => {
                let w = *g.neighbors(p[i]).first()?;
                m.push(g.edge_id(p[i], w).unwrap());
            }
            None => m.push(x_edges[i - p.len()]),
        }
    }
    let sol = MixedSolution::new(st.d.ones().collect(), m);
    let nu = mates.iter().filter(|m| m.is_some()).count() / 2;
    debug_assert_eq!(sol.edges().len(), t - nu);
    Some(sol)
}

/// Cheapest `D_f ∪ M` with `P_f ⊆ V(M)` that dominates everything, for a
/// state with `U* = ∅` and `G[U]` of maximum degree one. `None` when some
/// `P_f` vertex has no incident edge at all.
pub fn complete_fpt(g: &Graph, st: &FptState) -> Result<Option<MixedSolution>> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    if !st.undominated.is_clear() {
        return Err(contract("completion requires U* to be empty"));
    }
    if st.undecided.ones().any(|u| ctx.deg_in(u, &st.undecided) > 1) {
        return Err(contract("completion requires G[U] to have maximum degree one"));
    }
    Ok(complete(&ctx, st))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FptOptions {
    /// Keep searching with a shrinking budget after the first hit.
    pub optimal: bool,
    /// Validate every completed leaf and count failures.
    pub check_leaves: bool,
}

impl Default for FptOptions {
    fn default() -> Self {
        FptOptions { optimal: false, check_leaves: cfg!(debug_assertions) }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FptStats {
    pub branches: u64,
    pub leaves: u64,
    pub sanity_rejections: u64,
    pub completions: u64,
    pub over_budget_leaves: u64,
    pub invalid_leaves: u64,
    pub max_depth: u64,
    pub rule_counts: BTreeMap<String, u64>,
    pub best_size: Option<usize>,
    pub wall_ms: u64,
}

#[derive(Debug, Clone)]
pub struct FptOutcome {
    pub solution: Option<MixedSolution>,
    pub stats: FptStats,
}

struct Search<'a, 'g> {
    ctx: &'a Ctx<'g>,
    opts: FptOptions,
    budget: usize,
    best: Option<MixedSolution>,
    stats: FptStats,
}

impl Search<'_, '_> {
    fn done(&self) -> bool {
        self.best.is_some() && !self.opts.optimal
    }

    fn run(&mut self, mut st: FptState, depth: u64) {
        self.stats.branches += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        st.k = self.budget;
        if !sanity(self.ctx, &st) {
            self.stats.sanity_rejections += 1;
            return;
        }
        match next_rule(self.ctx, &st) {
            None => self.leaf(&st),
            Some((rule, moves)) => {
                *self.stats.rule_counts.entry(format!("{rule:?}")).or_default() += 1;
                let l = measure_fpt(&st);
                let (kids, rejected) = children(self.ctx, &st, &moves);
                self.stats.sanity_rejections += rejected;
                debug_assert!(kids.iter().all(|c| measure_fpt(c) < l && measure_fpt(c) >= 0));
                for kid in kids {
                    if self.done() {
                        return;
                    }
                    self.run(kid, depth + 1);
                }
            }
        }
    }

    fn leaf(&mut self, st: &FptState) {
        self.stats.leaves += 1;
        debug_assert!(st.undecided.ones().all(|u| self.ctx.deg_in(u, &st.undecided) <= 1));
        let Some(sol) = complete(self.ctx, st) else { return };
        self.stats.completions += 1;
        if self.opts.check_leaves && !is_valid(self.ctx.g, &sol) {
            self.stats.invalid_leaves += 1;
            debug_assert!(false, "leaf completion is not a mixed dominating set");
            return;
        }
        if sol.size() > self.budget {
            self.stats.over_budget_leaves += 1;
            return;
        }
        self.budget = sol.size().saturating_sub(1);
        let tighter = self.best.as_ref().is_none_or(|b| sol.size() < b.size());
        if tighter {
            self.best = Some(sol);
        }
    }
}

/// A mixed dominating set of size at most `k`, or `None` if there is none.
/// With `optimal` set, the returned set is a minimum one.
pub fn solve_fpt(g: &Graph, k: usize, opts: FptOptions) -> FptOutcome {
    let start = Instant::now();
    let split = IsolatedSplit::new(g);
    let mut stats = FptStats::default();
    let forced = split.isolated.len();
    let solution = if forced > k {
        None
    } else {
        let ctx = Ctx::new(&split.core);
        let mut search =
            Search { ctx: &ctx, opts, budget: k - forced, best: None, stats: FptStats::default() };
        let root = FptState::new(&split.core, &[], &[], k - forced).expect("empty state");
        search.run(root, 0);
        stats = search.stats;
        search.best.map(|s| split.lift(g, &s))
    };
    stats.best_size = solution.as_ref().map(MixedSolution::size);
    stats.wall_ms = start.elapsed().as_millis() as u64;
    FptOutcome { solution, stats }
}
