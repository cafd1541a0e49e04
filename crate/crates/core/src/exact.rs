//! Exact branching over minimal vertex covers.
//!
//! For every minimal vertex cover `C` (with `Z = V \ C` independent) the
//! search decides each cover vertex into `D_f` or `P_f` and each leftover
//! `Z` vertex into `P_f'`, until every vertex is decided or dominated. A
//! leaf is completed by the fewest edges covering `P_f ∪ P_f'`.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rayon::prelude::*;
use serde::Serialize;

use crate::covers::minimal_vertex_covers;
use crate::error::{contract, Result};
use crate::graph::Graph;
use crate::matching::cover_vertices_with_edges;
use crate::oracle::IsolatedSplit;
use crate::solution::{is_valid, MixedSolution};

/// Rules in priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ExactRuleId {
    R1,
    R2,
    B1,
    B2_1,
    B2_2,
    B3_1,
    B3_2,
    B4,
    B5,
    B6,
}

impl ExactRuleId {
    pub const ALL: [ExactRuleId; 10] = [
        ExactRuleId::R1,
        ExactRuleId::R2,
        ExactRuleId::B1,
        ExactRuleId::B2_1,
        ExactRuleId::B2_2,
        ExactRuleId::B3_1,
        ExactRuleId::B3_2,
        ExactRuleId::B4,
        ExactRuleId::B5,
        ExactRuleId::B6,
    ];
}

/// Partial decision `(D_f, P_f, P_f')` relative to a fixed cover `C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactState {
    cover: FixedBitSet,
    d: FixedBitSet,
    p: FixedBitSet,
    p_prime: FixedBitSet,
    undecided: FixedBitSet,
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

fn to_set(n: usize, items: &[usize]) -> FixedBitSet {
    let mut s = FixedBitSet::with_capacity(n);
    items.iter().for_each(|&v| s.insert(v));
    s
}

impl ExactState {
    /// The root state for cover `C`. Fails when `cover` is not a vertex cover.
    pub fn new(g: &Graph, cover: &[usize]) -> Result<Self> {
        let n = g.n();
        Self::from_parts(g, cover, &[], &[], &[]).map_err(|_| {
            let c = to_set(n, cover);
            contract(match g.edges().iter().find(|&&(u, v)| !c.contains(u) && !c.contains(v)) {
                Some(&(u, v)) => format!("edge ({u}, {v}) is not covered by C"),
                None => "cover has an out-of-range vertex".to_string(),
            })
        })
    }

    /// A state with explicit decisions; all invariants are checked.
    pub fn from_parts(
        g: &Graph,
        cover: &[usize],
        d: &[usize],
        p: &[usize],
        p_prime: &[usize],
    ) -> Result<Self> {
        let n = g.n();
        for &v in cover.iter().chain(d).chain(p).chain(p_prime) {
            g.check_vertex(v)?;
        }
        let cover = to_set(n, cover);
        if g.edges().iter().any(|&(u, v)| !cover.contains(u) && !cover.contains(v)) {
            return Err(contract("Z = V \\ C is not independent"));
        }
        let (d, p, p_prime) = (to_set(n, d), to_set(n, p), to_set(n, p_prime));
        if !d.is_subset(&cover) || !p.is_subset(&cover) || !p_prime.is_disjoint(&cover) {
            return Err(contract("D_f, P_f must lie in C and P_f' in Z"));
        }
        if !d.is_disjoint(&p) {
            return Err(contract("D_f and P_f overlap"));
        }
        let ctx = Ctx::new(g);
        let mut st = ExactState { cover, d, p, p_prime, undecided: FixedBitSet::with_capacity(n) };
        st.refresh(&ctx);
        Ok(st)
    }

    fn refresh(&mut self, ctx: &Ctx) {
        self.undecided = self.compute_undecided(ctx);
    }

    fn compute_undecided(&self, ctx: &Ctx) -> FixedBitSet {
        let n = ctx.g.n();
        let mut dominated = FixedBitSet::with_capacity(n);
        for u in self.d.ones() {
            dominated.union_with(&ctx.nbrs[u]);
        }
        dominated.difference_with(&self.cover);
        let mut u = FixedBitSet::with_capacity(n);
        u.insert_range(..);
        u.difference_with(&self.d);
        u.difference_with(&self.p);
        u.difference_with(&self.p_prime);
        u.difference_with(&dominated);
        u
    }

    pub fn cover(&self) -> Vec<usize> {
        self.cover.ones().collect()
    }

    pub fn d_f(&self) -> Vec<usize> {
        self.d.ones().collect()
    }

    pub fn p_f(&self) -> Vec<usize> {
        self.p.ones().collect()
    }

    pub fn p_f_prime(&self) -> Vec<usize> {
        self.p_prime.ones().collect()
    }

    /// `U`: undecided vertices not dominated through `D_f`.
    pub fn undecided(&self) -> Vec<usize> {
        self.undecided.ones().collect()
    }

    fn u_c(&self) -> FixedBitSet {
        &self.undecided & &self.cover
    }

    fn u_z(&self) -> FixedBitSet {
        let mut s = self.undecided.clone();
        s.difference_with(&self.cover);
        s
    }

    fn decided_count(&self) -> usize {
        self.d.count_ones(..) + self.p.count_ones(..) + self.p_prime.count_ones(..)
    }

    /// `|D_f| + ⌈(|P_f| + |P_f'|)/2⌉`, a lower bound on every completion.
    pub fn lower_bound(&self) -> usize {
        self.d.count_ones(..) + (self.p.count_ones(..) + self.p_prime.count_ones(..)).div_ceil(2)
    }

    /// Child with the given vertices added. `None` when a vertex would end up
    /// in two different sets.
    fn child(&self, ctx: &Ctx, add_d: &[usize], add_p: &[usize], add_pp: &[usize]) -> Option<Self> {
        let mut st = self.clone();
        for &v in add_d {
            if st.p.contains(v) || st.p_prime.contains(v) {
                return None;
            }
            debug_assert!(st.cover.contains(v));
            st.d.insert(v);
        }
        for &v in add_p {
            if st.d.contains(v) || st.p_prime.contains(v) {
                return None;
            }
            debug_assert!(st.cover.contains(v));
            st.p.insert(v);
        }
        for &v in add_pp {
            if st.d.contains(v) || st.p.contains(v) {
                return None;
            }
            debug_assert!(!st.cover.contains(v));
            st.p_prime.insert(v);
        }
        st.refresh(ctx);
        Some(st)
    }
}

fn measure(ctx: &Ctx, st: &ExactState) -> usize {
    let (uc, uz) = (st.u_c(), st.u_z());
    uc.ones().filter(|&u| ctx.deg_in(u, &uz) >= 2).count()
        + uz.ones().filter(|&v| ctx.deg_in(v, &uc) >= 1).count()
}

/// `|{u ∈ U_C : d_{U_Z}(u) ≥ 2}| + |{v ∈ U_Z : d_{U_C}(v) ≥ 1}|`.
pub fn measure_l(g: &Graph, st: &ExactState) -> usize {
    measure(&Ctx::new(g), st)
}

type Moves = Vec<(Vec<usize>, Vec<usize>, Vec<usize>)>;

fn d_(v: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    (v.to_vec(), vec![], vec![])
}

fn p_(v: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    (vec![], v.to_vec(), vec![])
}

fn dp(d: &[usize], p: &[usize]) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
    (d.to_vec(), p.to_vec(), vec![])
}

/// Guard of `rule` on `st`; the move lists of its children when it applies.
fn guard(ctx: &Ctx, st: &ExactState, rule: ExactRuleId) -> Option<Moves> {
    let (uc, uz) = (st.u_c(), st.u_z());
    let dz = |u: usize| ctx.deg_in(u, &uz);
    let dc = |v: usize| ctx.deg_in(v, &uc);
    use ExactRuleId::*;
    match rule {
        R1 => uc.ones().find(|&u| dz(u) <= 1).map(|u| vec![p_(&[u])]),
        R2 => uz.ones().find(|&v| dc(v) == 0).map(|v| vec![(vec![], vec![], vec![v])]),
        B1 => uc.ones().find(|&u| dz(u) >= 4).map(|u| vec![d_(&[u]), p_(&[u])]),
        B2_1 => uc.ones().filter(|&u1| dz(u1) == 3).find_map(|u1| {
            uc.ones()
                .filter(|&u2| dz(u2) == 2)
                .find(|&u2| !(&ctx.nbrs_in(u1, &uz) & &ctx.nbrs[u2]).is_clear())
                .map(|u2| vec![dp(&[u1], &[u2]), p_(&[u1])])
        }),
        B2_2 => uc.ones().find(|&u| dz(u) == 2).map(|u| vec![d_(&[u]), p_(&[u])]),
        B3_1 => uz.ones().find(|&v| dc(v) == 1).map(|v| {
            let u = ctx.nbrs_in(v, &uc).ones().next().unwrap();
            vec![d_(&[u]), p_(&[u])]
        }),
        B3_2 => uz.ones().find(|&v| dc(v) == 2).map(|v| {
            let us: Vec<usize> = ctx.nbrs_in(v, &uc).ones().collect();
            let (u1, u2) = (us[0], us[1]);
            vec![d_(&[u1]), dp(&[u2], &[u1]), p_(&[u1, u2])]
        }),
        B4 => uc.ones().find_map(|u1| {
            uc.ones()
                .filter(|&u2| u2 > u1)
                .find(|&u2| ctx.nbrs_in(u1, &uz).intersection_count(&ctx.nbrs[u2]) >= 2)
                .map(|u2| vec![dp(&[u1], &[u2]), p_(&[u1])])
        }),
        B5 => uz.ones().find(|&v| dc(v) == 3).map(|v| {
            let us: Vec<usize> = ctx.nbrs_in(v, &uc).ones().collect();
            let mut others = uz.clone();
            others.set(v, false);
            let x: Vec<Vec<usize>> = us
                .iter()
                .map(|&ui| {
                    let shared = ctx.nbrs_in(ui, &others);
                    uc.ones()
                        .filter(|w| !us.contains(w))
                        .filter(|&w| !ctx.nbrs[w].is_disjoint(&shared))
                        .collect()
                })
                .collect();
            let rest = |skip: &[usize]| -> Vec<usize> {
                us.iter().copied().filter(|u| !skip.contains(u)).collect()
            };
            let mut moves: Moves = vec![(vec![], us.clone(), vec![v])];
            for &ui in &us {
                moves.push(dp(&[ui], &rest(&[ui])));
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    let mut p = rest(&[us[i], us[j]]);
                    p.extend(&x[i]);
                    p.extend(&x[j]);
                    moves.push(dp(&[us[i], us[j]], &p));
                }
            }
            moves.push(dp(&us, &x.concat()));
            moves
        }),
        B6 => uc.ones().next().map(|u| {
            let vs: Vec<usize> = ctx.nbrs_in(u, &uz).ones().collect();
            debug_assert_eq!(vs.len(), 3, "B6 requires d_UZ(u) = 3");
            let without_u = |s: FixedBitSet| -> Vec<usize> { s.ones().filter(|&w| w != u).collect() };
            let first = without_u(ctx.nbrs_in(vs[0], &uc));
            let mut pair = ctx.nbrs_in(vs[1], &uc);
            pair.union_with(&ctx.nbrs_in(vs[2], &uc));
            vec![p_(&[u]), dp(&[u], &first), dp(&[u], &without_u(pair))]
        }),
    }
}

fn next_rule(ctx: &Ctx, st: &ExactState) -> Option<(ExactRuleId, Moves)> {
    ExactRuleId::ALL.iter().find_map(|&r| guard(ctx, st, r).map(|m| (r, m)))
}

/// The first applicable rule, or `None` when `U` is empty.
pub fn select_rule(g: &Graph, st: &ExactState) -> Result<Option<ExactRuleId>> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    let rule = next_rule(&ctx, st).map(|(r, _)| r);
    if rule.is_none() && !st.undecided.is_clear() {
        return Err(contract("no rule applies although U is nonempty"));
    }
    Ok(rule)
}

fn check_consistent(ctx: &Ctx, st: &ExactState) -> Result<()> {
    if st.cover.len() != ctx.g.n() || st.undecided != st.compute_undecided(ctx) {
        return Err(contract("state does not belong to this graph"));
    }
    Ok(())
}

/// Children of `st` under `rule`; children that would put a vertex in two
/// sets are dropped.
pub fn expand(g: &Graph, st: &ExactState, rule: ExactRuleId) -> Result<Vec<ExactState>> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    if next_rule(&ctx, st).map(|(r, _)| r) != Some(rule) {
        return Err(contract(format!("{rule:?} is not the rule selected for this state")));
    }
    let moves = guard(&ctx, st, rule).expect("selected rule applies");
    Ok(children(&ctx, st, &moves))
}

fn children(ctx: &Ctx, st: &ExactState, moves: &Moves) -> Vec<ExactState> {
    moves.iter().filter_map(|(d, p, pp)| st.child(ctx, d, p, pp)).collect()
}

fn complete(ctx: &Ctx, st: &ExactState) -> Option<MixedSolution> {
    let mut paired: Vec<usize> = st.p.ones().collect();
    paired.extend(st.p_prime.ones());
    let edges = cover_vertices_with_edges(ctx.g, &paired)?;
    Some(MixedSolution::new(st.d.ones().collect(), edges))
}

/// `D_f` plus the fewest edges covering `P_f ∪ P_f'`. Partners may come from
/// anywhere in the graph, including `Z` vertices already dominated by `D_f`.
/// `None` only when some vertex of `P_f ∪ P_f'` has no neighbor.
pub fn complete_exact(g: &Graph, st: &ExactState) -> Result<Option<MixedSolution>> {
    let ctx = Ctx::new(g);
    check_consistent(&ctx, st)?;
    if !st.undecided.is_clear() {
        return Err(contract("completion requires U to be empty"));
    }
    Ok(complete(&ctx, st))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Cut subtrees whose lower bound cannot beat the incumbent.
    pub prune: bool,
    /// Search distinct covers on the rayon pool.
    pub parallel: bool,
    /// Validate every completed leaf and count failures.
    pub check_leaves: bool,
}

impl Default for ExactOptions {
    fn default() -> Self {
        ExactOptions { prune: true, parallel: true, check_leaves: cfg!(debug_assertions) }
    }
}

impl ExactOptions {
    /// No pruning: the search tree is exactly the one the rules generate.
    pub fn faithful() -> Self {
        ExactOptions { prune: false, ..Self::default() }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ExactStats {
    pub covers: u64,
    /// Search nodes visited, roots included.
    pub branches: u64,
    pub leaves: u64,
    pub completions: u64,
    pub infeasible_leaves: u64,
    pub pruned: u64,
    pub invalid_leaves: u64,
    pub max_depth: u64,
    pub rule_counts: std::collections::BTreeMap<String, u64>,
    pub best_size: usize,
    pub wall_ms: u64,
}

impl ExactStats {
    fn merge(&mut self, o: &ExactStats) {
        self.covers += o.covers;
        self.branches += o.branches;
        self.leaves += o.leaves;
        self.completions += o.completions;
        self.infeasible_leaves += o.infeasible_leaves;
        self.pruned += o.pruned;
        self.invalid_leaves += o.invalid_leaves;
        self.max_depth = self.max_depth.max(o.max_depth);
        for (k, v) in &o.rule_counts {
            *self.rule_counts.entry(k.clone()).or_default() += v;
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExactOutcome {
    pub solution: MixedSolution,
    pub stats: ExactStats,
}

struct CoverSearch<'a, 'g> {
    ctx: &'a Ctx<'g>,
    opts: ExactOptions,
    global: &'a AtomicUsize,
    best: Option<MixedSolution>,
    stats: ExactStats,
}

impl CoverSearch<'_, '_> {
    fn local_best(&self) -> usize {
        self.best.as_ref().map_or(usize::MAX, MixedSolution::size)
    }

    fn run(&mut self, st: ExactState, depth: u64) {
        self.stats.branches += 1;
        self.stats.max_depth = self.stats.max_depth.max(depth);
        if self.opts.prune {
            let lb = st.lower_bound();
            if lb >= self.local_best() || lb > self.global.load(Ordering::Relaxed) {
                self.stats.pruned += 1;
                return;
            }
        }
        match next_rule(self.ctx, &st) {
            None => self.leaf(&st),
            Some((rule, moves)) => {
                *self.stats.rule_counts.entry(format!("{rule:?}")).or_default() += 1;
                let kids = children(self.ctx, &st, &moves);
                debug_assert!(kids.iter().all(|c| {
                    measure(self.ctx, c) < measure(self.ctx, &st) || c.decided_count() > st.decided_count()
                }));
                for kid in kids {
                    self.run(kid, depth + 1);
                }
            }
        }
    }

    fn leaf(&mut self, st: &ExactState) {
        debug_assert!(st.undecided.is_clear(), "no rule applies but U is nonempty");
        self.stats.leaves += 1;
        let Some(sol) = complete(self.ctx, st) else {
            self.stats.infeasible_leaves += 1;
            return;
        };
        self.stats.completions += 1;
        if self.opts.check_leaves && !is_valid(self.ctx.g, &sol) {
            self.stats.invalid_leaves += 1;
            debug_assert!(false, "leaf completion is not a mixed dominating set");
            return;
        }
        if sol.size() < self.local_best() {
            self.global.fetch_min(sol.size(), Ordering::Relaxed);
            self.best = Some(sol);
        }
    }
}

/// A minimum mixed dominating set together with search statistics.
pub fn solve_exact(g: &Graph, opts: ExactOptions) -> ExactOutcome {
    let start = Instant::now();
    let split = IsolatedSplit::new(g);
    let core = &split.core;
    let ctx = Ctx::new(core);
    let global = AtomicUsize::new(core.n());
    let search_cover = |(index, cover): (usize, Vec<usize>)| {
        let mut search = CoverSearch {
            ctx: &ctx,
            opts,
            global: &global,
            best: None,
            stats: ExactStats { covers: 1, ..Default::default() },
        };
        let root = ExactState::new(core, &cover).expect("enumerated set is a vertex cover");
        search.run(root, 0);
        (index, search.best, search.stats)
    };
    let results: Vec<(usize, Option<MixedSolution>, ExactStats)> = if opts.parallel {
        minimal_vertex_covers(core).enumerate().par_bridge().map(search_cover).collect()
    } else {
        minimal_vertex_covers(core).enumerate().map(search_cover).collect()
    };
    let mut stats = ExactStats::default();
    let mut best: Option<(usize, usize, MixedSolution)> = None;
    for (index, sol, s) in results {
        stats.merge(&s);
        if let Some(sol) = sol {
            let key = (sol.size(), index);
            if best.as_ref().is_none_or(|(size, i, _)| key < (*size, *i)) {
                best = Some((key.0, key.1, sol));
            }
        }
    }
    let core_sol = best
        .map(|(_, _, s)| s)
        .unwrap_or_else(|| MixedSolution::new((0..core.n()).collect(), Vec::new()));
    let solution = split.lift(g, &core_sol);
    stats.best_size = solution.size();
    stats.wall_ms = start.elapsed().as_millis() as u64;
    ExactOutcome { solution, stats }
}
