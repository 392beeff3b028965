//! Exact treewidth for small graphs.
//!
//! Two independent routes: a dynamic program over eliminated vertex subsets
//! (used up to [`ExactConfig::dp_limit`] vertices) and a depth-first
//! branch-and-bound over elimination orderings that runs on the graph left
//! after safe reduction. Both return a witness ordering; neither ever guesses
//! when the budget runs out.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph::{UGraph, VertexId};
use crate::heuristics::HeuristicKind;
use crate::ordering::{treewidth_of_ordering, LinearOrdering};
use crate::reduction::{RuleSet, ReductionState};

pub const DEFAULT_DP_LIMIT: usize = 24;
const DP_HARD_LIMIT: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactResult {
    pub treewidth: usize,
    pub ordering: LinearOrdering,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactConfig {
    /// Largest vertex count solved with the subset dynamic program.
    pub dp_limit: usize,
    /// Work limit: subset states for the dynamic program, search nodes for
    /// branch-and-bound. `None` is unlimited.
    pub budget: Option<u64>,
}

impl Default for ExactConfig {
    fn default() -> Self {
        ExactConfig {
            dp_limit: DEFAULT_DP_LIMIT,
            budget: None,
        }
    }
}

/// Treewidth of `g` with a witness ordering.
pub fn exact_treewidth(g: &UGraph, budget: Option<u64>) -> Result<ExactResult> {
    exact_treewidth_with(g, &ExactConfig { budget, ..Default::default() })
}

pub fn exact_treewidth_with(g: &UGraph, cfg: &ExactConfig) -> Result<ExactResult> {
    if g.num_vertices() <= cfg.dp_limit.min(DP_HARD_LIMIT) {
        subset_dp_treewidth(g, cfg.budget)
    } else {
        branch_and_bound_treewidth(g, cfg.budget)
    }
}

fn edgeless_result(g: &UGraph) -> ExactResult {
    ExactResult {
        treewidth: 0,
        ordering: LinearOrdering::from_sequence(g.vertices()).unwrap(),
    }
}

/// Best heuristic ordering over all three heuristics and every start vertex.
fn heuristic_upper_bound(g: &UGraph) -> (usize, LinearOrdering) {
    let mut best: Option<(usize, LinearOrdering)> = None;
    for kind in HeuristicKind::ALL {
        for s in g.vertices() {
            let f = kind.ordering(g, s).unwrap();
            let w = treewidth_of_ordering(g, &f).unwrap();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, f));
            }
        }
    }
    best.unwrap_or((0, LinearOrdering::new()))
}

/// Minimum-degree lower bound: the largest minimum degree met while
/// repeatedly deleting a minimum-degree vertex.
fn degeneracy(adj: &[BitSet], alive: &BitSet) -> usize {
    let mut alive = alive.clone();
    let mut deg: Vec<usize> = (0..adj.len())
        .map(|v| if alive.has(v) { adj[v].and_count(&alive) } else { usize::MAX })
        .collect();
    let mut best = 0;
    for _ in 0..alive.count() {
        let (v, &d) = deg.iter().enumerate().min_by_key(|(_, d)| **d).unwrap();
        best = best.max(d);
        alive.clear(v);
        deg[v] = usize::MAX;
        for u in adj[v].and(&alive).ones() {
            deg[u] -= 1;
        }
    }
    best
}

fn lower_bound(g: &UGraph) -> usize {
    let d = Dense::new(g);
    let all = BitSet::full(d.ids.len());
    degeneracy(&d.adj, &all)
}

/// Subset dynamic program. `best[S]` is the least width with which the
/// vertices outside the eliminated set `S` can still be eliminated; the
/// cost of eliminating `v` after `S` is the number of uneliminated vertices
/// reachable from `v` through `S`.
pub fn subset_dp_treewidth(g: &UGraph, budget: Option<u64>) -> Result<ExactResult> {
    let n = g.num_vertices();
    if n > DP_HARD_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "subset dynamic program is limited to {DP_HARD_LIMIT} vertices, got {n}"
        )));
    }
    if g.num_edges() == 0 {
        return Ok(edgeless_result(g));
    }
    let states = 1u64 << n;
    if budget.is_some_and(|b| states > b) {
        return Err(Error::BudgetExceeded {
            lower: lower_bound(g),
            upper: heuristic_upper_bound(g).0,
        });
    }
    let ids: Vec<VertexId> = g.vertices().collect();
    let mut index = HashMap::with_capacity(n);
    for (i, &v) in ids.iter().enumerate() {
        index.insert(v, i);
    }
    let adj: Vec<u32> = ids
        .iter()
        .map(|&v| g.neighbors(v).unwrap().fold(0u32, |m, w| m | 1 << index[&w]))
        .collect();
    let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };

    let cost = |s: u32, v: usize| -> u8 {
        let mut reach = adj[v];
        let mut visited = 1u32 << v;
        let mut todo = reach & s;
        while todo != 0 {
            let u = todo.trailing_zeros() as usize;
            todo &= todo - 1;
            visited |= 1 << u;
            let fresh = adj[u] & !reach;
            reach |= adj[u];
            todo |= fresh & s & !visited;
        }
        (reach & !s & !(1u32 << v)).count_ones() as u8
    };

    let mut best = vec![0u8; 1usize << n];
    for s in (0..full).rev() {
        let mut m = u8::MAX;
        let mut rest = full & !s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let after = best[(s | 1 << v) as usize];
            if after >= m {
                continue;
            }
            m = m.min(cost(s, v).max(after));
        }
        best[s as usize] = m;
    }

    // lowest-id choice at every step gives the lexicographically smallest
    // optimal elimination sequence
    let mut seq = Vec::with_capacity(n);
    let mut s = 0u32;
    while s != full {
        let target = best[s as usize];
        let v = (0..n)
            .find(|&v| s & (1 << v) == 0 && cost(s, v).max(best[(s | 1 << v) as usize]) == target)
            .expect("some vertex realises the optimum");
        seq.push(ids[v]);
        s |= 1 << v;
    }
    Ok(ExactResult {
        treewidth: best[0] as usize,
        ordering: LinearOrdering::from_sequence(seq).unwrap(),
    })
}

/// Branch-and-bound over elimination orderings, run on the residual of a
/// full safe reduction and seeded with the best heuristic width as upper
/// bound.
pub fn branch_and_bound_treewidth(g: &UGraph, budget: Option<u64>) -> Result<ExactResult> {
    if g.num_edges() == 0 {
        return Ok(edgeless_result(g));
    }
    let mut state = ReductionState::new(g.clone(), 1).with_degree_cap(None);
    state.reduce(RuleSet::ALL);
    let (residual, low, stack) = state.into_parts();
    let prefix: Vec<VertexId> = stack.iter().map(|r| r.vertex).collect();

    let (ub, heuristic) = heuristic_upper_bound(&residual);
    let mut search = Search::new(&residual, low, ub, budget);
    let tail: Vec<VertexId> = if ub <= low || residual.is_empty() {
        heuristic.iter().collect()
    } else {
        search.run()?;
        match search.best_order.take() {
            Some(order) => order.into_iter().map(|i| search.dense.ids[i]).collect(),
            None => heuristic.iter().collect(),
        }
    };
    let ordering = LinearOrdering::from_sequence(prefix.into_iter().chain(tail)).unwrap();
    let treewidth = treewidth_of_ordering(g, &ordering)?;
    debug_assert_eq!(treewidth, low.max(search.upper));
    Ok(ExactResult { treewidth, ordering })
}

struct Search {
    dense: Dense,
    low: usize,
    /// best width found so far on the residual (exclusive target for the
    /// search: only strictly smaller widths are worth finding)
    upper: usize,
    best_order: Option<Vec<usize>>,
    seen: HashMap<BitSet, usize>,
    nodes: u64,
    budget: Option<u64>,
}

impl Search {
    fn new(g: &UGraph, low: usize, upper: usize, budget: Option<u64>) -> Self {
        Search {
            dense: Dense::new(g),
            low,
            upper,
            best_order: None,
            seen: HashMap::new(),
            nodes: 0,
            budget,
        }
    }

    fn run(&mut self) -> Result<()> {
        let n = self.dense.ids.len();
        let adj = self.dense.adj.clone();
        let alive = BitSet::full(n);
        let mut path = Vec::with_capacity(n);
        self.descend(adj, alive, 0, &mut path)
    }

    fn descend(
        &mut self,
        mut adj: Vec<BitSet>,
        mut alive: BitSet,
        mut width: usize,
        path: &mut Vec<usize>,
    ) -> Result<()> {
        let depth = path.len();
        let outcome = self.descend_inner(&mut adj, &mut alive, &mut width, path);
        path.truncate(depth);
        outcome
    }

    fn descend_inner(
        &mut self,
        adj: &mut [BitSet],
        alive: &mut BitSet,
        width: &mut usize,
        path: &mut Vec<usize>,
    ) -> Result<()> {
        loop {
            self.nodes += 1;
            if self.budget.is_some_and(|b| self.nodes > b) {
                return Err(Error::BudgetExceeded {
                    lower: self.low.max(degeneracy(&self.dense.adj, &BitSet::full(adj.len()))),
                    upper: self.low.max(self.upper),
                });
            }
            if self.upper <= self.low {
                return Ok(());
            }
            let remaining = alive.count();
            if remaining == 0 || remaining - 1 <= *width {
                let w = (*width).max(remaining.saturating_sub(1));
                if w < self.upper {
                    self.upper = w;
                    let mut order = path.clone();
                    order.extend(alive.ones());
                    self.best_order = Some(order);
                }
                return Ok(());
            }
            if (*width).max(degeneracy(adj, alive)) >= self.upper {
                return Ok(());
            }
            match self.seen.get(alive) {
                Some(&w) if w <= *width => return Ok(()),
                _ => {
                    self.seen.insert(alive.clone(), *width);
                }
            }
            // A simplicial vertex, or an almost simplicial one no wider than
            // what is already committed, can be eliminated without branching.
            let bound = (*width).max(self.low);
            let forced = alive.ones().find(|&v| {
                let nb = adj[v].and(alive);
                let d = nb.count();
                is_clique(adj, &nb) || (d <= bound && almost_clique(adj, &nb))
            });
            match forced {
                Some(v) => {
                    *width = (*width).max(adj[v].and_count(alive));
                    eliminate(adj, alive, v);
                    path.push(v);
                }
                None => break,
            }
        }

        let mut candidates: Vec<(usize, usize)> =
            alive.ones().map(|v| (adj[v].and_count(alive), v)).collect();
        candidates.sort_unstable();
        for (d, v) in candidates {
            let w = (*width).max(d);
            if w >= self.upper {
                continue;
            }
            let mut next_adj = adj.to_vec();
            let mut next_alive = alive.clone();
            eliminate(&mut next_adj, &mut next_alive, v);
            path.push(v);
            self.descend(next_adj, next_alive, w, path)?;
            path.pop();
            if self.upper <= self.low {
                break;
            }
        }
        Ok(())
    }
}

fn eliminate(adj: &mut [BitSet], alive: &mut BitSet, v: usize) {
    alive.clear(v);
    let nb = adj[v].and(alive);
    for u in nb.ones() {
        adj[u].union_with(&nb);
        adj[u].clear(u);
        adj[u].clear(v);
    }
}

fn is_clique(adj: &[BitSet], set: &BitSet) -> bool {
    set.ones().all(|u| {
        let mut others = set.clone();
        others.clear(u);
        others.is_subset(&adj[u])
    })
}

fn almost_clique(adj: &[BitSet], set: &BitSet) -> bool {
    set.ones().any(|w| {
        let mut rest = set.clone();
        rest.clear(w);
        is_clique(adj, &rest)
    })
}

struct Dense {
    ids: Vec<VertexId>,
    adj: Vec<BitSet>,
}

impl Dense {
    fn new(g: &UGraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let index: HashMap<VertexId, usize> = ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let adj = ids
            .iter()
            .map(|&v| {
                let mut b = BitSet::empty(ids.len());
                for w in g.neighbors(v).unwrap() {
                    b.set(index[&w]);
                }
                b
            })
            .collect();
        Dense { ids, adj }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct BitSet {
    words: Vec<u64>,
}

impl BitSet {
    fn empty(n: usize) -> Self {
        BitSet { words: vec![0; n.div_ceil(64)] }
    }

    fn full(n: usize) -> Self {
        let mut b = Self::empty(n);
        for i in 0..n {
            b.set(i);
        }
        b
    }

    fn set(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.words[i / 64] &= !(1 << (i % 64));
    }

    fn has(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn count(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn and(&self, other: &BitSet) -> BitSet {
        BitSet {
            words: self.words.iter().zip(&other.words).map(|(a, b)| a & b).collect(),
        }
    }

    fn and_count(&self, other: &BitSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn union_with(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    fn is_subset(&self, other: &BitSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + b)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: u32) -> UGraph {
        let mut e = Vec::new();
        for a in 1..=n {
            for b in a + 1..=n {
                e.push((a, b));
            }
        }
        UGraph::from_edges(n, &e)
    }

    fn petersen() -> UGraph {
        UGraph::from_edges(
            10,
            &[
                (1, 2), (2, 3), (3, 4), (4, 5), (5, 1),
                (1, 6), (2, 7), (3, 8), (4, 9), (5, 10),
                (6, 8), (8, 10), (10, 7), (7, 9), (9, 6),
            ],
        )
    }

    fn both(g: &UGraph) -> (ExactResult, ExactResult) {
        (
            subset_dp_treewidth(g, None).unwrap(),
            branch_and_bound_treewidth(g, None).unwrap(),
        )
    }

    #[test]
    fn small_known_values() {
        let tree = UGraph::from_edges(6, &[(1, 2), (1, 3), (3, 4), (3, 5), (5, 6)]);
        let c4 = UGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        for (g, tw) in [(tree, 1), (c4, 2), (complete(4), 3), (complete(6), 5)] {
            let (dp, bb) = both(&g);
            assert_eq!(dp.treewidth, tw);
            assert_eq!(bb.treewidth, tw);
            assert_eq!(treewidth_of_ordering(&g, &dp.ordering).unwrap(), tw);
            assert_eq!(treewidth_of_ordering(&g, &bb.ordering).unwrap(), tw);
        }
    }

    #[test]
    fn petersen_has_treewidth_four() {
        let (dp, bb) = both(&petersen());
        assert_eq!(dp.treewidth, 4);
        assert_eq!(bb.treewidth, 4);
    }

    #[test]
    fn edgeless_and_empty_graphs() {
        assert_eq!(exact_treewidth(&UGraph::new(), None).unwrap().treewidth, 0);
        let r = exact_treewidth(&UGraph::with_vertices(3), None).unwrap();
        assert_eq!(r.treewidth, 0);
        assert_eq!(r.ordering.len(), 3);
    }

    #[test]
    fn witness_is_lexicographically_smallest() {
        // C4: eliminating 1 first is optimal, then 2
        let c4 = UGraph::from_edges(4, &[(1, 2), (2, 3), (3, 4), (4, 1)]);
        let r = subset_dp_treewidth(&c4, None).unwrap();
        let seq: Vec<u32> = r.ordering.iter().map(|v| v.0).collect();
        assert_eq!(seq, vec![1, 2, 3, 4]);
    }

    #[test]
    fn budget_exhaustion_reports_bounds() {
        match subset_dp_treewidth(&petersen(), Some(100)) {
            Err(Error::BudgetExceeded { lower, upper }) => {
                assert!(lower <= 4 && upper >= 4);
            }
            other => panic!("expected budget error, got {other:?}"),
        }
        // reduction lifts low to 4 on the grid, so the search has to prove
        // that width 4 is impossible
        match branch_and_bound_treewidth(&grid(5, 6), Some(1)) {
            Err(Error::BudgetExceeded { lower, upper }) => assert!(lower <= 5 && upper >= 5),
            other => panic!("expected budget error, got {other:?}"),
        }
    }

    fn grid(rows: u32, cols: u32) -> UGraph {
        let id = |r: u32, c: u32| r * cols + c + 1;
        let mut e = Vec::new();
        for r in 0..rows {
            for c in 0..cols {
                if c + 1 < cols {
                    e.push((id(r, c), id(r, c + 1)));
                }
                if r + 1 < rows {
                    e.push((id(r, c), id(r + 1, c)));
                }
            }
        }
        UGraph::from_edges(rows * cols, &e)
    }

    #[test]
    fn large_inputs_switch_to_branch_and_bound() {
        // 30 vertices is past the dynamic program's default limit
        let g = grid(5, 6);
        let r = exact_treewidth(&g, None).unwrap();
        assert_eq!(r.treewidth, 5);
        assert_eq!(treewidth_of_ordering(&g, &r.ordering).unwrap(), 5);
    }
}
