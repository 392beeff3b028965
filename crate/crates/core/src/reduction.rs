//! Safe reduction rules for treewidth.
//!
//! A [`ReductionState`] carries the reduced graph, a lower bound `low` on the
//! treewidth of the original graph and the stack of eliminated vertices. Every
//! rule preserves `max(tw(original), low0) == max(tw(graph), low)`, so once
//! the graph is empty `low` is the treewidth, and in general any ordering of
//! the residual graph can be extended by the stack into an ordering of the
//! original graph whose width is at most `max(low, width of residual)`.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::ops::BitOr;
use std::str::FromStr;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{almost_simplicial_witness_in, UGraph, VertexId};

/// Neighbourhoods larger than this are not inspected for (almost)
/// simpliciality.
pub const DEFAULT_DEGREE_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum RuleKind {
    Islet,
    Twig,
    Series,
    Triangle,
    Buddy,
    Cube,
    Simplicial,
    AlmostSimplicial,
}

impl RuleKind {
    /// All rules in the order the fixpoint loop tries them.
    pub const ALL: [RuleKind; 8] = [
        RuleKind::Islet,
        RuleKind::Twig,
        RuleKind::Series,
        RuleKind::Triangle,
        RuleKind::Buddy,
        RuleKind::Cube,
        RuleKind::Simplicial,
        RuleKind::AlmostSimplicial,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Islet => "islet",
            RuleKind::Twig => "twig",
            RuleKind::Series => "series",
            RuleKind::Triangle => "triangle",
            RuleKind::Buddy => "buddy",
            RuleKind::Cube => "cube",
            RuleKind::Simplicial => "simplicial",
            RuleKind::AlmostSimplicial => "almost_simplicial",
        }
    }

    fn bit(self) -> u8 {
        1 << (self as u8)
    }

    fn simplicial_for_degree(d: usize) -> Self {
        match d {
            0 => RuleKind::Islet,
            1 => RuleKind::Twig,
            _ => RuleKind::Simplicial,
        }
    }

    fn almost_for_degree(d: usize) -> Self {
        match d {
            2 => RuleKind::Series,
            3 => RuleKind::Triangle,
            _ => RuleKind::AlmostSimplicial,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A set of enabled rules.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct RuleSet(u8);

impl RuleSet {
    pub const EMPTY: RuleSet = RuleSet(0);
    pub const S: RuleSet = RuleSet(1 << RuleKind::Simplicial as u8);
    pub const PR1: RuleSet = RuleSet((1 << RuleKind::Islet as u8) | (1 << RuleKind::Twig as u8));
    pub const PR2: RuleSet = RuleSet(Self::PR1.0 | (1 << RuleKind::Series as u8));
    pub const PR3: RuleSet = RuleSet(
        Self::PR2.0
            | (1 << RuleKind::Triangle as u8)
            | (1 << RuleKind::Buddy as u8)
            | (1 << RuleKind::Cube as u8),
    );
    pub const PR4: RuleSet = RuleSet(Self::S.0 | Self::PR3.0);
    pub const ALL: RuleSet = RuleSet(Self::PR4.0 | (1 << RuleKind::AlmostSimplicial as u8));

    /// Named presets in report order.
    pub const PRESETS: [(&'static str, RuleSet); 6] = [
        ("S", RuleSet::S),
        ("PR1", RuleSet::PR1),
        ("PR2", RuleSet::PR2),
        ("PR3", RuleSet::PR3),
        ("PR4", RuleSet::PR4),
        ("ALL", RuleSet::ALL),
    ];

    pub fn single(rule: RuleKind) -> Self {
        RuleSet(rule.bit())
    }

    pub fn contains(self, rule: RuleKind) -> bool {
        self.0 & rule.bit() != 0
    }

    pub fn with(self, rule: RuleKind) -> Self {
        RuleSet(self.0 | rule.bit())
    }

    pub fn is_superset(self, other: RuleSet) -> bool {
        self.0 & other.0 == other.0
    }

    pub fn iter(self) -> impl Iterator<Item = RuleKind> {
        RuleKind::ALL.into_iter().filter(move |r| self.contains(*r))
    }
}

impl BitOr for RuleSet {
    type Output = RuleSet;

    fn bitor(self, rhs: RuleSet) -> RuleSet {
        RuleSet(self.0 | rhs.0)
    }
}

impl FromIterator<RuleKind> for RuleSet {
    fn from_iter<I: IntoIterator<Item = RuleKind>>(iter: I) -> Self {
        iter.into_iter().fold(RuleSet::EMPTY, RuleSet::with)
    }
}

impl FromStr for RuleSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| *c != '-' && *c != '_').collect();
        let key = key.to_ascii_uppercase();
        if key == "NONE" {
            return Ok(RuleSet::EMPTY);
        }
        RuleSet::PRESETS
            .iter()
            .find(|(name, _)| *name == key)
            .map(|(_, set)| *set)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown rule set `{s}`")))
    }
}

impl fmt::Display for RuleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((name, _)) = RuleSet::PRESETS.iter().find(|(_, set)| set == self) {
            return f.write_str(name);
        }
        let names: Vec<_> = self.iter().map(RuleKind::name).collect();
        write!(f, "{{{}}}", names.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EliminationRecord {
    pub vertex: VertexId,
    pub rule: RuleKind,
    pub degree_at_removal: usize,
    pub neighbors_at_removal: Vec<VertexId>,
}

/// Number of rule applications per rule. A buddy application removes two
/// vertices and a cube application three, but each counts once.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RuleCounts([usize; 8]);

impl RuleCounts {
    pub fn get(&self, rule: RuleKind) -> usize {
        self.0[rule as usize]
    }

    fn bump(&mut self, rule: RuleKind) {
        self.0[rule as usize] += 1;
    }

    pub fn total(&self) -> usize {
        self.0.iter().sum()
    }
}

impl Serialize for RuleCounts {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(8))?;
        for rule in RuleKind::ALL {
            map.serialize_entry(rule.name(), &self.get(rule))?;
        }
        map.end()
    }
}

#[derive(Debug, Clone)]
pub struct ReductionState {
    graph: UGraph,
    low: usize,
    stack: Vec<EliminationRecord>,
    rule_counts: RuleCounts,
    degree_cap: Option<usize>,
    escalations: Vec<Escalation>,
}

/// `low` was raised to `low` by escalation after `depth` eliminations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Escalation {
    pub depth: usize,
    pub low: usize,
}

/// A cube configuration: hub `d`, its three neighbours and the three outer
/// corners, all sorted.
struct CubeMatch {
    hub: VertexId,
    spokes: [VertexId; 3],
    corners: [VertexId; 3],
}

impl ReductionState {
    /// Starts a reduction of `graph` with lower bound `low0` (at least 1).
    pub fn new(graph: UGraph, low0: usize) -> Self {
        assert!(low0 >= 1, "low starts at 1 or more");
        ReductionState {
            graph,
            low: low0,
            stack: Vec::new(),
            rule_counts: RuleCounts::default(),
            degree_cap: Some(DEFAULT_DEGREE_CAP),
            escalations: Vec::new(),
        }
    }

    /// `None` disables the cap.
    pub fn with_degree_cap(mut self, cap: Option<usize>) -> Self {
        self.degree_cap = cap;
        self
    }

    pub fn graph(&self) -> &UGraph {
        &self.graph
    }

    pub fn low(&self) -> usize {
        self.low
    }

    pub fn stack(&self) -> &[EliminationRecord] {
        &self.stack
    }

    pub fn rule_counts(&self) -> RuleCounts {
        self.rule_counts
    }

    pub fn degree_cap(&self) -> Option<usize> {
        self.degree_cap
    }

    pub fn escalations(&self) -> &[Escalation] {
        &self.escalations
    }

    /// Removed vertices, first removed first.
    pub fn eliminated(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.stack.iter().map(|r| r.vertex)
    }

    pub fn into_parts(self) -> (UGraph, usize, Vec<EliminationRecord>) {
        (self.graph, self.low, self.stack)
    }

    fn within_cap(&self, d: usize) -> bool {
        self.degree_cap.is_none_or(|c| d <= c)
    }

    /// Completes the neighbourhood of `v` into a clique, removes `v` and
    /// records it. Returns the former neighbours.
    fn eliminate(&mut self, v: VertexId, rule: RuleKind) -> Vec<VertexId> {
        let nb = self.graph.neighbors_sorted(v).expect("vertex present");
        self.graph.make_clique(&nb).expect("neighbours present");
        self.graph.remove_vertex(v).expect("vertex present");
        self.stack.push(EliminationRecord {
            vertex: v,
            rule,
            degree_at_removal: nb.len(),
            neighbors_at_removal: nb.clone(),
        });
        debug_assert!(self.graph.audit());
        nb
    }

    fn raise_low(&mut self, to: usize) {
        self.low = self.low.max(to);
    }

    fn simplicial_applicable(&self, v: VertexId) -> Result<bool> {
        let d = self.graph.degree(v)?;
        Ok(self.within_cap(d) && self.graph.is_simplicial(v)?)
    }

    /// Simplicial vertex rule: removes `v` if its neighbourhood is a clique
    /// and raises `low` to its degree.
    pub fn apply_simplicial(&mut self, v: VertexId) -> Result<bool> {
        if !self.simplicial_applicable(v)? {
            return Ok(false);
        }
        self.fire_simplicial(v);
        Ok(true)
    }

    fn fire_simplicial(&mut self, v: VertexId) -> Vec<VertexId> {
        let d = self.graph.degree(v).unwrap();
        let rule = RuleKind::simplicial_for_degree(d);
        self.rule_counts.bump(rule);
        self.raise_low(d);
        self.eliminate(v, rule)
    }

    /// Almost simplicial vertex rule, gated on `low >= degree(v)`.
    /// Simplicial vertices are left to [`Self::apply_simplicial`].
    pub fn apply_almost_simplicial(&mut self, v: VertexId) -> Result<bool> {
        let d = self.graph.degree(v)?;
        if d == 0 || d > self.low || !self.within_cap(d) {
            return Ok(false);
        }
        let nb = self.graph.neighbors_sorted(v)?;
        if self.graph.is_clique_unchecked(&nb) {
            return Ok(false);
        }
        if almost_simplicial_witness_in(&self.graph, &nb).is_none() {
            return Ok(false);
        }
        self.fire_almost(v);
        Ok(true)
    }

    fn fire_almost(&mut self, v: VertexId) -> Vec<VertexId> {
        let d = self.graph.degree(v).unwrap();
        let rule = RuleKind::almost_for_degree(d);
        self.rule_counts.bump(rule);
        self.eliminate(v, rule)
    }

    /// Buddy rule: two degree-3 vertices with the same neighbourhood, gated on
    /// `low >= 3`. `v` is pushed before `w`.
    pub fn apply_buddy(&mut self, v: VertexId, w: VertexId) -> Result<bool> {
        if v == w {
            return Err(Error::InvalidArgument("buddy rule needs two distinct vertices".into()));
        }
        let (dv, dw) = (self.graph.degree(v)?, self.graph.degree(w)?);
        if dv != 3 || dw != 3 || self.low < 3 {
            return Ok(false);
        }
        if self.graph.neighbors_sorted(v)? != self.graph.neighbors_sorted(w)? {
            return Ok(false);
        }
        self.fire_buddy(v, w);
        Ok(true)
    }

    fn fire_buddy(&mut self, v: VertexId, w: VertexId) -> Vec<VertexId> {
        self.rule_counts.bump(RuleKind::Buddy);
        let nb = self.eliminate(v, RuleKind::Buddy);
        self.eliminate(w, RuleKind::Buddy);
        nb
    }

    /// Cube rule on the four internal vertices of the configuration (any
    /// order). On success the three spokes are removed, hub and corners form
    /// a K4 and `low` is raised to at least 3.
    pub fn apply_cube(&mut self, internal: &[VertexId]) -> Result<bool> {
        if internal.len() != 4 {
            return Err(Error::InvalidArgument(format!(
                "cube rule takes 4 internal vertices, got {}",
                internal.len()
            )));
        }
        for &x in internal {
            self.graph.degree(x)?;
        }
        let Some(hub) = internal.iter().copied().find(|&x| {
            internal.iter().all(|&y| y == x || self.graph.has_edge(x, y))
        }) else {
            return Ok(false);
        };
        match self.match_cube(hub) {
            Some(m) if internal.iter().all(|x| *x == hub || m.spokes.contains(x)) => {
                self.fire_cube(&m);
                Ok(true)
            }
            _ => Ok(false),
        }
    }

    fn match_cube(&self, hub: VertexId) -> Option<CubeMatch> {
        let g = &self.graph;
        if g.degree(hub).ok()? != 3 {
            return None;
        }
        let spokes = g.neighbors_sorted(hub).ok()?;
        let mut outer: Vec<Vec<VertexId>> = Vec::with_capacity(3);
        for &s in &spokes {
            if g.degree(s).ok()? != 3 {
                return None;
            }
            let e: Vec<VertexId> = g.neighbors_sorted(s).ok()?.into_iter().filter(|&x| x != hub).collect();
            if e.iter().any(|x| spokes.contains(x)) {
                return None;
            }
            outer.push(e);
        }
        let mut corners: Vec<VertexId> = outer.iter().flatten().copied().collect();
        corners.sort_unstable();
        corners.dedup();
        if corners.len() != 3 {
            return None;
        }
        for i in 0..3 {
            for j in i + 1..3 {
                let shared = outer[i].iter().filter(|x| outer[j].contains(x)).count();
                if shared != 1 {
                    return None;
                }
            }
        }
        Some(CubeMatch {
            hub,
            spokes: [spokes[0], spokes[1], spokes[2]],
            corners: [corners[0], corners[1], corners[2]],
        })
    }

    fn fire_cube(&mut self, m: &CubeMatch) {
        self.rule_counts.bump(RuleKind::Cube);
        self.raise_low(3);
        // Eliminating the spokes one after another completes {hub} + corners.
        for s in m.spokes {
            self.eliminate(s, RuleKind::Cube);
        }
        debug_assert!(self
            .graph
            .is_clique_unchecked(&[m.hub, m.corners[0], m.corners[1], m.corners[2]]));
    }

    /// Raises `low` by one when the rules in `rules` are known to reduce
    /// every graph of treewidth `low` to the empty graph. Only sound when
    /// none of them applies; `low` stops climbing at 4.
    pub fn escalate_low(&mut self, rules: RuleSet) -> bool {
        if self.graph.is_empty() || self.low >= 4 || !self.complete_for(rules, self.low) {
            return false;
        }
        self.low += 1;
        self.escalations.push(Escalation {
            depth: self.stack.len(),
            low: self.low,
        });
        true
    }

    /// Whether `rules` (as run by this state) reduce every graph of
    /// treewidth at most `k` to the empty graph.
    fn complete_for(&self, rules: RuleSet, k: usize) -> bool {
        let has = |r| rules.contains(r);
        let islet_twig = (has(RuleKind::Islet) && has(RuleKind::Twig)) || has(RuleKind::Simplicial);
        let series = has(RuleKind::Series) || (has(RuleKind::AlmostSimplicial) && self.within_cap(2));
        let triangle =
            has(RuleKind::Triangle) || (has(RuleKind::AlmostSimplicial) && self.within_cap(3));
        match k {
            1 => islet_twig,
            2 => islet_twig && series,
            3 => islet_twig && series && triangle && has(RuleKind::Buddy) && has(RuleKind::Cube),
            _ => false,
        }
    }

    /// Applies rules from `rules` until none applies, escalating `low`
    /// whenever that is sound.
    pub fn reduce(&mut self, rules: RuleSet) {
        let mut work = Worklist::new(&self.graph);
        loop {
            let depth = self.stack.len();
            if let Some(touched) = self.step(rules, &mut work) {
                for r in &self.stack[depth..] {
                    work.forget(r.vertex);
                }
                work.refresh(&self.graph, &touched);
                continue;
            }
            if self.escalate_low(rules) {
                work.mark_all_almost(&self.graph);
                continue;
            }
            break;
        }
    }

    /// Finds and fires the highest-priority applicable rule. Returns the
    /// vertices whose neighbourhoods changed.
    fn step(&mut self, rules: RuleSet, work: &mut Worklist) -> Option<Vec<VertexId>> {
        let has = |r| rules.contains(r);
        let low_before = self.low;

        let touched = if let Some(v) = work
            .degree_bucket(0)
            .filter(|_| has(RuleKind::Islet) || has(RuleKind::Simplicial))
        {
            self.fire_simplicial(v)
        } else if let Some(v) = work
            .degree_bucket(1)
            .filter(|_| has(RuleKind::Twig) || has(RuleKind::Simplicial))
        {
            self.fire_simplicial(v)
        } else if let Some(v) = work.degree_bucket(2).filter(|_| has(RuleKind::Series) && self.low >= 2) {
            self.fire_almost(v)
        } else if let Some(v) = (has(RuleKind::Triangle) && self.low >= 3)
            .then(|| self.find_triangle(work))
            .flatten()
        {
            self.fire_almost(v)
        } else if let Some((v, w)) = (has(RuleKind::Buddy) && self.low >= 3)
            .then(|| self.find_buddy(work))
            .flatten()
        {
            self.fire_buddy(v, w)
        } else if let Some(m) = has(RuleKind::Cube).then(|| self.find_cube(work)).flatten() {
            self.fire_cube(&m);
            let mut t = vec![m.hub];
            t.extend(m.corners);
            t
        } else if let Some(v) = has(RuleKind::Simplicial)
            .then(|| self.find_simplicial(work))
            .flatten()
        {
            self.fire_simplicial(v)
        } else {
            let v = has(RuleKind::AlmostSimplicial)
                .then(|| self.find_almost(work))
                .flatten()?;
            self.fire_almost(v)
        };

        if self.low != low_before {
            work.mark_all_almost(&self.graph);
        }
        Some(touched)
    }

    fn find_triangle(&self, work: &Worklist) -> Option<VertexId> {
        work.small[3].iter().copied().find(|&v| {
            let nb = self.graph.neighbors_sorted(v).unwrap();
            self.graph.has_edge(nb[0], nb[1])
                || self.graph.has_edge(nb[0], nb[2])
                || self.graph.has_edge(nb[1], nb[2])
        })
    }

    fn find_buddy(&self, work: &Worklist) -> Option<(VertexId, VertexId)> {
        let mut first_with: HashMap<Vec<VertexId>, VertexId> = HashMap::new();
        let mut best: Option<(VertexId, VertexId)> = None;
        for &v in &work.small[3] {
            let key = self.graph.neighbors_sorted(v).unwrap();
            match first_with.get(&key) {
                Some(&u) => {
                    if best.is_none_or(|(bu, _)| u < bu) {
                        best = Some((u, v));
                    }
                }
                None => {
                    first_with.insert(key, v);
                }
            }
        }
        best
    }

    fn find_cube(&self, work: &Worklist) -> Option<CubeMatch> {
        work.small[3].iter().find_map(|&d| self.match_cube(d))
    }

    fn find_simplicial(&self, work: &mut Worklist) -> Option<VertexId> {
        while let Some(v) = work.simplicial_dirty.pop_first() {
            if self.graph.contains(v) && self.simplicial_applicable(v).unwrap() {
                return Some(v);
            }
        }
        None
    }

    // Reached only when the simplicial rule has nothing left (or is not
    // enabled), so simplicial vertices of degree <= low qualify here too.
    fn find_almost(&self, work: &mut Worklist) -> Option<VertexId> {
        while let Some(v) = work.almost_dirty.pop_first() {
            if !self.graph.contains(v) {
                continue;
            }
            let d = self.graph.degree(v).unwrap();
            if d == 0 || d > self.low || !self.within_cap(d) {
                continue;
            }
            let nb = self.graph.neighbors_sorted(v).unwrap();
            if almost_simplicial_witness_in(&self.graph, &nb).is_some() {
                return Some(v);
            }
        }
        None
    }
}

/// Incremental bookkeeping for the fixpoint loop: exact degree buckets for
/// degrees 0..=3 and dirty sets for the (almost) simplicial checks. A vertex
/// missing from a dirty set is known not to qualify in the current graph.
struct Worklist {
    small: [BTreeSet<VertexId>; 4],
    bucket: Vec<Option<u8>>,
    simplicial_dirty: BTreeSet<VertexId>,
    almost_dirty: BTreeSet<VertexId>,
}

impl Worklist {
    fn new(g: &UGraph) -> Self {
        let mut w = Worklist {
            small: Default::default(),
            bucket: vec![None; g.id_bound() + 1],
            simplicial_dirty: g.vertices().collect(),
            almost_dirty: g.vertices().collect(),
        };
        for v in g.vertices() {
            w.rebucket(g, v);
        }
        w
    }

    fn degree_bucket(&self, d: usize) -> Option<VertexId> {
        self.small[d].first().copied()
    }

    fn rebucket(&mut self, g: &UGraph, v: VertexId) {
        if let Some(b) = self.bucket[v.index()].take() {
            self.small[b as usize].remove(&v);
        }
        if let Ok(d) = g.degree(v) {
            if d <= 3 {
                self.small[d].insert(v);
                self.bucket[v.index()] = Some(d as u8);
            }
        }
    }

    fn forget(&mut self, v: VertexId) {
        if let Some(b) = self.bucket[v.index()].take() {
            self.small[b as usize].remove(&v);
        }
    }

    fn mark_all_almost(&mut self, g: &UGraph) {
        self.almost_dirty = g.vertices().collect();
    }

    /// `touched` are the surviving vertices whose neighbourhoods changed;
    /// anything adjacent to them may have gained a clique neighbourhood.
    fn refresh(&mut self, g: &UGraph, touched: &[VertexId]) {
        for &v in touched {
            self.rebucket(g, v);
            self.simplicial_dirty.insert(v);
            self.almost_dirty.insert(v);
            for u in g.neighbors(v).unwrap() {
                self.simplicial_dirty.insert(u);
                self.almost_dirty.insert(u);
            }
        }
    }
}

/// Reduces `g` with `rules` starting from lower bound `low0`, using the
/// default degree cap.
pub fn reduce_to_fixpoint(g: UGraph, rules: RuleSet, low0: usize) -> ReductionState {
    let mut state = ReductionState::new(g, low0);
    state.reduce(rules);
    state
}
