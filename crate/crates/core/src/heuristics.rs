//! Ordering heuristics: maximum cardinality search, lexicographic BFS
//! (perfect variant) and LEX M (minimal variant), plus a start-vertex sweep.
//!
//! Each search numbers vertices from `n` down to `1`, starting at a chosen
//! vertex and breaking ties by lowest id. The visit order reversed is the
//! elimination ordering, which is a perfect elimination scheme whenever the
//! input is chordal.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{UGraph, VertexId};
use crate::ordering::{treewidth_of_ordering, LinearOrdering};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum HeuristicKind {
    Mcs,
    LexP,
    LexM,
}

impl HeuristicKind {
    pub const ALL: [HeuristicKind; 3] = [HeuristicKind::Mcs, HeuristicKind::LexP, HeuristicKind::LexM];

    pub fn ordering(self, g: &UGraph, start: VertexId) -> Result<LinearOrdering> {
        match self {
            HeuristicKind::Mcs => mcs_ordering(g, start),
            HeuristicKind::LexP => lexp_ordering(g, start),
            HeuristicKind::LexM => lexm_ordering(g, start),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            HeuristicKind::Mcs => "mcs",
            HeuristicKind::LexP => "lexp",
            HeuristicKind::LexM => "lexm",
        }
    }
}

impl fmt::Display for HeuristicKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for HeuristicKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mcs" => Ok(HeuristicKind::Mcs),
            "lexp" | "lex_p" => Ok(HeuristicKind::LexP),
            "lexm" | "lex_m" => Ok(HeuristicKind::LexM),
            other => Err(Error::InvalidArgument(format!("unknown heuristic `{other}`"))),
        }
    }
}

fn check_start(g: &UGraph, start: VertexId) -> Result<()> {
    if g.contains(start) {
        Ok(())
    } else {
        Err(Error::UnknownVertex(start))
    }
}

fn reversed(visit: Vec<VertexId>) -> LinearOrdering {
    LinearOrdering::from_sequence(visit.into_iter().rev()).expect("visit order is a permutation")
}

/// Dense index of the graph's vertices, ascending by id.
struct Dense {
    ids: Vec<VertexId>,
    index: Vec<usize>,
    adj: Vec<Vec<usize>>,
}

impl Dense {
    fn new(g: &UGraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        let mut index = vec![usize::MAX; g.id_bound() + 1];
        for (i, v) in ids.iter().enumerate() {
            index[v.index()] = i;
        }
        let adj = ids
            .iter()
            .map(|&v| {
                let mut nb: Vec<usize> = g.neighbors(v).unwrap().map(|w| index[w.index()]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        Dense { ids, index, adj }
    }
}

/// Maximum cardinality search: repeatedly visit the vertex with the most
/// visited neighbours.
pub fn mcs_ordering(g: &UGraph, start: VertexId) -> Result<LinearOrdering> {
    check_start(g, start)?;
    let d = Dense::new(g);
    let n = d.ids.len();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    // max-heap on (weight, lowest index); stale entries are skipped on pop
    let mut heap: BinaryHeap<(usize, Reverse<usize>)> = (0..n).map(|i| (0, Reverse(i))).collect();
    let mut visit = Vec::with_capacity(n);
    let mut next = Some(d.index[start.index()]);
    while visit.len() < n {
        let v = match next.take() {
            Some(v) => v,
            None => loop {
                let (w, Reverse(v)) = heap.pop().expect("unvisited vertex remains");
                if !visited[v] && weight[v] == w {
                    break v;
                }
            },
        };
        visited[v] = true;
        visit.push(d.ids[v]);
        for &u in &d.adj[v] {
            if !visited[u] {
                weight[u] += 1;
                heap.push((weight[u], Reverse(u)));
            }
        }
    }
    Ok(reversed(visit))
}

/// Relabels so that labels stay dense in `0..n`, preserving order.
fn compress(labels: &mut [usize], active: &[bool]) {
    let mut distinct: Vec<usize> = labels
        .iter()
        .zip(active)
        .filter(|(_, &a)| a)
        .map(|(&l, _)| l)
        .collect();
    distinct.sort_unstable();
    distinct.dedup();
    for (l, &a) in labels.iter_mut().zip(active) {
        if a {
            *l = distinct.binary_search(l).unwrap();
        }
    }
}

fn pick_max(labels: &[usize], unnumbered: &[bool]) -> usize {
    let mut best = usize::MAX;
    for i in 0..labels.len() {
        if unnumbered[i] && (best == usize::MAX || labels[i] > labels[best]) {
            best = i;
        }
    }
    best
}

/// Lexicographic breadth-first search.
///
/// Labels are kept as dense integers: appending the current number to a
/// label is the same as bumping it half a step above its equals, which
/// doubling and compressing implements.
pub fn lexp_ordering(g: &UGraph, start: VertexId) -> Result<LinearOrdering> {
    check_start(g, start)?;
    let d = Dense::new(g);
    let n = d.ids.len();
    let mut labels = vec![0usize; n];
    let mut unnumbered = vec![true; n];
    let mut visit = Vec::with_capacity(n);
    let mut next = Some(d.index[start.index()]);
    for _ in 0..n {
        let v = next.take().unwrap_or_else(|| pick_max(&labels, &unnumbered));
        unnumbered[v] = false;
        visit.push(d.ids[v]);
        for l in labels.iter_mut() {
            *l *= 2;
        }
        for &u in &d.adj[v] {
            if unnumbered[u] {
                labels[u] += 1;
            }
        }
        compress(&mut labels, &unnumbered);
    }
    Ok(reversed(visit))
}

/// LEX M: like lexicographic BFS, but a vertex `w` is also updated when it is
/// reachable from the numbered vertex through unnumbered vertices whose
/// labels are all smaller than `w`'s. The resulting fill-in is a minimal
/// triangulation.
pub fn lexm_ordering(g: &UGraph, start: VertexId) -> Result<LinearOrdering> {
    check_start(g, start)?;
    let d = Dense::new(g);
    let n = d.ids.len();
    let mut labels = vec![0usize; n];
    let mut unnumbered = vec![true; n];
    let mut visit = Vec::with_capacity(n);
    let mut next = Some(d.index[start.index()]);
    // cost[u]: smallest achievable maximum label over path interiors from v
    // to u; -1 when u is adjacent to v
    let mut cost = vec![i64::MAX; n];
    let mut reached = Vec::new();
    for _ in 0..n {
        let v = next.take().unwrap_or_else(|| pick_max(&labels, &unnumbered));
        unnumbered[v] = false;
        visit.push(d.ids[v]);

        for &u in &reached {
            cost[u] = i64::MAX;
        }
        reached.clear();
        let mut heap = BinaryHeap::new();
        for &u in &d.adj[v] {
            if unnumbered[u] {
                cost[u] = -1;
                reached.push(u);
                heap.push(Reverse((-1i64, u)));
            }
        }
        while let Some(Reverse((c, u))) = heap.pop() {
            if c > cost[u] {
                continue;
            }
            let through = c.max(labels[u] as i64);
            for &x in &d.adj[u] {
                if unnumbered[x] && through < cost[x] {
                    if cost[x] == i64::MAX {
                        reached.push(x);
                    }
                    cost[x] = through;
                    heap.push(Reverse((through, x)));
                }
            }
        }

        let bumped: Vec<usize> = reached
            .iter()
            .copied()
            .filter(|&u| cost[u] < labels[u] as i64)
            .collect();
        for l in labels.iter_mut() {
            *l *= 2;
        }
        for u in bumped {
            labels[u] += 1;
        }
        compress(&mut labels, &unnumbered);
    }
    Ok(reversed(visit))
}

/// Width statistics of a heuristic over every possible start vertex.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepStats {
    pub min_width: usize,
    pub max_width: usize,
    pub mean_width: f64,
    pub per_start: BTreeMap<VertexId, usize>,
}

impl SweepStats {
    pub fn from_widths(per_start: BTreeMap<VertexId, usize>) -> Option<Self> {
        let min_width = *per_start.values().min()?;
        let max_width = *per_start.values().max()?;
        let total: usize = per_start.values().sum();
        Some(SweepStats {
            min_width,
            max_width,
            mean_width: total as f64 / per_start.len() as f64,
            per_start,
        })
    }

    /// Start vertex achieving the minimum width, lowest id on ties.
    pub fn best_start(&self) -> VertexId {
        self.per_start
            .iter()
            .min_by_key(|(v, w)| (**w, **v))
            .map(|(v, _)| *v)
            .expect("sweep covers at least one start")
    }
}

/// Runs `kind` once from every vertex and aggregates the widths.
pub fn sweep(g: &UGraph, kind: HeuristicKind) -> Result<SweepStats> {
    if g.is_empty() {
        return Err(Error::InvalidArgument("cannot sweep an empty graph".into()));
    }
    let mut per_start = BTreeMap::new();
    for s in g.vertices() {
        let f = kind.ordering(g, s)?;
        per_start.insert(s, treewidth_of_ordering(g, &f)?);
    }
    Ok(SweepStats::from_widths(per_start).unwrap())
}
