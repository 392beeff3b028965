//! Linear orderings, fill-in, perfect elimination schemes, maximal cliques
//! of chordal graphs and junction trees.

use std::collections::HashMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{NeighborSet, UGraph, VertexId};

/// Bijection between a vertex set and ranks `1..=n`. Rank 1 is eliminated
/// first.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LinearOrdering {
    order: Vec<VertexId>,
    position: HashMap<VertexId, usize>,
}

impl LinearOrdering {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an ordering from an elimination sequence.
    pub fn from_sequence(seq: impl IntoIterator<Item = VertexId>) -> Result<Self> {
        let order: Vec<VertexId> = seq.into_iter().collect();
        let mut position = HashMap::with_capacity(order.len());
        for (i, &v) in order.iter().enumerate() {
            if position.insert(v, i + 1).is_some() {
                return Err(Error::DuplicateVertex(v));
            }
        }
        Ok(Self { order, position })
    }

    /// `(v; self)`: `v` takes rank 1, everyone else moves down by one.
    pub fn prepend(&self, v: VertexId) -> Result<Self> {
        if self.position.contains_key(&v) {
            return Err(Error::DuplicateVertex(v));
        }
        let mut order = Vec::with_capacity(self.order.len() + 1);
        order.push(v);
        order.extend_from_slice(&self.order);
        let position = order.iter().enumerate().map(|(i, &x)| (x, i + 1)).collect();
        Ok(Self { order, position })
    }

    /// 1-based rank of `v`.
    pub fn rank(&self, v: VertexId) -> Option<usize> {
        self.position.get(&v).copied()
    }

    pub fn vertex_at(&self, rank: usize) -> Option<VertexId> {
        rank.checked_sub(1).and_then(|i| self.order.get(i)).copied()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.order.iter().copied()
    }

    /// True iff this ordering ranks exactly the vertices of `g`.
    pub fn covers(&self, g: &UGraph) -> bool {
        self.order.len() == g.num_vertices() && self.order.iter().all(|&v| g.contains(v))
    }

    fn check(&self, g: &UGraph) -> Result<()> {
        if self.covers(g) {
            Ok(())
        } else {
            Err(Error::OrderingMismatch)
        }
    }
}

/// A triangulation produced by eliminating vertices in a fixed order.
#[derive(Debug, Clone)]
pub struct FillIn {
    pub chordal_graph: UGraph,
    /// Added edges as `(lo, hi)` pairs in lexicographic order.
    pub fill_edges: Vec<(VertexId, VertexId)>,
    pub width: usize,
}

/// Eliminates vertices of `g` in the order given by `f`, turning the
/// higher-ranked neighbours of each vertex into a clique.
pub fn fill_in(g: &UGraph, f: &LinearOrdering) -> Result<FillIn> {
    f.check(g)?;
    let mut h = g.clone();
    let mut fill_edges = Vec::new();
    let mut width = 0;
    let mut higher = Vec::new();
    for (i, v) in f.iter().enumerate() {
        let rank = i + 1;
        higher.clear();
        higher.extend(h.neighbors(v)?.filter(|&w| f.rank(w).unwrap() > rank));
        width = width.max(higher.len());
        fill_edges.extend(h.make_clique(&higher)?);
    }
    fill_edges.sort_unstable();
    Ok(FillIn {
        chordal_graph: h,
        fill_edges,
        width,
    })
}

/// Width of the ordering: largest higher-neighbourhood met during
/// elimination, i.e. maximum clique size of the fill-in minus one.
pub fn treewidth_of_ordering(g: &UGraph, f: &LinearOrdering) -> Result<usize> {
    // Elimination-graph simulation without materialising the chordal graph.
    f.check(g)?;
    let mut adj: HashMap<VertexId, NeighborSet> = HashMap::with_capacity(g.num_vertices());
    for v in g.vertices() {
        adj.insert(v, g.neighbors(v)?.collect());
    }
    let mut width = 0;
    for v in f.iter() {
        let nb: Vec<VertexId> = adj.remove(&v).unwrap().into_iter().collect();
        width = width.max(nb.len());
        for &a in &nb {
            let set = adj.get_mut(&a).unwrap();
            set.remove(&v);
            set.extend(nb.iter().copied().filter(|&b| b != a));
        }
    }
    Ok(width)
}

/// True iff eliminating in order `f` adds no edges.
pub fn is_perfect_elimination(g: &UGraph, f: &LinearOrdering) -> Result<bool> {
    f.check(g)?;
    Ok(first_pes_violation(g, f).is_none())
}

fn first_pes_violation(g: &UGraph, f: &LinearOrdering) -> Option<VertexId> {
    // With no fill, a vertex's higher neighbours in the working graph are its
    // higher neighbours in g; checking each against g in turn suffices.
    for (i, v) in f.iter().enumerate() {
        let rank = i + 1;
        let higher: Vec<_> = g
            .neighbors(v)
            .unwrap()
            .filter(|&w| f.rank(w).unwrap() > rank)
            .collect();
        if !g.is_clique_unchecked(&higher) {
            return Some(v);
        }
    }
    None
}

/// Perfect elimination scheme of `g` if it is chordal: maximum cardinality
/// search from the lowest id, reversed, then verified.
pub fn chordality_check(g: &UGraph) -> Option<LinearOrdering> {
    let Some(start) = g.vertices().next() else {
        return Some(LinearOrdering::new());
    };
    let f = crate::heuristics::mcs_ordering(g, start).expect("start is a vertex");
    first_pes_violation(g, &f).is_none().then_some(f)
}

/// Maximal cliques of a chordal graph given one of its perfect elimination
/// schemes, in elimination order of the vertex that generates each.
pub fn maximal_cliques_chordal(g: &UGraph, f: &LinearOrdering) -> Result<Vec<Vec<VertexId>>> {
    f.check(g)?;
    if let Some(v) = first_pes_violation(g, f) {
        return Err(Error::NotPerfectElimination(v));
    }
    let n = f.len();
    // higher[i]: higher neighbours of the vertex at rank i+1
    let mut higher: Vec<Vec<VertexId>> = Vec::with_capacity(n);
    let mut parent: Vec<Option<usize>> = Vec::with_capacity(n);
    for (i, v) in f.iter().enumerate() {
        let mut h: Vec<_> = g
            .neighbors(v)?
            .filter(|&w| f.rank(w).unwrap() > i + 1)
            .collect();
        h.sort_unstable();
        parent.push(h.iter().map(|&w| f.rank(w).unwrap() - 1).min());
        higher.push(h);
    }
    // C(v) = {v} + higher(v) is non-maximal exactly when some u has v as its
    // lowest higher neighbour and |higher(u)| = |higher(v)| + 1.
    let mut absorbed = vec![false; n];
    for u in 0..n {
        if let Some(p) = parent[u] {
            if higher[u].len() == higher[p].len() + 1 {
                absorbed[p] = true;
            }
        }
    }
    let mut out = Vec::new();
    for (i, v) in f.iter().enumerate() {
        if absorbed[i] {
            continue;
        }
        let mut c = higher[i].clone();
        c.push(v);
        c.sort_unstable();
        out.push(c);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JunctionEdge {
    pub a: usize,
    pub b: usize,
    pub separator: Vec<VertexId>,
}

/// Tree (forest for disconnected graphs) over maximal cliques with the
/// running-intersection property.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct JunctionTree {
    pub nodes: Vec<Vec<VertexId>>,
    pub edges: Vec<JunctionEdge>,
}

impl JunctionTree {
    /// Component label of each node.
    pub fn components(&self) -> Vec<usize> {
        let mut uf = UnionFind::new(self.nodes.len());
        for e in &self.edges {
            uf.union(e.a, e.b);
        }
        let mut label = HashMap::new();
        (0..self.nodes.len())
            .map(|i| {
                let r = uf.find(i);
                let next = label.len();
                *label.entry(r).or_insert(next)
            })
            .collect()
    }

    /// For every vertex, the nodes containing it are connected in the tree.
    pub fn has_running_intersection(&self) -> bool {
        let mut holders: HashMap<VertexId, Vec<usize>> = HashMap::new();
        for (i, c) in self.nodes.iter().enumerate() {
            for &v in c {
                holders.entry(v).or_default().push(i);
            }
        }
        holders.into_iter().all(|(v, nodes)| {
            let mut uf = UnionFind::new(self.nodes.len());
            let mut merges = 0;
            for e in &self.edges {
                if self.nodes[e.a].contains(&v) && self.nodes[e.b].contains(&v) && uf.union(e.a, e.b)
                {
                    merges += 1;
                }
            }
            merges + 1 == nodes.len()
        })
    }
}

/// Maximum-weight spanning forest of the clique intersection graph.
/// Ties are broken by lexicographic order of the clique pair.
pub fn build_junction_tree(cliques: &[Vec<VertexId>]) -> JunctionTree {
    let nodes: Vec<Vec<VertexId>> = cliques
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.sort_unstable();
            c
        })
        .collect();
    let mut holders: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (i, c) in nodes.iter().enumerate() {
        for &v in c {
            holders.entry(v).or_default().push(i);
        }
    }
    let mut weight: HashMap<(usize, usize), usize> = HashMap::new();
    for list in holders.values() {
        for (k, &i) in list.iter().enumerate() {
            for &j in &list[k + 1..] {
                *weight.entry((i.min(j), i.max(j))).or_default() += 1;
            }
        }
    }
    let mut candidates: Vec<(usize, usize, usize)> =
        weight.into_iter().map(|((i, j), w)| (w, i, j)).collect();
    candidates.sort_by(|x, y| {
        y.0.cmp(&x.0).then_with(|| {
            let (lo_x, hi_x) = lex_pair(&nodes, x.1, x.2);
            let (lo_y, hi_y) = lex_pair(&nodes, y.1, y.2);
            lo_x.cmp(lo_y).then_with(|| hi_x.cmp(hi_y)).then((x.1, x.2).cmp(&(y.1, y.2)))
        })
    });
    let mut uf = UnionFind::new(nodes.len());
    let mut edges = Vec::new();
    for (_, i, j) in candidates {
        if uf.union(i, j) {
            let separator = nodes[i]
                .iter()
                .copied()
                .filter(|v| nodes[j].binary_search(v).is_ok())
                .collect();
            edges.push(JunctionEdge { a: i, b: j, separator });
        }
    }
    edges.sort_by_key(|e| (e.a, e.b));
    JunctionTree { nodes, edges }
}

fn lex_pair(nodes: &[Vec<VertexId>], i: usize, j: usize) -> (&[VertexId], &[VertexId]) {
    if nodes[i] <= nodes[j] {
        (&nodes[i], &nodes[j])
    } else {
        (&nodes[j], &nodes[i])
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}
