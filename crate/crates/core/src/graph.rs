//! Graph representations: the undirected [`UGraph`] every algorithm runs on,
//! the directed acyclic [`Dag`] that probabilistic networks are given as, and
//! the structural predicates the reduction rules are built from.
//!
//! Vertex ids are 1-based and never renumbered. Removing a vertex leaves a
//! hole in the id space; survivors keep their ids so that elimination stacks
//! and orderings computed on a reduced graph still refer to the original
//! graph's vertices.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashSet;
use std::fmt;
use std::hash::BuildHasherDefault;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Neighbour sets use a fixed-key hasher so that iteration order, where it
/// leaks, is identical from run to run.
pub type NeighborSet = HashSet<VertexId, BuildHasherDefault<DefaultHasher>>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u32> for VertexId {
    fn from(id: u32) -> Self {
        VertexId(id)
    }
}

/// Undirected simple graph with O(1) expected adjacency queries.
#[derive(Debug, Clone, Default)]
pub struct UGraph {
    // indexed by vertex id; slot 0 is never used
    adj: Vec<Option<NeighborSet>>,
    vertex_count: usize,
    edge_count: usize,
}

impl PartialEq for UGraph {
    fn eq(&self, other: &Self) -> bool {
        self.vertex_count == other.vertex_count
            && self.edge_count == other.edge_count
            && self.vertices().eq(other.vertices())
            && self.edges() == other.edges()
    }
}

impl Eq for UGraph {}

impl UGraph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Edgeless graph on vertices `1..=n`.
    pub fn with_vertices(n: u32) -> Self {
        let mut g = Self::new();
        for id in 1..=n {
            g.add_vertex(VertexId(id));
        }
        g
    }

    /// Graph on `1..=n` with the given edges; panics on malformed input.
    /// Intended for tests and examples, use [`UGraph::try_from_edges`] for
    /// untrusted data.
    pub fn from_edges(n: u32, edges: &[(u32, u32)]) -> Self {
        Self::try_from_edges(n, edges.iter().copied()).expect("malformed edge list")
    }

    /// Builds a graph on `1..=n`, rejecting self-loops, duplicate edges and
    /// out-of-range endpoints.
    pub fn try_from_edges(n: u32, edges: impl IntoIterator<Item = (u32, u32)>) -> Result<Self> {
        let mut g = Self::with_vertices(n);
        for (u, v) in edges {
            let (u, v) = (VertexId(u), VertexId(v));
            if !g.add_edge(u, v)? {
                return Err(Error::DuplicateEdge(u, v));
            }
        }
        Ok(g)
    }

    /// Adds `v`; returns false if it was already present.
    pub fn add_vertex(&mut self, v: VertexId) -> bool {
        assert!(v.0 >= 1, "vertex ids are 1-based");
        let idx = v.index();
        if idx >= self.adj.len() {
            self.adj.resize_with(idx + 1, || None);
        }
        if self.adj[idx].is_some() {
            return false;
        }
        self.adj[idx] = Some(NeighborSet::default());
        self.vertex_count += 1;
        true
    }

    #[inline]
    pub fn contains(&self, v: VertexId) -> bool {
        matches!(self.adj.get(v.index()), Some(Some(_)))
    }

    pub(crate) fn nbrs(&self, v: VertexId) -> Result<&NeighborSet> {
        match self.adj.get(v.index()) {
            Some(Some(set)) => Ok(set),
            _ => Err(Error::UnknownVertex(v)),
        }
    }

    fn nbrs_mut(&mut self, v: VertexId) -> Result<&mut NeighborSet> {
        match self.adj.get_mut(v.index()) {
            Some(Some(set)) => Ok(set),
            _ => Err(Error::UnknownVertex(v)),
        }
    }

    /// Inserts the edge `{u, v}`; returns false if it already existed.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        if !self.nbrs_mut(u)?.insert(v) {
            return Ok(false);
        }
        self.nbrs_mut(v)?.insert(u);
        self.edge_count += 1;
        Ok(true)
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool> {
        if !self.contains(v) {
            return Err(Error::UnknownVertex(v));
        }
        if !self.nbrs_mut(u)?.remove(&v) {
            return Ok(false);
        }
        self.nbrs_mut(v)?.remove(&u);
        self.edge_count -= 1;
        Ok(true)
    }

    /// Removes `v` and its incident edges, returning its former neighbours
    /// in ascending order.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<Vec<VertexId>> {
        let set = match self.adj.get_mut(v.index()) {
            Some(slot @ Some(_)) => slot.take().unwrap(),
            _ => return Err(Error::UnknownVertex(v)),
        };
        for &w in &set {
            if let Some(Some(ws)) = self.adj.get_mut(w.index()) {
                ws.remove(&v);
            }
        }
        self.vertex_count -= 1;
        self.edge_count -= set.len();
        let mut out: Vec<_> = set.into_iter().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Turns `set` into a clique. Returns the edges that were added, each
    /// as an ordered `(lo, hi)` pair, in lexicographic order.
    pub fn make_clique(&mut self, set: &[VertexId]) -> Result<Vec<(VertexId, VertexId)>> {
        for &v in set {
            self.nbrs(v)?;
        }
        let mut sorted = set.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        let mut added = Vec::new();
        for (i, &a) in sorted.iter().enumerate() {
            for &b in &sorted[i + 1..] {
                if self.add_edge(a, b)? {
                    added.push((a, b));
                }
            }
        }
        Ok(added)
    }

    #[inline]
    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        match self.adj.get(u.index()) {
            Some(Some(set)) => set.contains(&v),
            _ => false,
        }
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.nbrs(v)?.len())
    }

    /// Neighbours of `v` in unspecified order.
    pub fn neighbors(&self, v: VertexId) -> Result<impl Iterator<Item = VertexId> + '_> {
        Ok(self.nbrs(v)?.iter().copied())
    }

    pub fn neighbors_sorted(&self, v: VertexId) -> Result<Vec<VertexId>> {
        let mut out: Vec<_> = self.nbrs(v)?.iter().copied().collect();
        out.sort_unstable();
        Ok(out)
    }

    /// Vertices in ascending id order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, slot)| slot.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_count
    }

    pub fn num_edges(&self) -> usize {
        self.edge_count
    }

    pub fn is_empty(&self) -> bool {
        self.vertex_count == 0
    }

    /// Largest id slot ever allocated (0 for a fresh graph).
    pub fn id_bound(&self) -> usize {
        self.adj.len().saturating_sub(1)
    }

    /// All edges as `(lo, hi)` pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::with_capacity(self.edge_count);
        for v in self.vertices() {
            for &w in self.adj[v.index()].as_ref().unwrap() {
                if v < w {
                    out.push((v, w));
                }
            }
        }
        out.sort_unstable();
        out
    }

    /// True iff every pair of distinct vertices in `w` is adjacent.
    pub fn is_clique(&self, w: &[VertexId]) -> Result<bool> {
        for &v in w {
            self.nbrs(v)?;
        }
        Ok(self.is_clique_unchecked(w))
    }

    pub(crate) fn is_clique_unchecked(&self, w: &[VertexId]) -> bool {
        w.iter().enumerate().all(|(i, &a)| {
            w[i + 1..]
                .iter()
                .all(|&b| a == b || self.has_edge(a, b))
        })
    }

    pub fn is_simplicial(&self, v: VertexId) -> Result<bool> {
        self.is_simplicial_capped(v, None)
    }

    /// Simpliciality test that reports `false` without scanning when
    /// `degree(v) > cap`.
    pub fn is_simplicial_capped(&self, v: VertexId, cap: Option<usize>) -> Result<bool> {
        let n = self.nbrs(v)?;
        if cap.is_some_and(|c| n.len() > c) {
            return Ok(false);
        }
        let nb: Vec<_> = n.iter().copied().collect();
        Ok(self.is_clique_unchecked(&nb))
    }

    pub fn almost_simplicial_witness(&self, v: VertexId) -> Result<Option<VertexId>> {
        self.almost_simplicial_witness_capped(v, None)
    }

    /// Lowest-id neighbour `w` of `v` such that `N(v) \ {w}` is a clique.
    pub fn almost_simplicial_witness_capped(
        &self,
        v: VertexId,
        cap: Option<usize>,
    ) -> Result<Option<VertexId>> {
        let n = self.nbrs(v)?;
        if n.is_empty() || cap.is_some_and(|c| n.len() > c) {
            return Ok(None);
        }
        let mut nb: Vec<_> = n.iter().copied().collect();
        nb.sort_unstable();
        Ok(almost_simplicial_witness_in(self, &nb))
    }

    /// Subgraph induced by `w`, ids preserved.
    pub fn induced_subgraph(&self, w: &[VertexId]) -> Result<UGraph> {
        let mut sub = UGraph::new();
        for &v in w {
            self.nbrs(v)?;
            sub.add_vertex(v);
        }
        for &v in w {
            for u in self.nbrs(v)?.iter().copied() {
                if v < u && sub.contains(u) {
                    sub.add_edge(v, u)?;
                }
            }
        }
        Ok(sub)
    }

    /// Number of connected components.
    pub fn component_count(&self) -> usize {
        let mut seen = vec![false; self.adj.len()];
        let mut count = 0;
        let mut stack = Vec::new();
        for v in self.vertices() {
            if seen[v.index()] {
                continue;
            }
            count += 1;
            seen[v.index()] = true;
            stack.push(v);
            while let Some(x) = stack.pop() {
                for &y in self.adj[x.index()].as_ref().unwrap() {
                    if !seen[y.index()] {
                        seen[y.index()] = true;
                        stack.push(y);
                    }
                }
            }
        }
        count
    }

    /// Checks symmetry, absence of self-loops and the cached counters.
    pub fn audit(&self) -> bool {
        let mut degree_sum = 0;
        let mut vertices = 0;
        for (i, slot) in self.adj.iter().enumerate() {
            let Some(set) = slot else { continue };
            if i == 0 {
                return false;
            }
            vertices += 1;
            let v = VertexId(i as u32);
            degree_sum += set.len();
            for &w in set {
                if w == v || !self.has_edge(w, v) {
                    return false;
                }
            }
        }
        vertices == self.vertex_count && degree_sum == 2 * self.edge_count
    }
}

/// `nb` must be sorted. Returns the lowest `w` in `nb` with `nb \ {w}` a
/// clique.
pub(crate) fn almost_simplicial_witness_in(g: &UGraph, nb: &[VertexId]) -> Option<VertexId> {
    // Find one non-adjacent pair; a witness must be one of its endpoints.
    let mut missing = None;
    'outer: for (i, &a) in nb.iter().enumerate() {
        for &b in &nb[i + 1..] {
            if !g.has_edge(a, b) {
                missing = Some((a, b));
                break 'outer;
            }
        }
    }
    let Some((a, b)) = missing else {
        return nb.first().copied();
    };
    [a, b].into_iter().find(|&w| {
        let rest: Vec<_> = nb.iter().copied().filter(|&x| x != w).collect();
        g.is_clique_unchecked(&rest)
    })
}

/// Directed acyclic graph.
#[derive(Debug, Clone, Default)]
pub struct Dag {
    parents: Vec<Option<Vec<VertexId>>>,
    children: Vec<Vec<VertexId>>,
    vertex_count: usize,
    arc_count: usize,
}

impl Dag {
    /// Validates acyclicity and rejects self-arcs, parallel arcs and arcs
    /// touching undeclared vertices.
    pub fn new(
        vertices: impl IntoIterator<Item = VertexId>,
        arcs: impl IntoIterator<Item = (VertexId, VertexId)>,
    ) -> Result<Self> {
        let mut dag = Dag::default();
        for v in vertices {
            assert!(v.0 >= 1, "vertex ids are 1-based");
            let idx = v.index();
            if idx >= dag.parents.len() {
                dag.parents.resize_with(idx + 1, || None);
                dag.children.resize_with(idx + 1, Vec::new);
            }
            if dag.parents[idx].is_some() {
                return Err(Error::DuplicateVertex(v));
            }
            dag.parents[idx] = Some(Vec::new());
            dag.vertex_count += 1;
        }
        for (u, v) in arcs {
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            for x in [u, v] {
                if !dag.contains(x) {
                    return Err(Error::UnknownVertex(x));
                }
            }
            let ps = dag.parents[v.index()].as_mut().unwrap();
            if ps.contains(&u) {
                return Err(Error::DuplicateEdge(u, v));
            }
            ps.push(u);
            dag.children[u.index()].push(v);
            dag.arc_count += 1;
        }
        if let Some((from, to)) = dag.find_back_arc() {
            return Err(Error::Cycle { from, to });
        }
        Ok(dag)
    }

    /// DAG on `1..=n`; panics on malformed input.
    pub fn from_arcs(n: u32, arcs: &[(u32, u32)]) -> Self {
        Self::new(
            (1..=n).map(VertexId),
            arcs.iter().map(|&(u, v)| (VertexId(u), VertexId(v))),
        )
        .expect("malformed arc list")
    }

    pub fn contains(&self, v: VertexId) -> bool {
        matches!(self.parents.get(v.index()), Some(Some(_)))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.parents
            .iter()
            .enumerate()
            .filter(|(_, p)| p.is_some())
            .map(|(i, _)| VertexId(i as u32))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_count
    }

    pub fn num_arcs(&self) -> usize {
        self.arc_count
    }

    pub fn parents(&self, v: VertexId) -> Result<&[VertexId]> {
        match self.parents.get(v.index()) {
            Some(Some(p)) => Ok(p),
            _ => Err(Error::UnknownVertex(v)),
        }
    }

    pub fn children(&self, v: VertexId) -> Result<&[VertexId]> {
        self.parents(v)?;
        Ok(&self.children[v.index()])
    }

    /// Arcs `(u, v)` meaning `u -> v`, in lexicographic order.
    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .vertices()
            .flat_map(|u| self.children[u.index()].iter().map(move |&v| (u, v)))
            .collect();
        out.sort_unstable();
        out
    }

    /// Undirected graph with one edge per arc, no marriages.
    pub fn skeleton(&self) -> UGraph {
        let mut g = UGraph::new();
        for v in self.vertices() {
            g.add_vertex(v);
        }
        for (u, v) in self.arcs() {
            // anti-parallel arcs cannot exist in an acyclic graph
            g.add_edge(u, v).expect("endpoints exist");
        }
        g
    }

    /// Moral graph: the skeleton plus an edge between every pair of
    /// vertices that share a child.
    pub fn moralize(&self) -> UGraph {
        let mut g = self.skeleton();
        for v in self.vertices() {
            let ps = self.parents[v.index()].as_ref().unwrap();
            g.make_clique(ps).expect("parents exist");
        }
        g
    }

    // Iterative DFS; an arc into a vertex still on the stack closes a cycle.
    fn find_back_arc(&self) -> Option<(VertexId, VertexId)> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            New,
            Active,
            Done,
        }
        let mut mark = vec![Mark::New; self.parents.len()];
        for root in self.vertices() {
            if mark[root.index()] != Mark::New {
                continue;
            }
            let mut stack = vec![(root, 0usize)];
            mark[root.index()] = Mark::Active;
            while let Some(&mut (u, ref mut next)) = stack.last_mut() {
                let kids = &self.children[u.index()];
                if *next < kids.len() {
                    let w = kids[*next];
                    *next += 1;
                    match mark[w.index()] {
                        Mark::Active => return Some((u, w)),
                        Mark::New => {
                            mark[w.index()] = Mark::Active;
                            stack.push((w, 0));
                        }
                        Mark::Done => {}
                    }
                } else {
                    mark[u.index()] = Mark::Done;
                    stack.pop();
                }
            }
        }
        None
    }
}

/// Moral graph of `g`.
pub fn moralize(g: &Dag) -> UGraph {
    g.moralize()
}
