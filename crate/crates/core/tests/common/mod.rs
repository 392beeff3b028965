//! Brute-force oracles and random instance generators shared by the
//! integration tests. Nothing here calls into the library's algorithms
//! except graph construction and accessors.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

use treeprep::{Dag, UGraph, VertexId};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Dense bitmask adjacency over the vertices of `g`, indexed in ascending id
/// order.
pub struct Masks {
    pub ids: Vec<VertexId>,
    pub adj: Vec<u32>,
}

impl Masks {
    pub fn new(g: &UGraph) -> Self {
        let ids: Vec<VertexId> = g.vertices().collect();
        assert!(ids.len() <= 24, "oracle limited to 24 vertices");
        let idx = |v: VertexId| ids.iter().position(|&x| x == v).unwrap();
        let mut adj = vec![0u32; ids.len()];
        for (u, v) in g.edges() {
            let (a, b) = (idx(u), idx(v));
            adj[a] |= 1 << b;
            adj[b] |= 1 << a;
        }
        Masks { ids, adj }
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn is_clique(&self, set: u32) -> bool {
        let mut rest = set;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if (self.adj[i] | (1 << i)) & set != set {
                return false;
            }
        }
        true
    }
}

/// Vertices outside `s ∪ {v}` reachable from `v` through `s`.
fn q_set(m: &Masks, s: u32, v: usize) -> u32 {
    let mut seen = 1u32 << v;
    let mut stack = vec![v];
    let mut out = 0u32;
    while let Some(x) = stack.pop() {
        let mut nb = m.adj[x] & !seen;
        seen |= nb;
        while nb != 0 {
            let y = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            if s >> y & 1 == 1 {
                stack.push(y);
            } else {
                out |= 1 << y;
            }
        }
    }
    out
}

/// Treewidth by the classic recurrence over vertex sets:
/// tw(S) = min over v in S of max(tw(S - v), |Q(S - v, v)|).
pub fn treewidth(g: &UGraph) -> usize {
    let m = Masks::new(g);
    let n = m.n();
    if n == 0 {
        return 0;
    }
    let full = (1u32 << n) - 1;
    let mut tw = vec![u8::MAX; 1usize << n];
    tw[0] = 0;
    for s in 1..=full {
        let mut best = u8::MAX;
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let without = s & !(1 << v);
            let q = q_set(&m, without, v).count_ones() as u8;
            best = best.min(tw[without as usize].max(q));
        }
        tw[s as usize] = best;
    }
    tw[full as usize] as usize
}

/// Width of an elimination order given as indices into `m.ids`.
fn order_width(m: &Masks, order: &[usize]) -> usize {
    let mut adj = m.adj.clone();
    let mut gone = 0u32;
    let mut width = 0;
    for &v in order {
        let nb = adj[v] & !gone;
        width = width.max(nb.count_ones() as usize);
        let mut rest = nb;
        while rest != 0 {
            let x = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            adj[x] |= nb & !(1 << x);
        }
        gone |= 1 << v;
    }
    width
}

/// Treewidth as the minimum width over all n! elimination orders.
pub fn treewidth_by_permutations(g: &UGraph) -> usize {
    let m = Masks::new(g);
    let mut order: Vec<usize> = (0..m.n()).collect();
    let mut best = usize::MAX;
    permute(&mut order, 0, &mut |o| best = best.min(order_width(&m, o)));
    if m.n() == 0 {
        0
    } else {
        best
    }
}

fn permute(xs: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == xs.len() {
        f(xs);
        return;
    }
    for i in k..xs.len() {
        xs.swap(k, i);
        permute(xs, k + 1, f);
        xs.swap(k, i);
    }
}

/// All maximal cliques by subset enumeration, each sorted, list sorted.
pub fn maximal_cliques(g: &UGraph) -> Vec<Vec<VertexId>> {
    let m = Masks::new(g);
    let n = m.n();
    let cliques: Vec<u32> = (1u32..1 << n).filter(|&s| m.is_clique(s)).collect();
    let mut out: Vec<Vec<VertexId>> = cliques
        .iter()
        .filter(|&&s| (0..n).all(|v| s >> v & 1 == 1 || !m.is_clique(s | 1 << v)))
        .map(|&s| (0..n).filter(|&v| s >> v & 1 == 1).map(|v| m.ids[v]).collect())
        .collect();
    out.sort();
    out
}

pub fn max_clique_size(g: &UGraph) -> usize {
    maximal_cliques(g).iter().map(Vec::len).max().unwrap_or(0)
}

/// Chordality by repeatedly deleting simplicial vertices.
pub fn is_chordal(g: &UGraph) -> bool {
    let m = Masks::new(g);
    let mut alive: u32 = if m.n() == 0 { 0 } else { (1u64 << m.n()) as u32 - 1 };
    'outer: while alive != 0 {
        for v in 0..m.n() {
            if alive >> v & 1 == 1 && m.is_clique(m.adj[v] & alive) {
                alive &= !(1 << v);
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// G(n, p) on ids 1..=n.
pub fn gnp(rng: &mut impl Rng, n: u32, p: f64) -> UGraph {
    let mut g = UGraph::with_vertices(n);
    for u in 1..=n {
        for v in u + 1..=n {
            if rng.gen_bool(p) {
                g.add_edge(VertexId(u), VertexId(v)).unwrap();
            }
        }
    }
    g
}

/// Random graph with about `m` edges on ids 1..=n.
pub fn gnm(rng: &mut impl Rng, n: u32, m: usize) -> UGraph {
    let mut g = UGraph::with_vertices(n);
    let max = n as usize * (n as usize - 1) / 2;
    let m = m.min(max);
    while g.num_edges() < m {
        let u = rng.gen_range(1..=n);
        let v = rng.gen_range(1..=n);
        if u != v {
            g.add_edge(VertexId(u), VertexId(v)).unwrap();
        }
    }
    g
}

/// Random k-tree on n vertices (n > k) followed by deleting each edge with
/// probability `drop`. Vertex labels are shuffled.
pub fn partial_k_tree(rng: &mut impl Rng, n: u32, k: u32, drop: f64) -> UGraph {
    assert!(n > k);
    let mut label: Vec<u32> = (1..=n).collect();
    label.shuffle(rng);
    let mut edges = Vec::new();
    let mut cliques: Vec<Vec<u32>> = vec![(0..=k).collect()];
    for i in 0..=k {
        for j in i + 1..=k {
            edges.push((i, j));
        }
    }
    for v in k + 1..n {
        let base = cliques[rng.gen_range(0..cliques.len())].clone();
        let skip = rng.gen_range(0..base.len());
        let attach: Vec<u32> = base.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &x)| x).collect();
        for &a in &attach {
            edges.push((a, v));
        }
        let mut c = attach;
        c.push(v);
        cliques.push(c);
    }
    let mut g = UGraph::with_vertices(n);
    for (a, b) in edges {
        if !rng.gen_bool(drop) {
            g.add_edge(VertexId(label[a as usize]), VertexId(label[b as usize])).unwrap();
        }
    }
    g
}

/// Random chordal graph: each new vertex attaches to a random clique of
/// the current graph, so the reverse insertion order is a perfect
/// elimination scheme.
pub fn random_chordal(rng: &mut impl Rng, n: u32) -> UGraph {
    let mut g = UGraph::with_vertices(n);
    for v in 2..=n {
        if rng.gen_bool(0.15) {
            continue;
        }
        let u = rng.gen_range(1..v);
        let mut clique = vec![VertexId(u)];
        let mut cand = g.neighbors_sorted(VertexId(u)).unwrap();
        cand.shuffle(rng);
        for c in cand {
            if rng.gen_bool(0.6) && clique.iter().all(|&x| g.has_edge(x, c)) {
                clique.push(c);
            }
        }
        for c in clique {
            g.add_edge(VertexId(v), c).unwrap();
        }
    }
    g
}

/// Random DAG on ids 1..=n: arcs go from lower to higher position in a
/// shuffled order, each with probability `p`, at most `max_parents` each.
pub fn random_dag(rng: &mut impl Rng, n: u32, p: f64, max_parents: usize) -> Dag {
    let mut topo: Vec<u32> = (1..=n).collect();
    topo.shuffle(rng);
    let mut arcs = Vec::new();
    for j in 1..topo.len() {
        let mut parents: Vec<u32> = (0..j).filter(|_| rng.gen_bool(p)).map(|i| topo[i]).collect();
        parents.shuffle(rng);
        parents.truncate(max_parents);
        for pa in parents {
            arcs.push((pa, topo[j]));
        }
    }
    Dag::from_arcs(n, &arcs)
}

pub fn ids(xs: &[u32]) -> Vec<VertexId> {
    xs.iter().copied().map(VertexId).collect()
}

/// G(n, p) with n and p drawn from the given ranges.
pub fn random_gnp(
    rng: &mut impl Rng,
    n: std::ops::RangeInclusive<u32>,
    p: std::ops::Range<f64>,
) -> UGraph {
    let n = rng.gen_range(n);
    let p = rng.gen_range(p);
    gnp(rng, n, p)
}
