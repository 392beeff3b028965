//! Text formats.
//!
//! * `.gr`: `c` comment lines, one `p tw <n> <m>` line, then `m` lines
//!   `<u> <v>` with ids in `1..=n`.
//! * `.dag`: the same layout with `p dag <n> <m>`, each line an arc `u -> v`.
//! * `.ord`: one vertex id per line, first eliminated first.
//! * `.fill`: one `<u> <v>` line per fill edge, sorted.
//! * `.jt`: `node <i>: <ids>` lines, then `edge <i> <j> sep <ids>` lines.
//!
//! Duplicate edges, self-loops and cycles are parse errors, never silently
//! repaired.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Dag, UGraph, VertexId};
use crate::ordering::{JunctionTree, LinearOrdering};

/// A parsed input file.
#[derive(Debug, Clone)]
pub enum Input {
    Graph(UGraph),
    Dag(Dag),
}

impl Input {
    /// Moral graph for a DAG, the graph itself otherwise.
    pub fn moral_graph(&self) -> UGraph {
        match self {
            Input::Graph(g) => g.clone(),
            Input::Dag(d) => d.moralize(),
        }
    }

    pub fn num_vertices(&self) -> usize {
        match self {
            Input::Graph(g) => g.num_vertices(),
            Input::Dag(d) => d.num_vertices(),
        }
    }

    /// Edges of a graph, arcs of a DAG.
    pub fn num_edges(&self) -> usize {
        match self {
            Input::Graph(g) => g.num_edges(),
            Input::Dag(d) => d.num_arcs(),
        }
    }
}

impl From<UGraph> for Input {
    fn from(g: UGraph) -> Self {
        Input::Graph(g)
    }
}

impl From<Dag> for Input {
    fn from(d: Dag) -> Self {
        Input::Dag(d)
    }
}

struct Header {
    kind: String,
    n: u32,
    m: usize,
    line: usize,
}

/// Yields `(line number, tokens)` for non-comment, non-blank lines.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.is_empty() || toks[0] == "c" {
            None
        } else {
            Some((i + 1, toks))
        }
    })
}

fn parse_num<T: std::str::FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

/// `(u, v, line)` for each edge or arc line.
type Pairs = Vec<(u32, u32, usize)>;

fn parse_pairs(text: &str, expected_kind: Option<&str>) -> Result<(Header, Pairs)> {
    let mut lines = content_lines(text);
    let (line, toks) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "missing problem line"))?;
    if toks.len() != 4 || toks[0] != "p" {
        return Err(Error::parse(line, "expected problem line `p <kind> <n> <m>`"));
    }
    let header = Header {
        kind: toks[1].to_string(),
        n: parse_num(toks[2], line, "vertex count")?,
        m: parse_num(toks[3], line, "edge count")?,
        line,
    };
    if let Some(k) = expected_kind {
        if header.kind != k {
            return Err(Error::parse(line, format!("expected `p {k}`, found `p {}`", header.kind)));
        }
    }
    let mut pairs = Vec::with_capacity(header.m);
    for (line, toks) in lines {
        if toks.len() != 2 {
            return Err(Error::parse(line, "expected two vertex ids"));
        }
        let u: u32 = parse_num(toks[0], line, "vertex id")?;
        let v: u32 = parse_num(toks[1], line, "vertex id")?;
        for x in [u, v] {
            if x == 0 || x > header.n {
                return Err(Error::parse(line, format!("vertex {x} outside 1..={}", header.n)));
            }
        }
        pairs.push((u, v, line));
    }
    if pairs.len() != header.m {
        return Err(Error::parse(
            header.line,
            format!("problem line announces {} edges, found {}", header.m, pairs.len()),
        ));
    }
    Ok((header, pairs))
}

fn graph_from_pairs(n: u32, pairs: &[(u32, u32, usize)]) -> Result<UGraph> {
    let mut g = UGraph::with_vertices(n);
    for &(u, v, line) in pairs {
        let (a, b) = (VertexId(u), VertexId(v));
        match g.add_edge(a, b) {
            Ok(true) => {}
            Ok(false) => return Err(Error::parse(line, format!("duplicate edge {u} {v}"))),
            Err(e) => return Err(Error::parse(line, e.to_string())),
        }
    }
    Ok(g)
}

/// Parses an undirected graph in `.gr` format.
pub fn parse_gr(text: &str) -> Result<UGraph> {
    let (h, pairs) = parse_pairs(text, Some("tw"))?;
    graph_from_pairs(h.n, &pairs)
}

/// Parses a DAG in `.dag` format.
pub fn parse_dag(text: &str) -> Result<Dag> {
    let (h, pairs) = parse_pairs(text, Some("dag"))?;
    dag_from_pairs(h.n, &pairs)
}

fn dag_from_pairs(n: u32, pairs: &[(u32, u32, usize)]) -> Result<Dag> {
    let mut seen = std::collections::HashSet::new();
    for &(u, v, line) in pairs {
        if u == v {
            return Err(Error::parse(line, format!("self-arc on vertex {u}")));
        }
        if !seen.insert((u, v)) {
            return Err(Error::parse(line, format!("duplicate arc {u} {v}")));
        }
    }
    Dag::new(
        (1..=n).map(VertexId),
        pairs.iter().map(|&(u, v, _)| (VertexId(u), VertexId(v))),
    )
    .map_err(|e| match e {
        Error::Cycle { from, to } => {
            let line = pairs
                .iter()
                .find(|&&(u, v, _)| u == from.0 && v == to.0)
                .map_or(0, |p| p.2);
            Error::parse(line, format!("arc {from} -> {to} closes a directed cycle"))
        }
        other => other,
    })
}

/// Parses either format, dispatching on the problem line.
pub fn parse_input(text: &str) -> Result<Input> {
    let (h, pairs) = parse_pairs(text, None)?;
    match h.kind.as_str() {
        "tw" => Ok(Input::Graph(graph_from_pairs(h.n, &pairs)?)),
        "dag" => Ok(Input::Dag(dag_from_pairs(h.n, &pairs)?)),
        other => Err(Error::parse(h.line, format!("unknown problem kind `{other}`"))),
    }
}

/// Writes `g` in `.gr` format. Ids must be exactly `1..=n`; use
/// [`write_gr_relabeled`] for reduced graphs.
pub fn write_gr(g: &UGraph) -> String {
    debug_assert_eq!(g.id_bound(), g.num_vertices());
    let mut out = format!("p tw {} {}\n", g.num_vertices(), g.num_edges());
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

/// Writes `g` with ids renumbered to `1..=n` in ascending order of the
/// original ids; `c vertex <new> <original>` comments record the mapping.
pub fn write_gr_relabeled(g: &UGraph, comments: &[String]) -> String {
    let ids: Vec<VertexId> = g.vertices().collect();
    let new_id = |v: VertexId| ids.binary_search(&v).unwrap() + 1;
    let mut out = String::new();
    for c in comments {
        writeln!(out, "c {c}").unwrap();
    }
    for (i, v) in ids.iter().enumerate() {
        writeln!(out, "c vertex {} {}", i + 1, v).unwrap();
    }
    writeln!(out, "p tw {} {}", g.num_vertices(), g.num_edges()).unwrap();
    for (u, v) in g.edges() {
        writeln!(out, "{} {}", new_id(u), new_id(v)).unwrap();
    }
    out
}

pub fn write_ordering(f: &LinearOrdering) -> String {
    let mut out = String::with_capacity(f.len() * 4);
    for v in f.iter() {
        writeln!(out, "{v}").unwrap();
    }
    out
}

pub fn parse_ordering(text: &str) -> Result<LinearOrdering> {
    let mut seq = Vec::new();
    for (line, toks) in content_lines(text) {
        if toks.len() != 1 {
            return Err(Error::parse(line, "expected one vertex id"));
        }
        seq.push(VertexId(parse_num(toks[0], line, "vertex id")?));
    }
    LinearOrdering::from_sequence(seq)
}

/// `edges` need not be sorted; the output is.
pub fn write_fill(edges: &[(VertexId, VertexId)]) -> String {
    let mut sorted: Vec<(VertexId, VertexId)> =
        edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    sorted.sort_unstable();
    let mut out = String::new();
    for (u, v) in sorted {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}

fn join_ids(ids: &[VertexId]) -> String {
    ids.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" ")
}

/// Nodes are numbered from 1. Forests are preceded by a `c components <k>`
/// line and one `c component <c>: <nodes>` line per tree.
pub fn write_junction_tree(jt: &JunctionTree) -> String {
    let mut out = String::new();
    let labels = jt.components();
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    if k > 1 {
        writeln!(out, "c components {k}").unwrap();
        for c in 0..k {
            let members: Vec<String> = labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| l == c)
                .map(|(i, _)| (i + 1).to_string())
                .collect();
            writeln!(out, "c component {}: {}", c + 1, members.join(" ")).unwrap();
        }
    }
    for (i, node) in jt.nodes.iter().enumerate() {
        writeln!(out, "node {}: {}", i + 1, join_ids(node)).unwrap();
    }
    for e in &jt.edges {
        writeln!(out, "edge {} {} sep {}", e.a + 1, e.b + 1, join_ids(&e.separator)).unwrap();
    }
    out
}
