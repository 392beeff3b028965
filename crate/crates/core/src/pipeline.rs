//! End-to-end triangulation: moralise, reduce, triangulate the residual,
//! undo the reduction and build the fill-in and junction tree of the moral
//! graph. Also the reduction and start-vertex sweep reports.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{exact_treewidth_with, ExactConfig, DEFAULT_DP_LIMIT};
use crate::graph::{UGraph, VertexId};
use crate::heuristics::{HeuristicKind, SweepStats};
use crate::io::Input;
use crate::ordering::{
    build_junction_tree, fill_in, maximal_cliques_chordal, treewidth_of_ordering, FillIn,
    JunctionTree, LinearOrdering,
};
use crate::reduction::{RuleCounts, RuleSet, ReductionState, DEFAULT_DEGREE_CAP};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualSolver {
    /// Exact solve when the residual has at most `threshold` vertices,
    /// otherwise the best heuristic.
    Exact { threshold: usize },
    Heuristic(HeuristicKind),
    BestOfAllHeuristics,
}

impl Default for ResidualSolver {
    fn default() -> Self {
        ResidualSolver::Exact {
            threshold: DEFAULT_DP_LIMIT,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PipelineConfig {
    pub rules: RuleSet,
    pub residual_solver: ResidualSolver,
    /// Start vertex for heuristics; the lowest residual id when absent or
    /// already reduced away.
    pub start: Option<VertexId>,
    /// Try every start vertex and keep the best.
    pub sweep: bool,
    pub degree_cap: Option<usize>,
    /// Work limit handed to the exact solver.
    pub exact_budget: Option<u64>,
    /// Fail instead of falling back to heuristics when the exact budget runs
    /// out.
    pub strict: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            rules: RuleSet::ALL,
            residual_solver: ResidualSolver::default(),
            start: None,
            sweep: false,
            degree_cap: Some(DEFAULT_DEGREE_CAP),
            exact_budget: None,
            strict: false,
        }
    }
}

impl PipelineConfig {
    pub fn with_rules(mut self, rules: RuleSet) -> Self {
        self.rules = rules;
        self
    }

    pub fn with_solver(mut self, solver: ResidualSolver) -> Self {
        self.residual_solver = solver;
        self
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Timings {
    pub moralize: Duration,
    pub reduce: Duration,
    pub triangulate: Duration,
    pub reconstruct: Duration,
}

impl Timings {
    pub fn total(&self) -> Duration {
        self.moralize + self.reduce + self.triangulate + self.reconstruct
    }
}

#[derive(Debug, Clone)]
pub struct TriangulationResult {
    /// Elimination ordering of the moral graph.
    pub ordering: LinearOrdering,
    pub fill: FillIn,
    pub width: usize,
    pub low: usize,
    /// Certified optimal: the residual was emptied, solved exactly, or the
    /// width met the lower bound.
    pub optimal: bool,
    pub rule_counts: RuleCounts,
    /// `(vertices, edges)` left after reduction.
    pub residual_size: (usize, usize),
    /// What triangulated the residual: `none`, `exact`, a heuristic name, or
    /// `best`.
    pub solver: String,
    pub junction_tree: JunctionTree,
    pub input_vertices: usize,
    /// Edges of a graph input, arcs of a DAG input.
    pub input_edges: usize,
    pub moralized_edges: usize,
    pub components: usize,
    pub warnings: Vec<String>,
    pub timings: Timings,
}

/// The machine-readable summary written next to the ordering files.
#[derive(Debug, Clone, Serialize)]
pub struct Stats {
    pub vertices: usize,
    pub edges: usize,
    pub moralized_edges: usize,
    pub rule_counts: RuleCounts,
    pub low: usize,
    pub residual_vertices: usize,
    pub residual_edges: usize,
    pub width: usize,
    pub optimal: bool,
    pub solver: String,
    pub elapsed_ms: u64,
}

impl TriangulationResult {
    pub fn stats(&self) -> Stats {
        Stats {
            vertices: self.input_vertices,
            edges: self.input_edges,
            moralized_edges: self.moralized_edges,
            rule_counts: self.rule_counts,
            low: self.low,
            residual_vertices: self.residual_size.0,
            residual_edges: self.residual_size.1,
            width: self.width,
            optimal: self.optimal,
            solver: self.solver.clone(),
            elapsed_ms: self.timings.total().as_millis() as u64,
        }
    }

    pub fn stats_json(&self) -> String {
        serde_json::to_string(&self.stats()).expect("stats serialise")
    }
}

struct Prepared {
    moral: UGraph,
    state: ReductionState,
    moralize_time: Duration,
    reduce_time: Duration,
}

fn prepare(input: &Input, rules: RuleSet, degree_cap: Option<usize>) -> Prepared {
    let t = Instant::now();
    let moral = input.moral_graph();
    let moralize_time = t.elapsed();
    let t = Instant::now();
    let mut state = ReductionState::new(moral.clone(), 1).with_degree_cap(degree_cap);
    state.reduce(rules);
    Prepared {
        moral,
        state,
        moralize_time,
        reduce_time: t.elapsed(),
    }
}

/// Residual start vertex: the requested one if still present, else the
/// lowest id.
fn residual_start(residual: &UGraph, wanted: Option<VertexId>) -> Option<VertexId> {
    wanted
        .filter(|v| residual.contains(*v))
        .or_else(|| residual.vertices().next())
}

/// Best ordering of `g` over the given heuristics and starts; earlier kinds
/// and lower starts win ties.
fn best_heuristic(
    g: &UGraph,
    kinds: &[HeuristicKind],
    starts: &[VertexId],
) -> (usize, LinearOrdering) {
    let mut best: Option<(usize, LinearOrdering)> = None;
    for &kind in kinds {
        for &s in starts {
            let f = kind.ordering(g, s).expect("start is a residual vertex");
            let w = treewidth_of_ordering(g, &f).unwrap();
            if best.as_ref().is_none_or(|(bw, _)| w < *bw) {
                best = Some((w, f));
            }
        }
    }
    best.expect("at least one heuristic run")
}

/// Runs the full method on `input`.
pub fn run_pipeline(input: &Input, cfg: &PipelineConfig) -> Result<TriangulationResult> {
    if cfg.sweep && matches!(cfg.residual_solver, ResidualSolver::Exact { .. }) {
        return Err(Error::InvalidArgument(
            "a start-vertex sweep needs a heuristic residual solver".into(),
        ));
    }
    let prep = prepare(input, cfg.rules, cfg.degree_cap);
    let residual = prep.state.graph();
    let mut warnings = Vec::new();

    let t = Instant::now();
    let (solver, residual_order, exact_solved) = if residual.is_empty() {
        ("none".to_string(), LinearOrdering::new(), false)
    } else {
        let starts: Vec<VertexId> = if cfg.sweep {
            residual.vertices().collect()
        } else {
            residual_start(residual, cfg.start).into_iter().collect()
        };
        let heuristic_best = |starts: &[VertexId]| best_heuristic(residual, &HeuristicKind::ALL, starts).1;
        match cfg.residual_solver {
            ResidualSolver::Heuristic(kind) => {
                (kind.name().to_string(), best_heuristic(residual, &[kind], &starts).1, false)
            }
            ResidualSolver::BestOfAllHeuristics => ("best".to_string(), heuristic_best(&starts), false),
            ResidualSolver::Exact { threshold } if residual.num_vertices() > threshold => {
                warnings.push(format!(
                    "residual has {} vertices, above the exact threshold {threshold}; used heuristics",
                    residual.num_vertices()
                ));
                ("best".to_string(), heuristic_best(&starts), false)
            }
            ResidualSolver::Exact { .. } => {
                let ecfg = ExactConfig {
                    budget: cfg.exact_budget,
                    ..Default::default()
                };
                match exact_treewidth_with(residual, &ecfg) {
                    Ok(r) => ("exact".to_string(), r.ordering, true),
                    Err(e @ Error::BudgetExceeded { .. }) if !cfg.strict => {
                        warnings.push(format!("{e}; used heuristics"));
                        ("best".to_string(), heuristic_best(&starts), false)
                    }
                    Err(e) => return Err(e),
                }
            }
        }
    };
    let triangulate_time = t.elapsed();

    let t = Instant::now();
    // Popping the stack and prepending each vertex leaves the first removed
    // vertex first, so the stack read bottom-up followed by the residual
    // ordering is the same sequence.
    let ordering = LinearOrdering::from_sequence(
        prep.state.eliminated().chain(residual_order.iter()),
    )?;
    let fill = fill_in(&prep.moral, &ordering)?;
    let cliques = maximal_cliques_chordal(&fill.chordal_graph, &ordering)?;
    let junction_tree = build_junction_tree(&cliques);
    let reconstruct_time = t.elapsed();

    let edgeless = prep.moral.num_edges() == 0;
    let (low, optimal) = if edgeless {
        (0, true)
    } else {
        let low = prep.state.low();
        (low, residual.is_empty() || exact_solved || fill.width == low)
    };
    debug_assert!(fill.width >= low);

    Ok(TriangulationResult {
        width: fill.width,
        low,
        optimal,
        rule_counts: prep.state.rule_counts(),
        residual_size: (residual.num_vertices(), residual.num_edges()),
        solver,
        junction_tree,
        input_vertices: input.num_vertices(),
        input_edges: input.num_edges(),
        moralized_edges: prep.moral.num_edges(),
        components: prep.moral.component_count(),
        warnings,
        timings: Timings {
            moralize: prep.moralize_time,
            reduce: prep.reduce_time,
            triangulate: triangulate_time,
            reconstruct: reconstruct_time,
        },
        ordering,
        fill,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionRow {
    pub rules: String,
    pub vertices: usize,
    pub edges: usize,
    pub low: usize,
}

/// Residual sizes per rule set.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub vertices: usize,
    pub edges: usize,
    pub components: usize,
    pub rows: Vec<ReductionRow>,
}

impl ReductionReport {
    pub fn row(&self, rules: &str) -> Option<&ReductionRow> {
        self.rows.iter().find(|r| r.rules == rules)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            writeln!(out, "{}", serde_json::to_string(r).unwrap()).unwrap();
        }
        out
    }
}

impl fmt::Display for ReductionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "moral graph: {} vertices, {} edges, {} component(s)",
            self.vertices, self.edges, self.components
        )?;
        writeln!(f, "{:<6} {:>8} {:>8} {:>4}", "rules", "|V|", "|E|", "low")?;
        for r in &self.rows {
            writeln!(f, "{:<6} {:>8} {:>8} {:>4}", r.rules, r.vertices, r.edges, r.low)?;
        }
        Ok(())
    }
}

/// Reduces the moral graph of `input` once per named rule set.
pub fn reduction_report(input: &Input, rulesets: &[(&str, RuleSet)]) -> ReductionReport {
    let moral = input.moral_graph();
    let rows = rulesets
        .iter()
        .map(|&(name, rules)| {
            let mut state = ReductionState::new(moral.clone(), 1);
            state.reduce(rules);
            ReductionRow {
                rules: name.to_string(),
                vertices: state.graph().num_vertices(),
                edges: state.graph().num_edges(),
                low: state.low(),
            }
        })
        .collect();
    ReductionReport {
        vertices: moral.num_vertices(),
        edges: moral.num_edges(),
        components: moral.component_count(),
        rows,
    }
}

/// Widths of the moral graph's triangulations per heuristic, over every
/// start vertex of the reduced graph.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepReport {
    pub low: usize,
    pub residual_vertices: usize,
    pub per_heuristic: Vec<(HeuristicKind, SweepStats)>,
}

impl fmt::Display for SweepReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "residual: {} vertices, low {}", self.residual_vertices, self.low)?;
        writeln!(f, "{:<6} {:>4} {:>8} {:>4}", "solver", "min", "mean", "max")?;
        for (kind, s) in &self.per_heuristic {
            writeln!(
                f,
                "{:<6} {:>4} {:>8.3} {:>4}",
                kind.name(),
                s.min_width,
                s.mean_width,
                s.max_width
            )?;
        }
        Ok(())
    }
}

/// Runs the method once per residual start vertex for each heuristic in
/// `kinds`, using `cfg.rules` and `cfg.degree_cap`. With an empty residual
/// there is a single run and `per_start` is empty.
pub fn sweep_report(input: &Input, cfg: &PipelineConfig, kinds: &[HeuristicKind]) -> Result<SweepReport> {
    let prep = prepare(input, cfg.rules, cfg.degree_cap);
    let residual = prep.state.graph();
    let prefix: Vec<VertexId> = prep.state.eliminated().collect();
    let width_with = |tail: &LinearOrdering| -> Result<usize> {
        let f = LinearOrdering::from_sequence(prefix.iter().copied().chain(tail.iter()))?;
        treewidth_of_ordering(&prep.moral, &f)
    };
    let mut per_heuristic = Vec::with_capacity(kinds.len());
    for &kind in kinds {
        let stats = if residual.is_empty() {
            let w = width_with(&LinearOrdering::new())?;
            SweepStats {
                min_width: w,
                max_width: w,
                mean_width: w as f64,
                per_start: BTreeMap::new(),
            }
        } else {
            let mut per_start = BTreeMap::new();
            for s in residual.vertices() {
                per_start.insert(s, width_with(&kind.ordering(residual, s)?)?);
            }
            SweepStats::from_widths(per_start).unwrap()
        };
        per_heuristic.push((kind, stats));
    }
    let low = if prep.moral.num_edges() == 0 { 0 } else { prep.state.low() };
    Ok(SweepReport {
        low,
        residual_vertices: residual.num_vertices(),
        per_heuristic,
    })
}
