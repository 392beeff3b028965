use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use treeprep::exact::exact_treewidth;
use treeprep::heuristics::HeuristicKind;
use treeprep::io::{self, Input};
use treeprep::pipeline::{self, PipelineConfig, ResidualSolver};
use treeprep::reduction::{ReductionState, RuleSet};
use treeprep::{Error, VertexId};

#[derive(Parser)]
#[command(name = "treeprep", version, about = "Safe treewidth pre-processing and triangulation")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print the moral graph of a .dag file as .gr
    Moralize { dag: PathBuf },
    /// Reduce to a fixpoint and print the residual graph
    Preprocess {
        input: PathBuf,
        #[arg(long, default_value = "ALL")]
        rules: RuleSet,
    },
    /// Run the whole method and print the stats object
    Triangulate {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
        solver: SolverArg,
        #[arg(long, default_value = "ALL")]
        rules: RuleSet,
        #[arg(long)]
        start: Option<u32>,
        /// Try every residual start vertex
        #[arg(long)]
        sweep: bool,
        #[arg(long, default_value_t = treeprep::exact::DEFAULT_DP_LIMIT)]
        exact_threshold: usize,
        #[arg(long)]
        budget: Option<u64>,
        /// Exit with status 2 instead of falling back when the budget runs out
        #[arg(long)]
        strict: bool,
        /// Write PREFIX.ord, PREFIX.fill, PREFIX.jt and PREFIX.stats.json
        #[arg(long, value_name = "PREFIX")]
        out: Option<PathBuf>,
    },
    /// Width statistics over every residual start vertex
    Sweep {
        input: PathBuf,
        #[arg(long, value_enum)]
        solver: Option<HeuristicArg>,
        #[arg(long, default_value = "ALL")]
        rules: RuleSet,
    },
    /// Exact treewidth of a .gr graph, no pre-processing
    Exact {
        graph: PathBuf,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Residual sizes under every preset rule set
    Report {
        input: PathBuf,
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Exact,
    Mcs,
    Lexp,
    Lexm,
    Best,
}

#[derive(Clone, Copy, ValueEnum)]
enum HeuristicArg {
    Mcs,
    Lexp,
    Lexm,
}

impl From<HeuristicArg> for HeuristicKind {
    fn from(h: HeuristicArg) -> Self {
        match h {
            HeuristicArg::Mcs => HeuristicKind::Mcs,
            HeuristicArg::Lexp => HeuristicKind::LexP,
            HeuristicArg::Lexm => HeuristicKind::LexM,
        }
    }
}

fn read(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path)
        .map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn read_input(path: &Path) -> Result<Input, Error> {
    io::parse_input(&read(path)?)
}

fn write(path: PathBuf, text: &str) -> Result<(), Error> {
    fs::write(&path, text).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))
}

fn with_ext(prefix: &Path, ext: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(ext);
    s.into()
}

fn run(cmd: Cmd) -> Result<(), Error> {
    match cmd {
        Cmd::Moralize { dag } => {
            let dag = io::parse_dag(&read(&dag)?)?;
            print!("{}", io::write_gr(&dag.moralize()));
        }
        Cmd::Preprocess { input, rules } => {
            let g = read_input(&input)?.moral_graph();
            let mut state = ReductionState::new(g, 1);
            state.reduce(rules);
            let comments = vec![
                format!("rules {rules}"),
                format!("low {}", state.low()),
                format!("eliminated {}", state.stack().len()),
            ];
            print!("{}", io::write_gr_relabeled(state.graph(), &comments));
        }
        Cmd::Triangulate {
            input,
            solver,
            rules,
            start,
            sweep,
            exact_threshold,
            budget,
            strict,
            out,
        } => {
            let input = read_input(&input)?;
            let residual_solver = match solver {
                SolverArg::Exact => ResidualSolver::Exact {
                    threshold: exact_threshold,
                },
                SolverArg::Mcs => ResidualSolver::Heuristic(HeuristicKind::Mcs),
                SolverArg::Lexp => ResidualSolver::Heuristic(HeuristicKind::LexP),
                SolverArg::Lexm => ResidualSolver::Heuristic(HeuristicKind::LexM),
                SolverArg::Best => ResidualSolver::BestOfAllHeuristics,
            };
            let cfg = PipelineConfig {
                rules,
                residual_solver,
                start: start.map(VertexId),
                sweep,
                exact_budget: budget,
                strict,
                ..Default::default()
            };
            let r = pipeline::run_pipeline(&input, &cfg)?;
            for w in &r.warnings {
                eprintln!("warning: {w}");
            }
            if let Some(prefix) = out {
                write(with_ext(&prefix, ".ord"), &io::write_ordering(&r.ordering))?;
                write(with_ext(&prefix, ".fill"), &io::write_fill(&r.fill.fill_edges))?;
                write(with_ext(&prefix, ".jt"), &io::write_junction_tree(&r.junction_tree))?;
                write(with_ext(&prefix, ".stats.json"), &(r.stats_json() + "\n"))?;
            }
            println!("{}", r.stats_json());
        }
        Cmd::Sweep { input, solver, rules } => {
            let input = read_input(&input)?;
            let kinds: Vec<HeuristicKind> = match solver {
                Some(h) => vec![h.into()],
                None => HeuristicKind::ALL.to_vec(),
            };
            let cfg = PipelineConfig::default().with_rules(rules);
            print!("{}", pipeline::sweep_report(&input, &cfg, &kinds)?);
        }
        Cmd::Exact { graph, budget } => {
            let g = io::parse_gr(&read(&graph)?)?;
            let r = exact_treewidth(&g, budget)?;
            println!("treewidth {}", r.treewidth);
            print!("{}", io::write_ordering(&r.ordering));
        }
        Cmd::Report { input, json } => {
            let rep = pipeline::reduction_report(&read_input(&input)?, &RuleSet::PRESETS);
            if json {
                print!("{}", rep.to_json_lines());
            } else {
                print!("{rep}");
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ Error::BudgetExceeded { .. }) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
