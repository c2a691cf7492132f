//! Command-line driver: read a domain file, search, print the plan.

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Parser, ValueEnum};
use eplan_core::planner::{search, Problem, SearchConfig, SearchOutcome, SearchStats};
use eplan_core::{parse_domain, EState, PlanReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "eplan",
    version,
    about = "Breadth-first multi-agent epistemic planner"
)]
pub struct RunOptions {
    /// Domain description file.
    pub input: PathBuf,
    /// Longest plan to look for.
    #[arg(long, default_value_t = 20)]
    pub max_horizon: usize,
    /// Keep successors bisimilar to an already generated state.
    #[arg(long)]
    pub no_visited: bool,
    /// Report every optimal plan.
    #[arg(long)]
    pub all_plans: bool,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub output: OutputFormat,
    /// Print search statistics (text output only).
    #[arg(long)]
    pub stats: bool,
    /// Write one graph file per state along the plan into this directory.
    #[arg(long, value_name = "DIR")]
    pub dot: Option<PathBuf>,
    /// Log progress of each horizon.
    #[arg(long)]
    pub trace: bool,
}

impl RunOptions {
    pub fn search_config(&self) -> SearchConfig {
        SearchConfig {
            max_horizon: self.max_horizon,
            visited_check: !self.no_visited,
            all_plans: self.all_plans,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Found,
    NoPlan,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Found => 0,
            Status::NoPlan => 1,
        }
    }
}

/// Exit code for any error returned by [`run`].
pub const ERROR_EXIT: i32 = 2;

pub fn run(opts: &RunOptions, out: &mut dyn Write) -> Result<Status> {
    let started = Instant::now();
    let path = opts.input.display();
    let src =
        std::fs::read_to_string(&opts.input).with_context(|| format!("cannot read {path}"))?;
    let domain = parse_domain(&src).map_err(|e| anyhow::anyhow!("{path}:{e}"))?;
    let problem =
        Problem::new(&domain).with_context(|| format!("{path}: invalid initial conditions"))?;
    let setup_ms = started.elapsed().as_millis() as u64;
    log::info!(
        "initial state: {} worlds from {} candidates ({} unknown fluents)",
        problem.initial.world_count(),
        problem.report.candidate_count,
        problem.report.unknown
    );

    let outcome = search(&problem, &opts.search_config()).context("search failed")?;
    match outcome {
        SearchOutcome::Found(plan) => {
            if let Some(dir) = &opts.dot {
                let states = problem
                    .replay(&plan.steps)?
                    .context("plan does not replay")?;
                write_dot_files(dir, &states)?;
            }
            if opts.trace {
                log_stats(&plan.stats);
            }
            match opts.output {
                OutputFormat::Json => writeln!(
                    out,
                    "{}",
                    PlanReport::new(&plan, setup_ms, opts.all_plans).to_json()
                )?,
                OutputFormat::Text => {
                    writeln!(
                        out,
                        "plan: [{}] (length {})",
                        plan.steps.join(", "),
                        plan.len()
                    )?;
                    if opts.all_plans {
                        for alt in &plan.alternatives {
                            writeln!(out, "  [{}]", alt.join(", "))?;
                        }
                    }
                    if opts.stats {
                        write_stats(out, &plan.stats, setup_ms)?;
                    }
                }
            }
            Ok(Status::Found)
        }
        SearchOutcome::NoPlan { bound, stats } => {
            if opts.trace {
                log_stats(&stats);
            }
            writeln!(out, "no plan of length at most {bound}")?;
            if opts.stats && opts.output == OutputFormat::Text {
                write_stats(out, &stats, setup_ms)?;
            }
            Ok(Status::NoPlan)
        }
    }
}

fn log_stats(stats: &SearchStats) {
    log::info!(
        "searched {} horizons, expanded {} states, pruned {}",
        stats.horizons,
        stats.states_expanded,
        stats.states_pruned
    );
}

fn write_stats(out: &mut dyn Write, stats: &SearchStats, setup_ms: u64) -> std::io::Result<()> {
    writeln!(out, "horizons: {}", stats.horizons)?;
    writeln!(out, "states expanded: {}", stats.states_expanded)?;
    writeln!(out, "states pruned: {}", stats.states_pruned)?;
    writeln!(out, "setup: {setup_ms} ms")?;
    writeln!(out, "search: {} ms", stats.wall_time.as_millis())
}

fn write_dot_files(dir: &Path, states: &[EState]) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    for (i, s) in states.iter().enumerate() {
        let file = dir.join(format!("step_{i:03}.dot"));
        std::fs::write(&file, export_dot(&s.canonicalize().state))
            .with_context(|| format!("cannot write {}", file.display()))?;
    }
    Ok(())
}

/// Graphviz rendering: one node per world labelled with its id and true
/// fluents, a double border on the pointed world, one edge per agent.
pub fn export_dot(s: &EState) -> String {
    let sig = s.signature();
    let mut out = String::from("digraph estate {\n");
    for w in s.worlds() {
        let fluents: Vec<&str> = s
            .valuation(w)
            .true_fluents(sig.fluents.len())
            .map(|f| sig.fluent_name(f))
            .collect();
        let border = if w == s.pointed() {
            ", peripheries=2"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "  w{w} [label=\"w{w} [{}]\"{border}];",
            fluents.join(", ")
        );
    }
    for (from, agent, to) in s.edges() {
        let _ = writeln!(
            out,
            "  w{from} -> w{to} [label=\"{}\"];",
            sig.agent_name(agent)
        );
    }
    out.push_str("}\n");
    out
}
