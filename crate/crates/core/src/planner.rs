//! Breadth-first search for shortest plans.
//!
//! Horizon `t` holds every state reachable by `t` actions. The goal is
//! checked on the initial state first, then on each new horizon in
//! generation order, so the first plan found is the shortest one and, among
//! those, the leftmost in action declaration order.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use thiserror::Error;

use crate::estate::{Digest, EState};
use crate::formula::Formula;
use crate::initial::{build_initial_state, InitialBuildReport, InitialError};
use crate::language::{classify_initially, ground_action_instances, ClassifyError, Domain};
use crate::transition::{apply, ActionInstance, TransitionError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchConfig {
    pub max_horizon: usize,
    /// Skip successors bisimilar to an already generated state.
    pub visited_check: bool,
    /// Report every optimal plan, not only the leftmost one.
    pub all_plans: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_horizon: 20,
            visited_check: true,
            all_plans: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SearchStats {
    /// States whose successors were computed.
    pub states_expanded: usize,
    /// Successors dropped as already visited.
    pub states_pruned: usize,
    /// Last horizon examined.
    pub horizons: usize,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub steps: Vec<String>,
    pub stats: SearchStats,
    /// Every optimal plan in leftmost-first order when
    /// [`SearchConfig::all_plans`] is set; otherwise empty.
    pub alternatives: Vec<Vec<String>>,
}

impl Plan {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SearchOutcome {
    Found(Plan),
    /// No plan of length up to `bound`. Longer plans may still exist.
    NoPlan {
        bound: usize,
        stats: SearchStats,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Initial(#[from] InitialError),
    #[error(transparent)]
    Transition(#[from] TransitionError),
}

pub fn goal_satisfied(s: &EState, goal: &Formula) -> bool {
    s.entails_pointed(goal)
}

/// A domain prepared for search: initial state built, actions grounded.
#[derive(Debug, Clone)]
pub struct Problem {
    pub initial: EState,
    pub report: InitialBuildReport,
    pub actions: Vec<ActionInstance>,
    pub goal: Formula,
}

impl Problem {
    pub fn new(domain: &Domain) -> Result<Self, PlanError> {
        let classification = classify_initially(domain)?;
        let (initial, report) = build_initial_state(domain, &classification)?;
        Ok(Problem {
            initial,
            report,
            actions: ground_action_instances(domain),
            goal: domain.goal(),
        })
    }

    /// Applies the named actions in order. Returns every intermediate state,
    /// starting with the initial one, or `None` if a step is not executable.
    pub fn replay(&self, steps: &[String]) -> Result<Option<Vec<EState>>, PlanError> {
        let mut states = vec![self.initial.clone()];
        for name in steps {
            let Some(action) = self.actions.iter().find(|a| &a.name == name) else {
                return Ok(None);
            };
            let current = states.last().expect("non-empty");
            match apply(current, action)? {
                Some(next) => states.push(next),
                None => return Ok(None),
            }
        }
        Ok(Some(states))
    }
}

struct Node {
    state: EState,
    parent: Option<usize>,
    action: usize,
    depth: usize,
}

pub fn plan_bfs(domain: &Domain, cfg: &SearchConfig) -> Result<SearchOutcome, PlanError> {
    search(&Problem::new(domain)?, cfg)
}

pub fn search(problem: &Problem, cfg: &SearchConfig) -> Result<SearchOutcome, PlanError> {
    let started = Instant::now();
    let mut stats = SearchStats::default();
    let initial = problem.initial.canonicalize();

    let mut nodes = vec![Node {
        state: initial.state,
        parent: None,
        action: 0,
        depth: 0,
    }];
    let mut visited: HashMap<Digest, Vec<usize>> = HashMap::new();
    if cfg.visited_check {
        visited.entry(initial.digest).or_default().push(0);
    }

    if goal_satisfied(&nodes[0].state, &problem.goal) {
        stats.wall_time = started.elapsed();
        let alternatives = if cfg.all_plans {
            vec![Vec::new()]
        } else {
            Vec::new()
        };
        return Ok(SearchOutcome::Found(Plan {
            steps: Vec::new(),
            stats,
            alternatives,
        }));
    }

    let mut frontier = vec![0usize];
    for horizon in 1..=cfg.max_horizon {
        stats.horizons = horizon;
        if frontier.is_empty() {
            break;
        }
        stats.states_expanded += frontier.len();
        log::info!("horizon {horizon}: expanding {} states", frontier.len());

        // Successors of the whole horizon in parallel; merged sequentially
        // below so the outcome matches a left-to-right expansion.
        let expanded: Vec<Vec<Option<(EState, Digest, bool)>>> = frontier
            .par_iter()
            .map(|&n| {
                problem
                    .actions
                    .iter()
                    .map(|a| {
                        Ok(apply(&nodes[n].state, a)?.map(|next| {
                            let canon = next.canonicalize();
                            let goal = goal_satisfied(&canon.state, &problem.goal);
                            (canon.state, canon.digest, goal)
                        }))
                    })
                    .collect::<Result<Vec<_>, TransitionError>>()
            })
            .collect::<Result<_, _>>()?;

        let mut next_frontier = Vec::new();
        let mut goals = Vec::new();
        'merge: for (&parent, successors) in frontier.iter().zip(expanded) {
            for (action, succ) in successors.into_iter().enumerate() {
                let Some((state, digest, goal)) = succ else {
                    continue;
                };
                if cfg.visited_check {
                    let seen = visited.entry(digest).or_default();
                    // In all-plans mode only states from earlier horizons are
                    // pruned: a state repeated within the winning horizon may
                    // lie on another optimal plan.
                    let duplicate = seen.iter().any(|&i| {
                        nodes[i].state == state && !(cfg.all_plans && nodes[i].depth == horizon)
                    });
                    if duplicate {
                        stats.states_pruned += 1;
                        continue;
                    }
                    seen.push(nodes.len());
                }
                nodes.push(Node {
                    state,
                    parent: Some(parent),
                    action,
                    depth: horizon,
                });
                let id = nodes.len() - 1;
                if goal {
                    goals.push(id);
                    if !cfg.all_plans {
                        break 'merge;
                    }
                }
                next_frontier.push(id);
            }
        }

        if let Some(&first) = goals.first() {
            stats.wall_time = started.elapsed();
            let steps = path(&nodes, &problem.actions, first);
            let alternatives = if cfg.all_plans {
                goals
                    .iter()
                    .map(|&g| path(&nodes, &problem.actions, g))
                    .collect()
            } else {
                Vec::new()
            };
            return Ok(SearchOutcome::Found(Plan {
                steps,
                stats,
                alternatives,
            }));
        }
        frontier = next_frontier;
    }

    stats.wall_time = started.elapsed();
    Ok(SearchOutcome::NoPlan {
        bound: cfg.max_horizon,
        stats,
    })
}

fn path(nodes: &[Node], actions: &[ActionInstance], mut id: usize) -> Vec<String> {
    let mut steps = Vec::new();
    while let Some(parent) = nodes[id].parent {
        steps.push(actions[nodes[id].action].name.clone());
        id = parent;
    }
    steps.reverse();
    steps
}
