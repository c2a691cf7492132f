//! Machine-readable search results.

use serde::{Deserialize, Serialize};

use crate::planner::Plan;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub struct Timing {
    /// Parsing and initial-state construction.
    pub setup: u64,
    pub search: u64,
}

/// JSON shape of a successful run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanReport {
    pub plan: Vec<String>,
    pub length: usize,
    pub horizons: usize,
    pub states_expanded: usize,
    pub states_pruned: usize,
    pub time_ms: Timing,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub all_plans: Option<Vec<Vec<String>>>,
}

impl PlanReport {
    pub fn new(plan: &Plan, setup_ms: u64, all_plans: bool) -> Self {
        PlanReport {
            plan: plan.steps.clone(),
            length: plan.len(),
            horizons: plan.stats.horizons,
            states_expanded: plan.stats.states_expanded,
            states_pruned: plan.stats.states_pruned,
            time_ms: Timing {
                setup: setup_ms,
                search: plan.stats.wall_time.as_millis() as u64,
            },
            all_plans: all_plans.then(|| plan.alternatives.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report is always serializable")
    }

    /// The same report with timings zeroed, for run-to-run comparison.
    pub fn without_timing(&self) -> Self {
        PlanReport {
            time_ms: Timing::default(),
            ..self.clone()
        }
    }
}
