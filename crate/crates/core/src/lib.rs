//! Multi-agent epistemic planning over possibility-based states.
//!
//! A domain file is parsed into a [`language::Domain`], its initial
//! conditions are turned into a finite pointed graph ([`estate::EState`]),
//! and [`planner::plan_bfs`] searches breadth-first for a shortest sequence
//! of actions whose result entails the goal.

pub mod estate;
pub mod formula;
pub mod initial;
pub mod language;
pub mod planner;
pub mod report;
pub mod transition;

pub use estate::{bisimilar, CanonicalForm, Digest, EState, EStateBuilder, Valuation, WorldId};
pub use formula::{AgentId, AgentSet, FluentId, Formula, Literal, Signature};
pub use initial::{build_initial_state, InitialBuildReport, InitialError};
pub use language::{
    classify_initially, classify_initially_with, ground_action_instances, parse_domain, ActionKind,
    Domain, InitialClassification, ParseError,
};
pub use planner::{
    plan_bfs, search, Plan, PlanError, Problem, SearchConfig, SearchOutcome, SearchStats,
};
pub use report::PlanReport;
pub use transition::{
    apply, is_executable, resolve_observability, ActionInstance, TransitionError,
};
