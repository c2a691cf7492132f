//! Successor states for ontic, sensing and announcement actions.
//!
//! Every agent is fully observant, partially observant or oblivious with
//! respect to an action, decided by evaluating the action's observability
//! conditions at the pointed world. Updated worlds are fresh copies; edges of
//! oblivious agents lead from the copies back into the untouched previous
//! state, so oblivious agents keep their old beliefs.

use log::warn;
use thiserror::Error;

use crate::estate::{EState, EStateBuilder, WorldId};
use crate::formula::{AgentId, AgentSet, FluentId, Formula, Literal};
use crate::language::ActionKind;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effect {
    /// Ontic: make the literal true.
    Set(Literal),
    /// Sensing: observers learn the fluent's value.
    Sense(FluentId),
    /// Announcement: observers learn that the fluent formula holds.
    Announce(Formula),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalEffect {
    pub effect: Effect,
    pub condition: Formula,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Observability {
    Full,
    Partial,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObservabilityRule {
    pub agent: AgentId,
    pub class: Observability,
    pub condition: Formula,
}

/// A ground action ready to be applied.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionInstance {
    pub name: String,
    pub kind: ActionKind,
    pub executability: Formula,
    pub effects: Vec<ConditionalEffect>,
    /// At most one rule per (agent, class).
    pub observability: Vec<ObservabilityRule>,
}

/// Split of all agents into the three observability classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObservabilityPartition {
    pub fully: AgentSet,
    pub partial: AgentSet,
    pub oblivious: AgentSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransitionError {
    #[error("agent `{agent}` is both fully and partially observant of `{action}`")]
    AmbiguousObservability { action: String, agent: String },
    #[error("`{action}` makes fluent `{fluent}` both true and false")]
    ConflictingEffects { action: String, fluent: String },
    #[error("sensing action `{0}` senses no fluent in the current state")]
    NothingSensed(String),
    #[error("`{action}` is a {kind} action")]
    WrongKind { action: String, kind: ActionKind },
}

pub fn resolve_observability(
    s: &EState,
    a: &ActionInstance,
) -> Result<ObservabilityPartition, TransitionError> {
    let mut fully = AgentSet::empty();
    let mut partial = AgentSet::empty();
    for rule in &a.observability {
        if s.entails_pointed(&rule.condition) {
            match rule.class {
                Observability::Full => fully.insert(rule.agent),
                Observability::Partial => partial.insert(rule.agent),
            }
        }
    }
    if let Some(agent) = fully.iter().find(|ag| partial.contains(*ag)) {
        return Err(TransitionError::AmbiguousObservability {
            action: a.name.clone(),
            agent: s.signature().agent_name(agent).into(),
        });
    }
    let all = s.signature().all_agents();
    let oblivious = all
        .iter()
        .filter(|ag| !fully.contains(*ag) && !partial.contains(*ag))
        .collect();
    Ok(ObservabilityPartition {
        fully,
        partial,
        oblivious,
    })
}

pub fn is_executable(s: &EState, a: &ActionInstance) -> bool {
    s.entails_pointed(&a.executability)
}

/// Applies `a`, or returns `None` when it is not executable.
pub fn apply(s: &EState, a: &ActionInstance) -> Result<Option<EState>, TransitionError> {
    if !is_executable(s, a) {
        return Ok(None);
    }
    let obs = resolve_observability(s, a)?;
    let next = match a.kind {
        ActionKind::Ontic => apply_ontic(s, a, &obs)?,
        ActionKind::Sensing | ActionKind::Announcement => apply_epistemic(s, a, &obs)?,
    };
    Ok(Some(next))
}

/// Worlds reachable from `from` through edges labelled with `group`,
/// including `from` itself.
fn closure(s: &EState, from: &[WorldId], group: AgentSet) -> Vec<bool> {
    let mut reached = vec![false; s.world_count()];
    let mut stack = from.to_vec();
    for &w in from {
        reached[w] = true;
    }
    while let Some(x) = stack.pop() {
        for ag in group.iter() {
            for &v in s.successors(x, ag) {
                if !reached[v] {
                    reached[v] = true;
                    stack.push(v);
                }
            }
        }
    }
    reached
}

/// Builder holding the whole previous state, so copies can point back into it.
fn builder_with_old(s: &EState) -> EStateBuilder {
    let mut b = EStateBuilder::new(s.signature().clone());
    for w in s.worlds() {
        b.add_world(s.valuation(w).clone());
    }
    for (from, ag, to) in s.edges() {
        b.add_edge(from, ag, to);
    }
    b
}

/// World-altering update. Partially observant agents are treated as
/// oblivious: they cannot tell which effects took place.
pub fn apply_ontic(
    s: &EState,
    a: &ActionInstance,
    obs: &ObservabilityPartition,
) -> Result<EState, TransitionError> {
    if a.kind != ActionKind::Ontic {
        return Err(TransitionError::WrongKind {
            action: a.name.clone(),
            kind: a.kind,
        });
    }
    let sig = s.signature().clone();
    let updated = closure(s, &[s.pointed()], obs.fully);

    let effects: Vec<(Literal, Vec<bool>)> = a
        .effects
        .iter()
        .filter_map(|e| match e.effect {
            Effect::Set(lit) => Some((lit, s.truth_set(&e.condition))),
            _ => None,
        })
        .collect();

    let mut b = builder_with_old(s);
    let mut copy_of = vec![usize::MAX; s.world_count()];
    for w in s.worlds().filter(|&w| updated[w]) {
        let mut val = s.valuation(w).clone();
        let mut imposed: Vec<(FluentId, bool)> = Vec::new();
        for (lit, active) in &effects {
            if !active[w] {
                continue;
            }
            if imposed
                .iter()
                .any(|&(f, v)| f == lit.fluent && v != lit.positive)
            {
                return Err(TransitionError::ConflictingEffects {
                    action: a.name.clone(),
                    fluent: sig.fluent_name(lit.fluent).into(),
                });
            }
            imposed.push((lit.fluent, lit.positive));
            val.set(lit.fluent, lit.positive);
        }
        copy_of[w] = b.add_world(val);
    }

    for w in s.worlds().filter(|&w| updated[w]) {
        for ag in sig.agent_ids() {
            let full = obs.fully.contains(ag);
            for &v in s.successors(w, ag) {
                let target = if full { copy_of[v] } else { v };
                b.add_edge(copy_of[w], ag, target);
            }
        }
    }
    let next = b
        .build(copy_of[s.pointed()])
        .expect("copies reference valid worlds");
    Ok(next.canonicalize().into_state())
}

/// Sensing or announcement update; fluent values never change.
pub fn apply_epistemic(
    s: &EState,
    a: &ActionInstance,
    obs: &ObservabilityPartition,
) -> Result<EState, TransitionError> {
    if a.kind == ActionKind::Ontic {
        return Err(TransitionError::WrongKind {
            action: a.name.clone(),
            kind: a.kind,
        });
    }
    let sig = s.signature().clone();
    let pointed = s.pointed();
    let active: Vec<&Effect> = a
        .effects
        .iter()
        .filter(|e| s.entails_pointed(&e.condition))
        .map(|e| &e.effect)
        .collect();
    if a.kind == ActionKind::Sensing && active.is_empty() {
        return Err(TransitionError::NothingSensed(a.name.clone()));
    }

    let consistent: Vec<bool> = s
        .worlds()
        .map(|w| {
            active.iter().all(|e| match e {
                Effect::Sense(f) => s.holds(w, *f) == s.holds(pointed, *f),
                Effect::Announce(phi) => s.entails(w, phi),
                Effect::Set(_) => true,
            })
        })
        .collect();
    if a.kind == ActionKind::Announcement && !consistent[pointed] {
        warn!("announcement `{}` is false in the pointed world", a.name);
    }

    // Condition 2: non-empty fully observant path, consistent endpoint.
    let fully_reach = s.reach_mask(pointed, obs.fully);
    // Condition 3: first edge partially observant, no oblivious label after.
    let seeds: Vec<WorldId> = obs
        .partial
        .iter()
        .flat_map(|ag| s.successors(pointed, ag).iter().copied())
        .collect();
    let partial_reach = closure(s, &seeds, obs.fully.union(obs.partial));

    let copied: Vec<bool> = s
        .worlds()
        .map(|w| w == pointed || (fully_reach[w] && consistent[w]) || partial_reach[w])
        .collect();

    let mut b = builder_with_old(s);
    let mut copy_of = vec![usize::MAX; s.world_count()];
    for w in s.worlds().filter(|&w| copied[w]) {
        copy_of[w] = b.add_world(s.valuation(w).clone());
    }
    for w in s.worlds().filter(|&w| copied[w]) {
        for ag in sig.agent_ids() {
            for &v in s.successors(w, ag) {
                if obs.oblivious.contains(ag) {
                    b.add_edge(copy_of[w], ag, v);
                } else if copied[v] && (obs.partial.contains(ag) || consistent[w] == consistent[v])
                {
                    b.add_edge(copy_of[w], ag, copy_of[v]);
                }
            }
        }
    }
    let next = b
        .build(copy_of[pointed])
        .expect("copies reference valid worlds");
    Ok(next.canonicalize().into_state())
}
