//! Construction of the unique initial state of a finitary S5 theory.
//!
//! Candidate worlds fix every initially known fluent and range over all
//! combinations of the unknown ones. Worlds violating a common fluent
//! formula are discarded; the rest are fully connected for every agent,
//! after which each "agent knows whether ψ" statement removes that agent's
//! edges between worlds disagreeing on ψ.

use thiserror::Error;

use crate::estate::{EState, EStateBuilder, Valuation, WorldId};
use crate::formula::{AgentId, Formula};
use crate::language::{Domain, InitialClassification, InitialKind};

/// Upper bound on initially unknown fluents (candidate worlds grow as 2^n).
pub const MAX_UNKNOWN_FLUENTS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialBuildReport {
    /// Number of initially unknown fluents.
    pub unknown: usize,
    /// `2^unknown`.
    pub candidate_count: usize,
    /// Candidates satisfying every common fluent formula.
    pub good_worlds: usize,
    /// Pointed world of the returned state.
    pub pointed: WorldId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InitialError {
    #[error("no candidate world satisfies the common initial conditions")]
    NoGoodWorlds,
    #[error("no world satisfies every pointed-world initial condition")]
    NoPointedWorld,
    #[error("{0} worlds satisfy the pointed-world initial conditions; the real world is under-constrained")]
    AmbiguousPointedWorld(usize),
    #[error("{0} initially unknown fluents exceed the limit of {MAX_UNKNOWN_FLUENTS}")]
    TooManyUnknown(usize),
}

pub fn build_initial_state(
    domain: &Domain,
    classification: &InitialClassification,
) -> Result<(EState, InitialBuildReport), InitialError> {
    let sig = &domain.signature;
    let n_fluents = sig.fluent_count();
    let unknown: Vec<_> = classification.unknown_fluents().collect();
    if unknown.len() > MAX_UNKNOWN_FLUENTS {
        return Err(InitialError::TooManyUnknown(unknown.len()));
    }
    let candidate_count = 1usize << unknown.len();

    let mut base = Valuation::new(n_fluents);
    for (i, known) in classification.known.iter().enumerate() {
        if let Some(true) = known {
            base.set(crate::formula::FluentId(i as u32), true);
        }
    }

    let common: Vec<&Formula> = classification
        .entries
        .iter()
        .filter_map(|e| match &e.kind {
            InitialKind::CommonFormula(f) => Some(f),
            _ => None,
        })
        .collect();

    // Candidate k assigns bit j of k to the j-th unknown fluent, so
    // enumeration order is ascending valuation order.
    let good: Vec<Valuation> = (0..candidate_count)
        .map(|k| {
            let mut v = base.clone();
            for (j, &f) in unknown.iter().enumerate() {
                v.set(f, k & (1 << j) != 0);
            }
            v
        })
        .filter(|v| common.iter().all(|f| f.eval_propositional(&|fl| v.get(fl))))
        .collect();
    if good.is_empty() {
        return Err(InitialError::NoGoodWorlds);
    }

    let pointed_facts: Vec<&Formula> = classification
        .entries
        .iter()
        .filter_map(|e| match &e.kind {
            InitialKind::PointedFact(f) => Some(f),
            _ => None,
        })
        .collect();
    let pointed_candidates: Vec<usize> = (0..good.len())
        .filter(|&i| {
            pointed_facts
                .iter()
                .all(|f| f.eval_propositional(&|fl| good[i].get(fl)))
        })
        .collect();
    let pointed = match pointed_candidates.as_slice() {
        [] => return Err(InitialError::NoPointedWorld),
        [p] => *p,
        many => return Err(InitialError::AmbiguousPointedWorld(many.len())),
    };

    // knows_whether[ag] holds the truth value of each of ag's ψ per world.
    let mut knows_whether: Vec<Vec<&Formula>> = vec![Vec::new(); sig.agent_count()];
    for e in &classification.entries {
        if let InitialKind::CommonKnowsWhether { agent, formula } = &e.kind {
            knows_whether[agent.index()].push(formula);
        }
    }
    let profile = |ag: usize, v: &Valuation| -> Vec<bool> {
        knows_whether[ag]
            .iter()
            .map(|f| f.eval_propositional(&|fl| v.get(fl)))
            .collect()
    };

    let mut builder = EStateBuilder::new(sig.clone());
    for v in &good {
        builder.add_world(v.clone());
    }
    for ag in 0..sig.agent_count() {
        let profiles: Vec<Vec<bool>> = good.iter().map(|v| profile(ag, v)).collect();
        for from in 0..good.len() {
            for to in 0..good.len() {
                if profiles[from] == profiles[to] {
                    builder.add_edge(from, AgentId(ag as u32), to);
                }
            }
        }
    }
    let state = builder
        .build(pointed)
        .expect("initial worlds and edges are in range");
    let report = InitialBuildReport {
        unknown: unknown.len(),
        candidate_count,
        good_worlds: good.len(),
        pointed: state.pointed(),
    };
    Ok((state, report))
}
