//! Classification of `initially` statements against the finitary S5 shapes.
//!
//! With `C` standing for common belief of all agents, `ψ` a fluent formula,
//! `l` a fluent literal and `i` an agent, the accepted shapes are:
//!
//! 1. `ψ` (holds in the pointed world)
//! 2. `C(l)`
//! 3. `C(ψ)` where `ψ` is not a literal
//! 4. `C(B(i, ψ) or B(i, not ψ))`
//! 5. `C(not B(i, ψ) and not B(i, not ψ))`

use thiserror::Error;

use super::Domain;
use crate::formula::{AgentId, FluentId, Formula, Literal};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitialKind {
    /// Holds in the pointed world.
    PointedFact(Formula),
    /// The literal holds in every world.
    CommonLiteral(Literal),
    /// The fluent formula holds in every world.
    CommonFormula(Formula),
    /// It is common belief that the agent knows whether `formula` holds.
    CommonKnowsWhether { agent: AgentId, formula: Formula },
    /// It is common belief that the agent does not know whether `formula` holds.
    CommonIgnorant { agent: AgentId, formula: Formula },
}

impl InitialKind {
    /// Shape number, 1 to 5.
    pub fn type_tag(&self) -> u8 {
        match self {
            InitialKind::PointedFact(_) => 1,
            InitialKind::CommonLiteral(_) => 2,
            InitialKind::CommonFormula(_) => 3,
            InitialKind::CommonKnowsWhether { .. } => 4,
            InitialKind::CommonIgnorant { .. } => 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialEntry {
    /// Position of the statement among the domain's `initially` statements.
    pub index: usize,
    pub kind: InitialKind,
}

/// Whether every fluent must be mentioned by some common-belief statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Coverage {
    /// Uncovered fluents are an error.
    #[default]
    Strict,
    /// Uncovered fluents are reported in [`InitialClassification::uncovered`].
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InitialClassification {
    pub entries: Vec<InitialEntry>,
    /// Per fluent: `Some(value)` if initially known, `None` if unknown.
    pub known: Vec<Option<bool>>,
    /// Fluents mentioned by no statement of shapes 2 to 5.
    pub uncovered: Vec<FluentId>,
}

impl InitialClassification {
    /// Number of initially unknown fluents.
    pub fn unknown_count(&self) -> usize {
        self.known.iter().filter(|k| k.is_none()).count()
    }

    pub fn unknown_fluents(&self) -> impl Iterator<Item = FluentId> + '_ {
        self.known
            .iter()
            .enumerate()
            .filter(|(_, k)| k.is_none())
            .map(|(i, _)| FluentId(i as u32))
    }

    pub fn of_type(&self, tag: u8) -> impl Iterator<Item = &InitialKind> {
        self.entries
            .iter()
            .map(|e| &e.kind)
            .filter(move |k| k.type_tag() == tag)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("initially statement #{index} `{formula}` is not a finitary S5 formula")]
    NotFinitaryS5 { index: usize, formula: String },
    #[error("fluent `{0}` is not mentioned by any common-belief initially statement")]
    Uncovered(String),
    #[error("fluent `{0}` is initially known to be both true and false")]
    Contradiction(String),
}

pub fn classify_initially(domain: &Domain) -> Result<InitialClassification, ClassifyError> {
    classify_initially_with(domain, Coverage::Strict)
}

pub fn classify_initially_with(
    domain: &Domain,
    coverage: Coverage,
) -> Result<InitialClassification, ClassifyError> {
    let sig = &*domain.signature;
    let all = sig.all_agents();
    let mut entries = Vec::with_capacity(domain.initially.len());
    let mut known: Vec<Option<bool>> = vec![None; sig.fluent_count()];
    let mut covered = vec![false; sig.fluent_count()];

    for (index, formula) in domain.initially.iter().enumerate() {
        let kind = shape(formula, all).ok_or_else(|| ClassifyError::NotFinitaryS5 {
            index,
            formula: formula.display(sig).to_string(),
        })?;
        if kind.type_tag() >= 2 {
            formula.for_each_fluent(&mut |f| covered[f.index()] = true);
        }
        if let InitialKind::CommonLiteral(lit) = &kind {
            let slot = &mut known[lit.fluent.index()];
            match *slot {
                Some(v) if v != lit.positive => {
                    return Err(ClassifyError::Contradiction(
                        sig.fluent_name(lit.fluent).into(),
                    ));
                }
                _ => *slot = Some(lit.positive),
            }
        }
        entries.push(InitialEntry { index, kind });
    }

    let uncovered: Vec<FluentId> = sig.fluent_ids().filter(|f| !covered[f.index()]).collect();
    if coverage == Coverage::Strict {
        if let Some(f) = uncovered.first() {
            return Err(ClassifyError::Uncovered(sig.fluent_name(*f).into()));
        }
    }
    Ok(InitialClassification {
        entries,
        known,
        uncovered,
    })
}

fn shape(formula: &Formula, all: crate::formula::AgentSet) -> Option<InitialKind> {
    if formula.is_fluent_formula() {
        return Some(InitialKind::PointedFact(formula.clone()));
    }
    let Formula::Common(group, inner) = formula else {
        return None;
    };
    if *group != all {
        return None;
    }
    if inner.is_fluent_formula() {
        return Some(match inner.as_literal() {
            Some(lit) => InitialKind::CommonLiteral(lit),
            None => InitialKind::CommonFormula((**inner).clone()),
        });
    }
    match &**inner {
        Formula::Or(a, b) => {
            let (agent, formula) = complementary_beliefs(a, b)?;
            Some(InitialKind::CommonKnowsWhether { agent, formula })
        }
        Formula::And(a, b) => {
            let (Formula::Not(a), Formula::Not(b)) = (&**a, &**b) else {
                return None;
            };
            let (agent, formula) = complementary_beliefs(a, b)?;
            Some(InitialKind::CommonIgnorant { agent, formula })
        }
        _ => None,
    }
}

/// Matches `B(i, ψ)` and `B(i, not ψ)` in either order, returning `(i, ψ)`.
fn complementary_beliefs(a: &Formula, b: &Formula) -> Option<(AgentId, Formula)> {
    let (Formula::Believes(ia, fa), Formula::Believes(ib, fb)) = (a, b) else {
        return None;
    };
    if ia != ib || !fa.is_fluent_formula() || !fb.is_fluent_formula() {
        return None;
    }
    if let Formula::Not(neg) = &**fb {
        if neg == fa {
            return Some((*ia, (**fa).clone()));
        }
    }
    if let Formula::Not(neg) = &**fa {
        if neg == fb {
            return Some((*ia, (**fb).clone()));
        }
    }
    None
}
