//! Domain description language: lexing, parsing, validation, initial-state
//! classification and action grounding.

mod classify;
mod ground;
mod lexer;
mod parser;
mod print;

use std::fmt;
use std::sync::Arc;

pub use classify::{
    classify_initially, classify_initially_with, ClassifyError, Coverage, InitialClassification,
    InitialEntry, InitialKind,
};
pub use ground::ground_action_instances;
pub use parser::{parse_domain, ParseError, ParseErrorKind};

use crate::formula::{AgentId, FluentId, Formula, Literal, Signature};

/// Effect category of an action, inferred from its effect statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ActionKind {
    Ontic,
    Sensing,
    Announcement,
}

impl fmt::Display for ActionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ActionKind::Ontic => "ontic",
            ActionKind::Sensing => "sensing",
            ActionKind::Announcement => "announcement",
        })
    }
}

/// One statement attached to an action.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Statement {
    /// `executable a if φ`
    Executable(Formula),
    /// `a causes l if φ`
    Causes { effect: Literal, condition: Formula },
    /// `a determines f if φ`
    Determines {
        fluent: FluentId,
        condition: Formula,
    },
    /// `a announces ψ if φ`
    Announces {
        formula: Formula,
        condition: Formula,
    },
    /// `ag observes a if φ`
    Observes { agent: AgentId, condition: Formula },
    /// `ag aware_of a if φ`
    AwareOf { agent: AgentId, condition: Formula },
}

impl Statement {
    fn effect_kind(&self) -> Option<ActionKind> {
        match self {
            Statement::Causes { .. } => Some(ActionKind::Ontic),
            Statement::Determines { .. } => Some(ActionKind::Sensing),
            Statement::Announces { .. } => Some(ActionKind::Announcement),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionDecl {
    pub name: String,
    pub kind: ActionKind,
    /// Statements in source order.
    pub statements: Vec<Statement>,
}

/// A parsed and validated planning domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    pub signature: Arc<Signature>,
    /// Actions in declaration order.
    pub actions: Vec<ActionDecl>,
    pub initially: Vec<Formula>,
    pub goals: Vec<Formula>,
}

impl Domain {
    pub fn fluent_count(&self) -> usize {
        self.signature.fluent_count()
    }

    pub fn agent_count(&self) -> usize {
        self.signature.agent_count()
    }

    /// Conjunction of all goal statements.
    pub fn goal(&self) -> Formula {
        Formula::conjunction(self.goals.iter().cloned())
    }

    pub fn action(&self, name: &str) -> Option<&ActionDecl> {
        self.actions.iter().find(|a| a.name == name)
    }

    /// Renders the domain back into the file syntax accepted by
    /// [`parse_domain`].
    pub fn to_source(&self) -> String {
        print::render(self)
    }
}
