//! Fluent and belief formulas over a fixed signature of fluents and agents.

use std::fmt;

/// Index of a fluent in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FluentId(pub u32);

/// Index of an agent in its [`Signature`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AgentId(pub u32);

impl FluentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl AgentId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Largest number of agents an [`AgentSet`] can hold.
pub const MAX_AGENTS: usize = 64;

/// A set of agents, stored as a bitmask.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct AgentSet(u64);

impl AgentSet {
    pub const fn empty() -> Self {
        AgentSet(0)
    }

    /// The set `{0, .., n-1}`.
    pub fn all(n: usize) -> Self {
        assert!(n <= MAX_AGENTS);
        if n == MAX_AGENTS {
            AgentSet(u64::MAX)
        } else {
            AgentSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(agent: AgentId) -> Self {
        AgentSet(1u64 << agent.0)
    }

    pub fn insert(&mut self, agent: AgentId) {
        self.0 |= 1u64 << agent.0;
    }

    pub fn contains(self, agent: AgentId) -> bool {
        self.0 & (1u64 << agent.0) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: AgentSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: AgentSet) -> AgentSet {
        AgentSet(self.0 | other.0)
    }

    pub fn iter(self) -> impl Iterator<Item = AgentId> {
        let bits = self.0;
        (0..MAX_AGENTS as u32)
            .filter(move |i| bits & (1u64 << i) != 0)
            .map(AgentId)
    }
}

impl FromIterator<AgentId> for AgentSet {
    fn from_iter<I: IntoIterator<Item = AgentId>>(iter: I) -> Self {
        let mut set = AgentSet::empty();
        for agent in iter {
            set.insert(agent);
        }
        set
    }
}

/// A possibly negated fluent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub fluent: FluentId,
    pub positive: bool,
}

impl Literal {
    pub fn pos(fluent: FluentId) -> Self {
        Literal {
            fluent,
            positive: true,
        }
    }

    pub fn neg(fluent: FluentId) -> Self {
        Literal {
            fluent,
            positive: false,
        }
    }

    pub fn negated(self) -> Self {
        Literal {
            fluent: self.fluent,
            positive: !self.positive,
        }
    }

    pub fn to_formula(self) -> Formula {
        let atom = Formula::Atom(self.fluent);
        if self.positive {
            atom
        } else {
            Formula::not(atom)
        }
    }
}

/// Belief formula. A formula without modal operators is a fluent formula.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Formula {
    True,
    False,
    Atom(FluentId),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    /// `B_ag φ`: every world the agent considers possible satisfies `φ`.
    Believes(AgentId, Box<Formula>),
    /// `E_α φ`: every agent of the group believes `φ`.
    Everyone(AgentSet, Box<Formula>),
    /// `C_α φ`: common belief of the group.
    Common(AgentSet, Box<Formula>),
}

impl Formula {
    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn believes(agent: AgentId, f: Formula) -> Formula {
        Formula::Believes(agent, Box::new(f))
    }

    pub fn everyone(group: AgentSet, f: Formula) -> Formula {
        Formula::Everyone(group, Box::new(f))
    }

    pub fn common(group: AgentSet, f: Formula) -> Formula {
        Formula::Common(group, Box::new(f))
    }

    /// Conjunction of all formulas; `True` for an empty input.
    pub fn conjunction<I: IntoIterator<Item = Formula>>(parts: I) -> Formula {
        parts
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or(Formula::True)
    }

    /// Maximum nesting of modal operators.
    pub fn depth(&self) -> usize {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => 0,
            Formula::Not(f) => f.depth(),
            Formula::And(a, b) | Formula::Or(a, b) => a.depth().max(b.depth()),
            Formula::Believes(_, f) | Formula::Everyone(_, f) | Formula::Common(_, f) => {
                f.depth() + 1
            }
        }
    }

    pub fn is_fluent_formula(&self) -> bool {
        self.depth() == 0
    }

    /// `Some` if the formula is `f` or `not f`.
    pub fn as_literal(&self) -> Option<Literal> {
        match self {
            Formula::Atom(f) => Some(Literal::pos(*f)),
            Formula::Not(inner) => match **inner {
                Formula::Atom(f) => Some(Literal::neg(f)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Evaluates a fluent formula against a valuation lookup. Modal
    /// subformulas are not allowed here.
    pub fn eval_propositional(&self, holds: &impl Fn(FluentId) -> bool) -> bool {
        match self {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(f) => holds(*f),
            Formula::Not(f) => !f.eval_propositional(holds),
            Formula::And(a, b) => a.eval_propositional(holds) && b.eval_propositional(holds),
            Formula::Or(a, b) => a.eval_propositional(holds) || b.eval_propositional(holds),
            Formula::Believes(..) | Formula::Everyone(..) | Formula::Common(..) => {
                panic!("modal operator in fluent formula")
            }
        }
    }

    /// Calls `visit` on every fluent occurring in the formula.
    pub fn for_each_fluent(&self, visit: &mut impl FnMut(FluentId)) {
        match self {
            Formula::True | Formula::False => {}
            Formula::Atom(f) => visit(*f),
            Formula::Not(f)
            | Formula::Believes(_, f)
            | Formula::Everyone(_, f)
            | Formula::Common(_, f) => f.for_each_fluent(visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.for_each_fluent(visit);
                b.for_each_fluent(visit);
            }
        }
    }

    /// Calls `visit` on every agent mentioned by a modal operator.
    pub fn for_each_agent(&self, visit: &mut impl FnMut(AgentId)) {
        match self {
            Formula::True | Formula::False | Formula::Atom(_) => {}
            Formula::Not(f) => f.for_each_agent(visit),
            Formula::And(a, b) | Formula::Or(a, b) => {
                a.for_each_agent(visit);
                b.for_each_agent(visit);
            }
            Formula::Believes(ag, f) => {
                visit(*ag);
                f.for_each_agent(visit);
            }
            Formula::Everyone(group, f) | Formula::Common(group, f) => {
                group.iter().for_each(&mut *visit);
                f.for_each_agent(visit);
            }
        }
    }

    /// Renders the formula in domain-file syntax.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> FormulaDisplay<'a> {
        FormulaDisplay { formula: self, sig }
    }
}

/// The fluent and agent names of a domain. Ids index into these vectors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature {
    pub fluents: Vec<String>,
    pub agents: Vec<String>,
}

impl Signature {
    pub fn new(fluents: Vec<String>, agents: Vec<String>) -> Self {
        Signature { fluents, agents }
    }

    pub fn fluent_count(&self) -> usize {
        self.fluents.len()
    }

    pub fn agent_count(&self) -> usize {
        self.agents.len()
    }

    pub fn fluent(&self, name: &str) -> Option<FluentId> {
        self.fluents
            .iter()
            .position(|f| f == name)
            .map(|i| FluentId(i as u32))
    }

    pub fn agent(&self, name: &str) -> Option<AgentId> {
        self.agents
            .iter()
            .position(|a| a == name)
            .map(|i| AgentId(i as u32))
    }

    pub fn fluent_name(&self, id: FluentId) -> &str {
        &self.fluents[id.index()]
    }

    pub fn agent_name(&self, id: AgentId) -> &str {
        &self.agents[id.index()]
    }

    pub fn fluent_ids(&self) -> impl Iterator<Item = FluentId> {
        (0..self.fluents.len() as u32).map(FluentId)
    }

    pub fn agent_ids(&self) -> impl Iterator<Item = AgentId> {
        (0..self.agents.len() as u32).map(AgentId)
    }

    pub fn all_agents(&self) -> AgentSet {
        AgentSet::all(self.agents.len())
    }
}

pub struct FormulaDisplay<'a> {
    formula: &'a Formula,
    sig: &'a Signature,
}

impl FormulaDisplay<'_> {
    fn write_group(&self, f: &mut fmt::Formatter<'_>, group: AgentSet) -> fmt::Result {
        f.write_str("[")?;
        for (i, ag) in group.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str(self.sig.agent_name(ag))?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for FormulaDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sub = |formula| FormulaDisplay {
            formula,
            sig: self.sig,
        };
        match self.formula {
            Formula::True => f.write_str("true"),
            Formula::False => f.write_str("false"),
            Formula::Atom(id) => f.write_str(self.sig.fluent_name(*id)),
            Formula::Not(inner) => write!(f, "not {}", sub(inner)),
            Formula::And(a, b) => write!(f, "({} and {})", sub(a), sub(b)),
            Formula::Or(a, b) => write!(f, "({} or {})", sub(a), sub(b)),
            Formula::Believes(ag, inner) => {
                write!(f, "B({}, {})", self.sig.agent_name(*ag), sub(inner))
            }
            Formula::Everyone(group, inner) => {
                f.write_str("E(")?;
                self.write_group(f, *group)?;
                write!(f, ", {})", sub(inner))
            }
            Formula::Common(group, inner) => {
                f.write_str("C(")?;
                self.write_group(f, *group)?;
                write!(f, ", {})", sub(inner))
            }
        }
    }
}
