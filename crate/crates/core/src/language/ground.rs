use super::{Domain, Statement};
use crate::formula::Formula;
use crate::transition::{
    ActionInstance, ConditionalEffect, Effect, Observability, ObservabilityRule,
};

/// One [`ActionInstance`] per declared action, in declaration order.
///
/// Executability statements are conjoined (none means always executable);
/// repeated observability statements for the same agent and class are
/// disjoined.
pub fn ground_action_instances(domain: &Domain) -> Vec<ActionInstance> {
    domain
        .actions
        .iter()
        .map(|decl| {
            let mut executable = Vec::new();
            let mut effects = Vec::new();
            let mut observability: Vec<ObservabilityRule> = Vec::new();
            let mut observe = |agent, class, condition: &Formula| match observability
                .iter_mut()
                .find(|r| r.agent == agent && r.class == class)
            {
                Some(rule) => {
                    let prev = std::mem::replace(&mut rule.condition, Formula::True);
                    rule.condition = Formula::or(prev, condition.clone());
                }
                None => observability.push(ObservabilityRule {
                    agent,
                    class,
                    condition: condition.clone(),
                }),
            };
            for stmt in &decl.statements {
                match stmt {
                    Statement::Executable(c) => executable.push(c.clone()),
                    Statement::Causes { effect, condition } => effects.push(ConditionalEffect {
                        effect: Effect::Set(*effect),
                        condition: condition.clone(),
                    }),
                    Statement::Determines { fluent, condition } => {
                        effects.push(ConditionalEffect {
                            effect: Effect::Sense(*fluent),
                            condition: condition.clone(),
                        })
                    }
                    Statement::Announces { formula, condition } => {
                        effects.push(ConditionalEffect {
                            effect: Effect::Announce(formula.clone()),
                            condition: condition.clone(),
                        })
                    }
                    Statement::Observes { agent, condition } => {
                        observe(*agent, Observability::Full, condition)
                    }
                    Statement::AwareOf { agent, condition } => {
                        observe(*agent, Observability::Partial, condition)
                    }
                }
            }
            ActionInstance {
                name: decl.name.clone(),
                kind: decl.kind,
                executability: Formula::conjunction(executable),
                effects,
                observability,
            }
        })
        .collect()
}
