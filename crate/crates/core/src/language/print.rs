use std::fmt::Write;

use super::{Domain, Statement};
use crate::formula::Formula;

pub(super) fn render(domain: &Domain) -> String {
    let sig = &*domain.signature;
    let mut out = String::new();
    let _ = writeln!(out, "fluent {};", sig.fluents.join(", "));
    let _ = writeln!(out, "agent {};", sig.agents.join(", "));
    if !domain.actions.is_empty() {
        let names: Vec<&str> = domain.actions.iter().map(|a| a.name.as_str()).collect();
        let _ = writeln!(out, "action {};", names.join(", "));
    }

    let cond = |c: &Formula| -> String {
        if *c == Formula::True {
            String::new()
        } else {
            format!(" if {}", c.display(sig))
        }
    };

    for action in &domain.actions {
        out.push('\n');
        let name = &action.name;
        for stmt in &action.statements {
            let _ = match stmt {
                Statement::Executable(c) => {
                    writeln!(out, "executable {name} if {};", c.display(sig))
                }
                Statement::Causes { effect, condition } => writeln!(
                    out,
                    "{name} causes {}{};",
                    effect.to_formula().display(sig),
                    cond(condition)
                ),
                Statement::Determines { fluent, condition } => writeln!(
                    out,
                    "{name} determines {}{};",
                    sig.fluent_name(*fluent),
                    cond(condition)
                ),
                Statement::Announces { formula, condition } => writeln!(
                    out,
                    "{name} announces {}{};",
                    formula.display(sig),
                    cond(condition)
                ),
                Statement::Observes { agent, condition } => writeln!(
                    out,
                    "{} observes {name}{};",
                    sig.agent_name(*agent),
                    cond(condition)
                ),
                Statement::AwareOf { agent, condition } => writeln!(
                    out,
                    "{} aware_of {name}{};",
                    sig.agent_name(*agent),
                    cond(condition)
                ),
            };
        }
    }

    if !domain.initially.is_empty() {
        out.push('\n');
    }
    for f in &domain.initially {
        let _ = writeln!(out, "initially {};", f.display(sig));
    }
    if !domain.goals.is_empty() {
        out.push('\n');
    }
    for f in &domain.goals {
        let _ = writeln!(out, "goal {};", f.display(sig));
    }
    out
}
