//! Seeded generators for states, formulas, actions and initial theories.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use eplan_core::transition::{ConditionalEffect, Effect, Observability, ObservabilityRule};
use eplan_core::{
    ActionInstance, ActionKind, AgentId, AgentSet, EState, EStateBuilder, FluentId, Formula,
    Literal, Signature, Valuation,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn signature(fluents: usize, agents: usize) -> Arc<Signature> {
    Arc::new(Signature::new(
        (0..fluents).map(|i| format!("p{i}")).collect(),
        (0..agents)
            .map(|i| ["a", "b", "c", "d"][i].to_string())
            .collect(),
    ))
}

/// Arbitrary pointed graph with up to `max_worlds` worlds. Edge density
/// varies per state so both sparse (vacuous beliefs) and dense graphs occur.
pub fn estate(rng: &mut impl Rng, sig: &Arc<Signature>, max_worlds: usize) -> EState {
    let n = rng.gen_range(1..=max_worlds);
    let density = rng.gen_range(0.15..0.7);
    let mut b = EStateBuilder::new(sig.clone());
    for _ in 0..n {
        b.add_world(valuation(rng, sig.fluent_count()));
    }
    for from in 0..n {
        for ag in sig.agent_ids() {
            for to in 0..n {
                if rng.gen_bool(density) {
                    b.add_edge(from, ag, to);
                }
            }
        }
    }
    b.build(rng.gen_range(0..n)).unwrap()
}

/// Like [`estate`] but every agent has at least one successor everywhere.
pub fn serial_estate(rng: &mut impl Rng, sig: &Arc<Signature>, max_worlds: usize) -> EState {
    let n = rng.gen_range(1..=max_worlds);
    let density = rng.gen_range(0.1..0.6);
    let mut b = EStateBuilder::new(sig.clone());
    for _ in 0..n {
        b.add_world(valuation(rng, sig.fluent_count()));
    }
    for from in 0..n {
        for ag in sig.agent_ids() {
            b.add_edge(from, ag, rng.gen_range(0..n));
            for to in 0..n {
                if rng.gen_bool(density) {
                    b.add_edge(from, ag, to);
                }
            }
        }
    }
    b.build(rng.gen_range(0..n)).unwrap()
}

pub fn valuation(rng: &mut impl Rng, fluents: usize) -> Valuation {
    let trues: Vec<FluentId> = (0..fluents as u32)
        .filter(|_| rng.gen_bool(0.5))
        .map(FluentId)
        .collect();
    Valuation::from_true(fluents, trues)
}

fn group(rng: &mut impl Rng, sig: &Signature) -> AgentSet {
    loop {
        let g: AgentSet = sig.agent_ids().filter(|_| rng.gen_bool(0.6)).collect();
        if !g.is_empty() {
            return g;
        }
    }
}

fn agent(rng: &mut impl Rng, sig: &Signature) -> AgentId {
    AgentId(rng.gen_range(0..sig.agent_count() as u32))
}

fn atom(rng: &mut impl Rng, sig: &Signature) -> Formula {
    Formula::Atom(FluentId(rng.gen_range(0..sig.fluent_count() as u32)))
}

/// Belief formula of modal and connective depth at most `depth`.
pub fn formula(rng: &mut impl Rng, sig: &Signature, depth: usize) -> Formula {
    if depth == 0 {
        return match rng.gen_range(0..12) {
            0 => Formula::True,
            1 => Formula::False,
            _ => atom(rng, sig),
        };
    }
    let d = depth - 1;
    match rng.gen_range(0..9) {
        0 => atom(rng, sig),
        1 => Formula::not(formula(rng, sig, d)),
        2 => Formula::and(formula(rng, sig, d), formula(rng, sig, d)),
        3 => Formula::or(formula(rng, sig, d), formula(rng, sig, d)),
        4 | 5 => Formula::believes(agent(rng, sig), formula(rng, sig, d)),
        6 => Formula::everyone(group(rng, sig), formula(rng, sig, d)),
        _ => Formula::common(group(rng, sig), formula(rng, sig, d)),
    }
}

pub fn fluent_formula(rng: &mut impl Rng, sig: &Signature, depth: usize) -> Formula {
    if depth == 0 {
        return atom(rng, sig);
    }
    let d = depth - 1;
    match rng.gen_range(0..4) {
        0 => atom(rng, sig),
        1 => Formula::not(fluent_formula(rng, sig, d)),
        2 => Formula::and(fluent_formula(rng, sig, d), fluent_formula(rng, sig, d)),
        _ => Formula::or(fluent_formula(rng, sig, d), fluent_formula(rng, sig, d)),
    }
}

/// A condition that is usually `true`, otherwise a small belief formula.
fn condition(rng: &mut impl Rng, sig: &Signature) -> Formula {
    if rng.gen_bool(0.5) {
        Formula::True
    } else {
        let depth = rng.gen_range(0..=2);
        formula(rng, sig, depth)
    }
}

/// Random action with at most one observability rule per agent, so
/// observability is never ambiguous. Ontic effects touch distinct fluents.
pub fn action(rng: &mut impl Rng, sig: &Signature) -> ActionInstance {
    let kind = *[
        ActionKind::Ontic,
        ActionKind::Sensing,
        ActionKind::Announcement,
    ]
    .choose(rng)
    .unwrap();
    let mut fluents: Vec<u32> = (0..sig.fluent_count() as u32).collect();
    fluents.shuffle(rng);
    let count = rng.gen_range(1..=fluents.len().min(2));
    let effects = fluents[..count]
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            // The first sensing effect is unconditional so something is sensed.
            let condition = if i == 0 && kind == ActionKind::Sensing {
                Formula::True
            } else {
                condition(rng, sig)
            };
            let effect = match kind {
                ActionKind::Ontic => Effect::Set(Literal {
                    fluent: FluentId(f),
                    positive: rng.gen_bool(0.5),
                }),
                ActionKind::Sensing => Effect::Sense(FluentId(f)),
                ActionKind::Announcement => Effect::Announce(fluent_formula(rng, sig, 2)),
            };
            ConditionalEffect { effect, condition }
        })
        .collect();
    let observability = sig
        .agent_ids()
        .filter_map(|ag| {
            let class = match rng.gen_range(0..3) {
                0 => return None,
                1 => Observability::Full,
                _ => Observability::Partial,
            };
            Some(ObservabilityRule {
                agent: ag,
                class,
                condition: condition(rng, sig),
            })
        })
        .collect();
    ActionInstance {
        name: "act".into(),
        kind,
        executability: if rng.gen_bool(0.8) {
            Formula::True
        } else {
            formula(rng, sig, 1)
        },
        effects,
        observability,
    }
}

/// A bisimilar copy of `s`: every world duplicated, each edge redirected to
/// a non-empty random subset of the target's copies, worlds shuffled.
pub fn bisimilar_variant(rng: &mut impl Rng, s: &EState) -> EState {
    let n = s.world_count();
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.shuffle(rng);
    let slot = |w: usize, copy: usize| order[2 * w + copy];
    let mut placed: Vec<Option<Valuation>> = vec![None; 2 * n];
    for w in s.worlds() {
        placed[slot(w, 0)] = Some(s.valuation(w).clone());
        placed[slot(w, 1)] = Some(s.valuation(w).clone());
    }
    let mut b = EStateBuilder::new(s.signature().clone());
    for v in placed {
        b.add_world(v.unwrap());
    }
    for (from, ag, to) in s.edges() {
        for copy in 0..2 {
            match rng.gen_range(0..3) {
                0 => b.add_edge(slot(from, copy), ag, slot(to, 0)),
                1 => b.add_edge(slot(from, copy), ag, slot(to, 1)),
                _ => {
                    b.add_edge(slot(from, copy), ag, slot(to, 0));
                    b.add_edge(slot(from, copy), ag, slot(to, 1));
                }
            }
        }
    }
    b.build(slot(s.pointed(), rng.gen_range(0..2))).unwrap()
}

/// Source text of a random consistent finitary S5 domain over `fluents`
/// fluents and `agents` agents, using all five kinds of initial statement.
///
/// A pointed valuation is fixed first and every statement is made true in
/// it. Fluents mentioned by a common-knowledge constraint never get
/// ignorance statements, so the constraint cannot contradict them.
pub fn theory(rng: &mut impl Rng, fluents: usize, agents: usize) -> String {
    let sig = signature(fluents, agents);
    let group = format!("[{}]", sig.agents.join(", "));
    let name = |f: usize| sig.fluents[f].clone();
    let actual: Vec<bool> = (0..fluents).map(|_| rng.gen_bool(0.5)).collect();
    let lit = |f: usize| {
        if actual[f] {
            name(f)
        } else {
            format!("not {}", name(f))
        }
    };

    let mut lines = vec![
        format!("fluent {};", sig.fluents.join(", ")),
        format!("agent {};", sig.agents.join(", ")),
    ];

    // Each fluent is commonly known, constrained, or open.
    let mut known = vec![false; fluents];
    let mut constrained = vec![false; fluents];
    for f in 0..fluents {
        match rng.gen_range(0..4) {
            0 => {
                known[f] = true;
                lines.push(format!("initially C({group}, {});", lit(f)));
            }
            1 => constrained[f] = true,
            _ => {}
        }
    }
    let pool: Vec<usize> = (0..fluents).filter(|&f| constrained[f]).collect();
    if !pool.is_empty() {
        // Constraints over the constrained fluents, true in the actual world.
        for _ in 0..rng.gen_range(1..=2) {
            let phi = clause(rng, &pool);
            let holds = phi.eval_propositional(&|f| actual[f.index()]);
            let phi = if holds { phi } else { Formula::not(phi) };
            lines.push(format!("initially C({group}, {});", phi.display(&sig)));
        }
        // Make sure every constrained fluent is mentioned by some constraint.
        for &f in &pool {
            lines.push(format!(
                "initially C({group}, {} or {});",
                lit(f),
                name(*pool.choose(rng).unwrap())
            ));
        }
    }

    for ag in &sig.agents {
        for f in (0..fluents).filter(|&f| !known[f]) {
            let knows_whether = format!("C({group}, B({ag}, {0}) or B({ag}, not {0}))", name(f));
            if constrained[f] {
                if rng.gen_bool(0.5) {
                    lines.push(format!("initially {knows_whether};"));
                }
            } else if rng.gen_bool(0.5) {
                lines.push(format!("initially {knows_whether};"));
            } else {
                lines.push(format!(
                    "initially C({group}, not B({ag}, {0}) and not B({ag}, not {0}));",
                    name(f)
                ));
            }
        }
        if pool.len() >= 2 && rng.gen_bool(0.3) {
            let phi = clause(rng, &pool);
            let s = phi.display(&sig).to_string();
            let form = if rng.gen_bool(0.5) {
                format!("B({ag}, {s}) or B({ag}, not {s})")
            } else {
                format!("B({ag}, not {s}) or B({ag}, {s})")
            };
            lines.push(format!("initially C({group}, {form});"));
        }
    }

    // Pin the actual world, sometimes as one conjunction.
    let open: Vec<String> = (0..fluents).filter(|&f| !known[f]).map(lit).collect();
    if !open.is_empty() {
        if rng.gen_bool(0.5) {
            lines.push(format!("initially {};", open.join(" and ")));
        } else {
            for l in open {
                lines.push(format!("initially {l};"));
            }
        }
    }
    lines.shuffle(rng);
    // Declarations may appear anywhere, but keep them first for readability.
    lines.sort_by_key(|l| !(l.starts_with("fluent") || l.starts_with("agent")));
    lines.join("\n") + "\n"
}

fn clause(rng: &mut impl Rng, pool: &[usize]) -> Formula {
    let mut pick = || {
        let f = Formula::Atom(FluentId(*pool.choose(rng).unwrap() as u32));
        if rng.gen_bool(0.5) {
            Formula::not(f)
        } else {
            f
        }
    };
    let (x, y) = (pick(), pick());
    if rng.gen_bool(0.5) {
        Formula::or(x, y)
    } else {
        Formula::and(x, y)
    }
}
