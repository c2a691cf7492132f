//! Plain Kripke models: a brute-force evaluator and a straight-line action
//! update without quotienting or pruning.

use eplan_core::transition::{Effect, Observability};
use eplan_core::{ActionInstance, ActionKind, AgentSet, EState, EStateBuilder, Formula, Valuation};

#[derive(Debug, Clone)]
pub struct Kripke {
    pub fluents: usize,
    pub agents: usize,
    /// `val[w][f]`
    pub val: Vec<Vec<bool>>,
    /// `rel[ag][from][to]`
    pub rel: Vec<Vec<Vec<bool>>>,
    pub pointed: usize,
}

impl Kripke {
    pub fn from_estate(s: &EState) -> Self {
        let sig = s.signature();
        let n = s.world_count();
        let mut rel = vec![vec![vec![false; n]; n]; sig.agent_count()];
        for (from, ag, to) in s.edges() {
            rel[ag.index()][from][to] = true;
        }
        Kripke {
            fluents: sig.fluent_count(),
            agents: sig.agent_count(),
            val: s
                .worlds()
                .map(|w| sig.fluent_ids().map(|f| s.holds(w, f)).collect())
                .collect(),
            rel,
            pointed: s.pointed(),
        }
    }

    pub fn to_estate(&self, like: &EState) -> EState {
        let mut b = EStateBuilder::new(like.signature().clone());
        for v in &self.val {
            let trues = (0..self.fluents)
                .filter(|&f| v[f])
                .map(|f| eplan_core::FluentId(f as u32));
            b.add_world(Valuation::from_true(self.fluents, trues));
        }
        for ag in 0..self.agents {
            for from in 0..self.size() {
                for to in 0..self.size() {
                    if self.rel[ag][from][to] {
                        b.add_edge(from, eplan_core::AgentId(ag as u32), to);
                    }
                }
            }
        }
        b.build(self.pointed).unwrap()
    }

    pub fn size(&self) -> usize {
        self.val.len()
    }

    pub fn holds_pointed(&self, phi: &Formula) -> bool {
        self.holds(self.pointed, phi)
    }

    pub fn holds(&self, w: usize, phi: &Formula) -> bool {
        match phi {
            Formula::True => true,
            Formula::False => false,
            Formula::Atom(f) => self.val[w][f.index()],
            Formula::Not(p) => !self.holds(w, p),
            Formula::And(a, b) => self.holds(w, a) && self.holds(w, b),
            Formula::Or(a, b) => self.holds(w, a) || self.holds(w, b),
            Formula::Believes(ag, p) => {
                (0..self.size()).all(|v| !self.rel[ag.index()][w][v] || self.holds(v, p))
            }
            Formula::Everyone(group, p) => self.everyone(&self.truth(p), *group)[w],
            Formula::Common(group, p) => {
                // C φ = E φ ∧ E E φ ∧ ... ∧ E^n φ; longer chains repeat worlds.
                let mut level = self.truth(p);
                for _ in 0..self.size() {
                    level = self.everyone(&level, *group);
                    if !level[w] {
                        return false;
                    }
                }
                true
            }
        }
    }

    fn truth(&self, phi: &Formula) -> Vec<bool> {
        (0..self.size()).map(|w| self.holds(w, phi)).collect()
    }

    fn everyone(&self, truth: &[bool], group: AgentSet) -> Vec<bool> {
        (0..self.size())
            .map(|u| {
                group
                    .iter()
                    .all(|ag| (0..self.size()).all(|v| !self.rel[ag.index()][u][v] || truth[v]))
            })
            .collect()
    }

    /// Worlds reached from `seeds` in zero or more `group` steps.
    fn closure(&self, seeds: &[usize], group: AgentSet) -> Vec<bool> {
        let mut reached = vec![false; self.size()];
        for &s in seeds {
            reached[s] = true;
        }
        loop {
            let mut changed = false;
            for u in 0..self.size() {
                if !reached[u] {
                    continue;
                }
                for ag in group.iter() {
                    for (v, seen) in reached.iter_mut().enumerate() {
                        if self.rel[ag.index()][u][v] && !*seen {
                            *seen = true;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                return reached;
            }
        }
    }

    fn successors_in(&self, u: usize, group: AgentSet) -> Vec<usize> {
        (0..self.size())
            .filter(|&v| group.iter().any(|ag| self.rel[ag.index()][u][v]))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleError {
    Ambiguous,
    Conflict,
    NothingSensed,
}

/// Classes as sets: (fully, partial, oblivious).
pub fn classes(
    m: &Kripke,
    a: &ActionInstance,
) -> Result<(AgentSet, AgentSet, AgentSet), OracleError> {
    let (mut full, mut partial, mut obliv) =
        (AgentSet::empty(), AgentSet::empty(), AgentSet::empty());
    for ag in 0..m.agents {
        let id = eplan_core::AgentId(ag as u32);
        let fires = |class| {
            a.observability
                .iter()
                .any(|r| r.agent == id && r.class == class && m.holds_pointed(&r.condition))
        };
        match (fires(Observability::Full), fires(Observability::Partial)) {
            (true, true) => return Err(OracleError::Ambiguous),
            (true, false) => full.insert(id),
            (false, true) => partial.insert(id),
            (false, false) => obliv.insert(id),
        }
    }
    Ok((full, partial, obliv))
}

/// One action applied literally: old worlds kept at their indices, copies
/// appended after them in index order.
pub fn oracle_apply(m: &Kripke, a: &ActionInstance) -> Result<Option<Kripke>, OracleError> {
    if !m.holds_pointed(&a.executability) {
        return Ok(None);
    }
    let (full, partial, _) = classes(m, a)?;
    let n = m.size();
    let p = m.pointed;

    let (copied, consistent, new_val): (Vec<bool>, Vec<bool>, Vec<Vec<bool>>) = match a.kind {
        ActionKind::Ontic => {
            // Partially observant agents see nothing of a world change.
            let copied = m.closure(&[p], full);
            let mut vals = m.val.clone();
            for w in 0..n {
                let mut set: Vec<Option<bool>> = vec![None; m.fluents];
                for e in &a.effects {
                    let Effect::Set(lit) = e.effect else { continue };
                    if m.holds(w, &e.condition) {
                        let slot = &mut set[lit.fluent.index()];
                        if slot.is_some_and(|v| v != lit.positive) {
                            return Err(OracleError::Conflict);
                        }
                        *slot = Some(lit.positive);
                    }
                }
                if copied[w] {
                    for (f, v) in set.into_iter().enumerate() {
                        if let Some(v) = v {
                            vals[w][f] = v;
                        }
                    }
                }
            }
            (copied, vec![true; n], vals)
        }
        ActionKind::Sensing | ActionKind::Announcement => {
            let active: Vec<&Effect> = a
                .effects
                .iter()
                .filter(|e| m.holds_pointed(&e.condition))
                .map(|e| &e.effect)
                .collect();
            if a.kind == ActionKind::Sensing && active.is_empty() {
                return Err(OracleError::NothingSensed);
            }
            let consistent: Vec<bool> = (0..n)
                .map(|w| {
                    active.iter().all(|e| match e {
                        Effect::Sense(f) => m.val[w][f.index()] == m.val[p][f.index()],
                        Effect::Announce(phi) => m.holds(w, phi),
                        Effect::Set(_) => true,
                    })
                })
                .collect();
            let by_full = m.closure(&m.successors_in(p, full), full);
            let by_partial = m.closure(&m.successors_in(p, partial), full.union(partial));
            let copied = (0..n)
                .map(|w| w == p || (by_full[w] && consistent[w]) || by_partial[w])
                .collect();
            (copied, consistent, m.val.clone())
        }
    };

    let index_of: Vec<Option<usize>> = {
        let mut next = n;
        copied
            .iter()
            .map(|&c| {
                c.then(|| {
                    next += 1;
                    next - 1
                })
            })
            .collect()
    };
    let total = n + copied.iter().filter(|&&c| c).count();
    let mut out = Kripke {
        fluents: m.fluents,
        agents: m.agents,
        val: m.val.clone(),
        rel: vec![vec![vec![false; total]; total]; m.agents],
        pointed: index_of[p].unwrap(),
    };
    for w in 0..n {
        if index_of[w].is_some() {
            out.val.push(new_val[w].clone());
        }
    }
    for ag in 0..m.agents {
        let id = eplan_core::AgentId(ag as u32);
        for u in 0..n {
            for v in 0..n {
                if !m.rel[ag][u][v] {
                    continue;
                }
                out.rel[ag][u][v] = true;
                let Some(cu) = index_of[u] else { continue };
                if full.contains(id) {
                    if let Some(cv) = index_of[v] {
                        if a.kind == ActionKind::Ontic || consistent[u] == consistent[v] {
                            out.rel[ag][cu][cv] = true;
                        }
                    }
                } else if partial.contains(id) && a.kind != ActionKind::Ontic {
                    if let Some(cv) = index_of[v] {
                        out.rel[ag][cu][cv] = true;
                    }
                } else {
                    out.rel[ag][cu][v] = true;
                }
            }
        }
    }
    Ok(Some(out))
}

/// Pointed bisimilarity by greatest fixpoint over all world pairs.
pub fn bisimilar(x: &Kripke, y: &Kripke) -> bool {
    let (n, m) = (x.size(), y.size());
    let mut rel: Vec<Vec<bool>> = (0..n)
        .map(|u| (0..m).map(|v| x.val[u] == y.val[v]).collect())
        .collect();
    loop {
        let mut changed = false;
        for u in 0..n {
            for v in 0..m {
                if !rel[u][v] {
                    continue;
                }
                let ok = (0..x.agents).all(|ag| {
                    let forth = (0..n)
                        .filter(|&u2| x.rel[ag][u][u2])
                        .all(|u2| (0..m).any(|v2| y.rel[ag][v][v2] && rel[u2][v2]));
                    let back = (0..m)
                        .filter(|&v2| y.rel[ag][v][v2])
                        .all(|v2| (0..n).any(|u2| x.rel[ag][u][u2] && rel[u2][v2]));
                    forth && back
                });
                if !ok {
                    rel[u][v] = false;
                    changed = true;
                }
            }
        }
        if !changed {
            return rel[x.pointed][y.pointed];
        }
    }
}
