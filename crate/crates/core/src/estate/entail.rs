use std::collections::BTreeSet;

use super::{EState, WorldId};
use crate::formula::{AgentSet, Formula};

impl EState {
    /// Whether world `w` satisfies `formula`.
    pub fn entails(&self, w: WorldId, formula: &Formula) -> bool {
        if formula.is_fluent_formula() {
            let val = &self.valuations[w];
            return formula.eval_propositional(&|f| val.get(f));
        }
        self.truth_set(formula)[w]
    }

    pub fn entails_pointed(&self, formula: &Formula) -> bool {
        self.entails(self.pointed, formula)
    }

    /// Truth value of `formula` at every world, computed bottom-up.
    ///
    /// `C_α φ` holds at `u` when every world reachable from `u` by a
    /// non-empty path of `α` edges satisfies `φ`; with no such world it
    /// holds vacuously.
    pub fn truth_set(&self, formula: &Formula) -> Vec<bool> {
        let n = self.world_count();
        match formula {
            Formula::True => vec![true; n],
            Formula::False => vec![false; n],
            Formula::Atom(f) => self.valuations.iter().map(|v| v.get(*f)).collect(),
            Formula::Not(inner) => self.truth_set(inner).into_iter().map(|b| !b).collect(),
            Formula::And(a, b) => {
                let (ta, tb) = (self.truth_set(a), self.truth_set(b));
                ta.into_iter().zip(tb).map(|(x, y)| x && y).collect()
            }
            Formula::Or(a, b) => {
                let (ta, tb) = (self.truth_set(a), self.truth_set(b));
                ta.into_iter().zip(tb).map(|(x, y)| x || y).collect()
            }
            Formula::Believes(ag, inner) => {
                let t = self.truth_set(inner);
                self.worlds()
                    .map(|w| self.successors(w, *ag).iter().all(|&v| t[v]))
                    .collect()
            }
            Formula::Everyone(group, inner) => {
                let t = self.truth_set(inner);
                self.worlds()
                    .map(|w| {
                        group
                            .iter()
                            .all(|ag| self.successors(w, ag).iter().all(|&v| t[v]))
                    })
                    .collect()
            }
            Formula::Common(group, inner) => {
                let t = self.truth_set(inner);
                self.worlds()
                    .map(|w| {
                        self.reach_mask(w, *group)
                            .iter()
                            .zip(&t)
                            .all(|(&reached, &holds)| !reached || holds)
                    })
                    .collect()
            }
        }
    }

    /// Worlds reachable from `w` by a non-empty path whose edges are all
    /// labelled with agents of `group`.
    pub fn reaches(&self, w: WorldId, group: AgentSet) -> BTreeSet<WorldId> {
        self.reach_mask(w, group)
            .into_iter()
            .enumerate()
            .filter_map(|(v, r)| r.then_some(v))
            .collect()
    }

    pub(crate) fn reach_mask(&self, w: WorldId, group: AgentSet) -> Vec<bool> {
        let mut reached = vec![false; self.world_count()];
        let mut stack = vec![w];
        while let Some(x) = stack.pop() {
            for ag in group.iter() {
                for &v in self.successors(x, ag) {
                    if !reached[v] {
                        reached[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        reached
    }
}
