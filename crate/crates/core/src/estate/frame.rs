//! Frame conditions on a single agent's accessibility relation.

use super::EState;
use crate::formula::AgentId;

impl EState {
    pub fn is_serial(&self, ag: AgentId) -> bool {
        self.worlds().all(|w| !self.successors(w, ag).is_empty())
    }

    pub fn is_reflexive(&self, ag: AgentId) -> bool {
        self.worlds().all(|w| self.has_edge(w, ag, w))
    }

    pub fn is_symmetric(&self, ag: AgentId) -> bool {
        self.worlds().all(|w| {
            self.successors(w, ag)
                .iter()
                .all(|&v| self.has_edge(v, ag, w))
        })
    }

    pub fn is_transitive(&self, ag: AgentId) -> bool {
        self.worlds().all(|w| {
            self.successors(w, ag).iter().all(|&v| {
                self.successors(v, ag)
                    .iter()
                    .all(|&x| self.has_edge(w, ag, x))
            })
        })
    }

    pub fn is_euclidean(&self, ag: AgentId) -> bool {
        self.worlds().all(|w| {
            let succ = self.successors(w, ag);
            succ.iter()
                .all(|&v| succ.iter().all(|&x| self.has_edge(v, ag, x)))
        })
    }

    /// Serial, transitive and euclidean for every agent.
    pub fn is_kd45(&self) -> bool {
        self.signature
            .agent_ids()
            .all(|ag| self.is_serial(ag) && self.is_transitive(ag) && self.is_euclidean(ag))
    }

    /// Every relation is an equivalence relation.
    pub fn is_s5(&self) -> bool {
        self.signature
            .agent_ids()
            .all(|ag| self.is_reflexive(ag) && self.is_symmetric(ag) && self.is_transitive(ag))
    }
}
