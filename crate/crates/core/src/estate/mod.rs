//! Epistemic states as finite pointed graphs of worlds.
//!
//! A state is the picture of a possibility: each world carries a fluent
//! valuation and, for every agent, the set of worlds the agent considers
//! possible from it. Two states denote the same possibility exactly when
//! their pointed graphs are bisimilar, see [`EState::canonicalize`].

mod canonical;
mod entail;
mod frame;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use canonical::{bisimilar, CanonicalForm, Digest};

use crate::formula::{AgentId, FluentId, Signature};

pub type WorldId = usize;

/// Truth values of every fluent in one world, packed as bits.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Valuation(Box<[u64]>);

impl Valuation {
    /// All fluents false.
    pub fn new(fluent_count: usize) -> Self {
        Valuation(vec![0u64; fluent_count.div_ceil(64).max(1)].into_boxed_slice())
    }

    pub fn from_true<I: IntoIterator<Item = FluentId>>(fluent_count: usize, fluents: I) -> Self {
        let mut v = Valuation::new(fluent_count);
        for f in fluents {
            v.set(f, true);
        }
        v
    }

    pub fn get(&self, f: FluentId) -> bool {
        let i = f.index();
        self.0[i / 64] & (1u64 << (i % 64)) != 0
    }

    pub fn set(&mut self, f: FluentId, value: bool) {
        let i = f.index();
        if value {
            self.0[i / 64] |= 1u64 << (i % 64);
        } else {
            self.0[i / 64] &= !(1u64 << (i % 64));
        }
    }

    pub fn true_fluents(&self, fluent_count: usize) -> impl Iterator<Item = FluentId> + '_ {
        (0..fluent_count as u32)
            .map(FluentId)
            .filter(|f| self.get(*f))
    }
}

impl fmt::Debug for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bits: Vec<usize> = (0..self.0.len() * 64)
            .filter(|i| self.get(FluentId(*i as u32)))
            .collect();
        write!(f, "Valuation{bits:?}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EStateError {
    #[error("world {0} does not exist")]
    NoSuchWorld(WorldId),
    #[error("agent {0} does not exist")]
    NoSuchAgent(u32),
    #[error("states are over different fluent/agent signatures")]
    SignatureMismatch,
}

/// A finite pointed graph of worlds. Every world is reachable from the
/// pointed world; successor lists are sorted and free of duplicates.
#[derive(Clone)]
pub struct EState {
    signature: Arc<Signature>,
    valuations: Vec<Valuation>,
    /// `successors[w][ag]`
    successors: Vec<Vec<Vec<WorldId>>>,
    pointed: WorldId,
}

impl PartialEq for EState {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.signature, &other.signature) || self.signature == other.signature)
            && self.pointed == other.pointed
            && self.valuations == other.valuations
            && self.successors == other.successors
    }
}

impl Eq for EState {}

impl fmt::Debug for EState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sig = &*self.signature;
        writeln!(f, "EState(pointed = {}) {{", self.pointed)?;
        for w in self.worlds() {
            let fluents: Vec<&str> = self.valuations[w]
                .true_fluents(sig.fluent_count())
                .map(|fl| sig.fluent_name(fl))
                .collect();
            write!(f, "  w{w} {fluents:?}")?;
            for ag in sig.agent_ids() {
                write!(f, " {}->{:?}", sig.agent_name(ag), self.successors(w, ag))?;
            }
            writeln!(f)?;
        }
        write!(f, "}}")
    }
}

impl EState {
    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn pointed(&self) -> WorldId {
        self.pointed
    }

    pub fn world_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn worlds(&self) -> std::ops::Range<WorldId> {
        0..self.valuations.len()
    }

    pub fn valuation(&self, w: WorldId) -> &Valuation {
        &self.valuations[w]
    }

    pub fn holds(&self, w: WorldId, f: FluentId) -> bool {
        self.valuations[w].get(f)
    }

    /// Worlds `agent` considers possible at `w`, sorted.
    pub fn successors(&self, w: WorldId, agent: AgentId) -> &[WorldId] {
        &self.successors[w][agent.index()]
    }

    pub fn has_edge(&self, from: WorldId, agent: AgentId, to: WorldId) -> bool {
        self.successors(from, agent).binary_search(&to).is_ok()
    }

    /// All `(from, agent, to)` edges in world/agent/target order.
    pub fn edges(&self) -> impl Iterator<Item = (WorldId, AgentId, WorldId)> + '_ {
        self.successors
            .iter()
            .enumerate()
            .flat_map(|(w, per_agent)| {
                per_agent.iter().enumerate().flat_map(move |(ag, targets)| {
                    targets.iter().map(move |&v| (w, AgentId(ag as u32), v))
                })
            })
    }

    pub fn edge_count(&self) -> usize {
        self.successors.iter().flatten().map(Vec::len).sum()
    }

    /// The same graph pointed at `w`, with worlds unreachable from `w` dropped.
    pub fn repointed(&self, w: WorldId) -> Result<EState, EStateError> {
        if w >= self.world_count() {
            return Err(EStateError::NoSuchWorld(w));
        }
        Ok(EState {
            signature: self.signature.clone(),
            valuations: self.valuations.clone(),
            successors: self.successors.clone(),
            pointed: w,
        }
        .pruned())
    }

    /// Drops worlds unreachable from the pointed world, keeping the relative
    /// order of the survivors.
    fn pruned(self) -> EState {
        let n = self.world_count();
        let mut reached = vec![false; n];
        let mut stack = vec![self.pointed];
        reached[self.pointed] = true;
        while let Some(w) = stack.pop() {
            for targets in &self.successors[w] {
                for &v in targets {
                    if !reached[v] {
                        reached[v] = true;
                        stack.push(v);
                    }
                }
            }
        }
        if reached.iter().all(|r| *r) {
            return self;
        }
        let mut remap = vec![usize::MAX; n];
        let mut next = 0;
        for w in 0..n {
            if reached[w] {
                remap[w] = next;
                next += 1;
            }
        }
        let EState {
            signature,
            valuations,
            successors,
            pointed,
        } = self;
        let mut new_vals = Vec::with_capacity(next);
        let mut new_succ = Vec::with_capacity(next);
        for (w, (val, per_agent)) in valuations.into_iter().zip(successors).enumerate() {
            if !reached[w] {
                continue;
            }
            new_vals.push(val);
            new_succ.push(
                per_agent
                    .into_iter()
                    .map(|targets| targets.into_iter().map(|v| remap[v]).collect())
                    .collect(),
            );
        }
        EState {
            signature,
            valuations: new_vals,
            successors: new_succ,
            pointed: remap[pointed],
        }
    }
}

/// Incremental construction of an [`EState`].
#[derive(Debug, Clone)]
pub struct EStateBuilder {
    signature: Arc<Signature>,
    valuations: Vec<Valuation>,
    successors: Vec<Vec<Vec<WorldId>>>,
}

impl EStateBuilder {
    pub fn new(signature: Arc<Signature>) -> Self {
        EStateBuilder {
            signature,
            valuations: Vec::new(),
            successors: Vec::new(),
        }
    }

    pub fn signature(&self) -> &Arc<Signature> {
        &self.signature
    }

    pub fn world_count(&self) -> usize {
        self.valuations.len()
    }

    pub fn add_world(&mut self, valuation: Valuation) -> WorldId {
        self.valuations.push(valuation);
        self.successors
            .push(vec![Vec::new(); self.signature.agent_count()]);
        self.valuations.len() - 1
    }

    /// Adds a world whose true fluents are given by name. Panics on an
    /// unknown name; intended for hand-built states.
    pub fn add_named_world(&mut self, true_fluents: &[&str]) -> WorldId {
        let n = self.signature.fluent_count();
        let ids: Vec<FluentId> = true_fluents
            .iter()
            .map(|name| {
                self.signature
                    .fluent(name)
                    .unwrap_or_else(|| panic!("unknown fluent {name}"))
            })
            .collect();
        self.add_world(Valuation::from_true(n, ids))
    }

    pub fn add_edge(&mut self, from: WorldId, agent: AgentId, to: WorldId) {
        self.successors[from][agent.index()].push(to);
    }

    /// Finishes the state pointed at `pointed`; unreachable worlds are dropped.
    pub fn build(mut self, pointed: WorldId) -> Result<EState, EStateError> {
        let n = self.valuations.len();
        if pointed >= n {
            return Err(EStateError::NoSuchWorld(pointed));
        }
        for per_agent in &mut self.successors {
            for targets in per_agent.iter_mut() {
                if let Some(&bad) = targets.iter().find(|&&v| v >= n) {
                    return Err(EStateError::NoSuchWorld(bad));
                }
                targets.sort_unstable();
                targets.dedup();
            }
        }
        Ok(EState {
            signature: self.signature,
            valuations: self.valuations,
            successors: self.successors,
            pointed,
        }
        .pruned())
    }
}
