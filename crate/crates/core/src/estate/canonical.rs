//! Bisimulation quotients with a deterministic world numbering.
//!
//! Colours are assigned by iterated signature refinement, where a colour is
//! the rank of its signature among all signatures of the same round. Because
//! ranks depend only on graph content, the stable colouring of the reachable
//! part is the same for any two bisimilar states, and it numbers the blocks
//! of the quotient canonically.

use std::fmt;

use sha2::{Digest as _, Sha256};

use super::{EState, EStateError, Valuation};

/// 128-bit digest of a canonical serialization.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Digest(pub [u8; 16]);

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({self})")
    }
}

/// Minimal representative of a state's bisimulation class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalForm {
    /// The quotient, pointed at world 0, numbered breadth-first from it.
    pub state: EState,
    pub digest: Digest,
}

impl CanonicalForm {
    pub fn into_state(self) -> EState {
        self.state
    }
}

impl EState {
    /// Quotient by the coarsest bisimulation, canonically renumbered.
    pub fn canonicalize(&self) -> CanonicalForm {
        let colors = stable_colors(self);
        let block_count = colors.iter().max().map_or(0, |&c| c as usize + 1);
        let agents = self.signature.agent_count();

        let mut representative = vec![usize::MAX; block_count];
        for w in self.worlds() {
            let b = colors[w] as usize;
            if representative[b] == usize::MAX {
                representative[b] = w;
            }
        }
        let block_successors: Vec<Vec<Vec<u32>>> = representative
            .iter()
            .map(|&w| {
                (0..agents)
                    .map(|ag| {
                        let mut targets: Vec<u32> =
                            self.successors[w][ag].iter().map(|&v| colors[v]).collect();
                        targets.sort_unstable();
                        targets.dedup();
                        targets
                    })
                    .collect()
            })
            .collect();

        // Breadth-first numbering from the pointed block.
        let mut order = Vec::with_capacity(block_count);
        let mut new_id = vec![usize::MAX; block_count];
        let start = colors[self.pointed] as usize;
        new_id[start] = 0;
        order.push(start);
        let mut head = 0;
        while head < order.len() {
            let b = order[head];
            head += 1;
            for targets in &block_successors[b] {
                for &t in targets {
                    let t = t as usize;
                    if new_id[t] == usize::MAX {
                        new_id[t] = order.len();
                        order.push(t);
                    }
                }
            }
        }
        debug_assert_eq!(order.len(), block_count, "state has unreachable worlds");

        let valuations: Vec<Valuation> = order
            .iter()
            .map(|&b| self.valuations[representative[b]].clone())
            .collect();
        let successors: Vec<Vec<Vec<usize>>> = order
            .iter()
            .map(|&b| {
                block_successors[b]
                    .iter()
                    .map(|targets| {
                        let mut mapped: Vec<usize> =
                            targets.iter().map(|&t| new_id[t as usize]).collect();
                        mapped.sort_unstable();
                        mapped
                    })
                    .collect()
            })
            .collect();
        let state = EState {
            signature: self.signature.clone(),
            valuations,
            successors,
            pointed: 0,
        };
        let digest = digest_of(&state);
        CanonicalForm { state, digest }
    }

    /// Line-oriented text the digest is computed from: one `world <i>: <bits>`
    /// line per world, with bits in fluent-name order, and one
    /// `edge <i> <agent> <j>` line per edge, all lines sorted.
    pub fn serialization(&self) -> String {
        let sig = &*self.signature;
        let mut by_name: Vec<_> = sig.fluent_ids().collect();
        by_name.sort_by(|a, b| sig.fluent_name(*a).cmp(sig.fluent_name(*b)));

        let mut lines = Vec::with_capacity(self.world_count() + self.edge_count());
        for w in self.worlds() {
            let bits: String = by_name
                .iter()
                .map(|&f| if self.holds(w, f) { '1' } else { '0' })
                .collect();
            lines.push(format!("world {w}: {bits}"));
        }
        for (from, ag, to) in self.edges() {
            lines.push(format!("edge {from} {} {to}", sig.agent_name(ag)));
        }
        lines.sort();
        let mut out = lines.join("\n");
        out.push('\n');
        out
    }
}

fn digest_of(state: &EState) -> Digest {
    let hash = Sha256::digest(state.serialization().as_bytes());
    let mut bytes = [0u8; 16];
    bytes.copy_from_slice(&hash[..16]);
    Digest(bytes)
}

/// Rank of each item among the sorted distinct items.
fn ranks<T: Ord + Clone>(items: &[T]) -> (Vec<u32>, usize) {
    let mut distinct: Vec<T> = items.to_vec();
    distinct.sort();
    distinct.dedup();
    let ranked = items
        .iter()
        .map(|x| distinct.binary_search(x).expect("item is present") as u32)
        .collect();
    (ranked, distinct.len())
}

fn stable_colors(state: &EState) -> Vec<u32> {
    let (mut colors, mut count) = ranks(&state.valuations);
    loop {
        let signatures: Vec<(u32, Vec<Vec<u32>>)> = state
            .worlds()
            .map(|w| {
                let per_agent = state.successors[w]
                    .iter()
                    .map(|targets| {
                        let mut cs: Vec<u32> = targets.iter().map(|&v| colors[v]).collect();
                        cs.sort_unstable();
                        cs.dedup();
                        cs
                    })
                    .collect();
                (colors[w], per_agent)
            })
            .collect();
        let (next, next_count) = ranks(&signatures);
        // Each round refines the previous one, so an unchanged block count
        // means the partition is stable.
        if next_count == count {
            return next;
        }
        colors = next;
        count = next_count;
    }
}

/// Whether two states denote the same possibility.
pub fn bisimilar(a: &EState, b: &EState) -> Result<bool, EStateError> {
    if !std::sync::Arc::ptr_eq(&a.signature, &b.signature) && a.signature != b.signature {
        return Err(EStateError::SignatureMismatch);
    }
    let (ca, cb) = (a.canonicalize(), b.canonicalize());
    Ok(ca.digest == cb.digest && ca.state == cb.state)
}
