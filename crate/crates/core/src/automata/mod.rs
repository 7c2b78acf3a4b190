// SPDX-License-Identifier: Apache-2.0
//! Homogeneous NFA model, regex front-end, graph analyses and the reference
//! interpreter.
//!
//! Matching lives on states: every state carries one [`SymbolClass`] and every
//! incoming edge implicitly requires it. There are no edge labels.

mod glushkov;
mod graph;
mod interp;
pub mod regex;

pub use glushkov::{glushkov_construct, GlushkovError};
pub use graph::{bfs_order, connected_components, Component};
pub use interp::{interpret, InterpretError};
pub use regex::{parse as parse_regex, ParseError, Regex};

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use crate::bits::Bits256;

/// Dense state index within one NFA.
pub type StateId = usize;

/// Largest supported alphabet (8-bit symbols).
pub const MAX_ALPHABET: usize = 256;

/// A set of accepted symbols, possibly given as the complement of `members`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymbolClass {
    pub members: Bits256,
    pub negated: bool,
}

impl SymbolClass {
    pub fn single(symbol: u8) -> Self {
        let mut members = Bits256::EMPTY;
        members.insert(symbol as usize);
        SymbolClass {
            members,
            negated: false,
        }
    }

    pub fn of(members: Bits256) -> Self {
        SymbolClass {
            members,
            negated: false,
        }
    }

    pub fn negated(members: Bits256) -> Self {
        SymbolClass {
            members,
            negated: true,
        }
    }

    /// Every symbol of the alphabet.
    pub fn any() -> Self {
        SymbolClass::negated(Bits256::EMPTY)
    }

    /// The accepted symbols over an alphabet of `alphabet_size` symbols.
    pub fn effective(&self, alphabet_size: usize) -> Bits256 {
        if self.negated {
            self.members.complement_within(alphabet_size)
        } else {
            self.members.intersection(&Bits256::prefix(alphabet_size))
        }
    }

    pub fn accepts(&self, symbol: u8, alphabet_size: usize) -> bool {
        (symbol as usize) < alphabet_size
            && (self.members.contains(symbol as usize) != self.negated)
    }

    /// Union of two classes without reference to an alphabet.
    pub fn union(&self, other: &SymbolClass) -> SymbolClass {
        match (self.negated, other.negated) {
            (false, false) => SymbolClass::of(self.members.union(&other.members)),
            (true, false) => SymbolClass::negated(self.members.difference(&other.members)),
            (false, true) => SymbolClass::negated(other.members.difference(&self.members)),
            (true, true) => SymbolClass::negated(self.members.intersection(&other.members)),
        }
    }
}

/// How a state becomes enabled without an incoming transition.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum StartKind {
    #[default]
    None,
    /// Enabled for the first symbol only.
    StartOfData,
    /// Enabled for every symbol.
    AllInput,
}

/// State transition element.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ste {
    pub id: StateId,
    pub class: SymbolClass,
    pub start: StartKind,
    pub reporting: bool,
}

/// One report: a reporting state was active when `symbol` was consumed at
/// input index `cycle`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReportRecord {
    pub cycle: u64,
    pub state: StateId,
    pub partition: u32,
    pub symbol: u8,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum NfaError {
    #[error("alphabet size {0} outside 1..=256")]
    AlphabetOverflow(usize),
    #[error("state {state} uses symbol {symbol} outside the alphabet of {alphabet}")]
    SymbolOutOfAlphabet {
        state: StateId,
        symbol: usize,
        alphabet: usize,
    },
    #[error("state at position {position} has id {id}; ids must be dense and ordered")]
    NonDenseId { position: usize, id: StateId },
    #[error("edge {src} -> {dst} references an unknown state")]
    DanglingEdge { src: StateId, dst: StateId },
}

/// A homogeneous NFA over `alphabet_size` symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousNfa {
    alphabet_size: usize,
    states: Vec<Ste>,
    edges: Vec<BTreeSet<StateId>>,
}

impl HomogeneousNfa {
    /// Validates and builds an NFA. State `i` must carry id `i`.
    pub fn new(
        alphabet_size: usize,
        states: Vec<Ste>,
        edges: impl IntoIterator<Item = (StateId, StateId)>,
    ) -> Result<Self, NfaError> {
        if alphabet_size == 0 || alphabet_size > MAX_ALPHABET {
            return Err(NfaError::AlphabetOverflow(alphabet_size));
        }
        for (position, ste) in states.iter().enumerate() {
            if ste.id != position {
                return Err(NfaError::NonDenseId {
                    position,
                    id: ste.id,
                });
            }
            let bound = ste.class.members.bound();
            if bound > alphabet_size {
                return Err(NfaError::SymbolOutOfAlphabet {
                    state: ste.id,
                    symbol: bound - 1,
                    alphabet: alphabet_size,
                });
            }
        }
        let mut adj = alloc::vec![BTreeSet::new(); states.len()];
        for (src, dst) in edges {
            if src >= states.len() || dst >= states.len() {
                return Err(NfaError::DanglingEdge { src, dst });
            }
            adj[src].insert(dst);
        }
        Ok(HomogeneousNfa {
            alphabet_size,
            states,
            edges: adj,
        })
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet_size
    }

    pub fn states(&self) -> &[Ste] {
        &self.states
    }

    pub fn state(&self, id: StateId) -> &Ste {
        &self.states[id]
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn successors(&self, id: StateId) -> &BTreeSet<StateId> {
        &self.edges[id]
    }

    /// All edges in ascending `(src, dst)` order.
    pub fn edges(&self) -> impl Iterator<Item = (StateId, StateId)> + '_ {
        self.edges
            .iter()
            .enumerate()
            .flat_map(|(s, dsts)| dsts.iter().map(move |&d| (s, d)))
    }

    pub fn edge_count(&self) -> usize {
        self.edges.iter().map(BTreeSet::len).sum()
    }

    /// True if some state can start a run.
    pub fn is_runnable(&self) -> bool {
        self.states.iter().any(|s| s.start != StartKind::None)
    }

    /// Disjoint union: `other`'s ids are shifted past this NFA's states.
    pub fn concat(&self, other: &HomogeneousNfa) -> Result<HomogeneousNfa, NfaError> {
        let alphabet = self.alphabet_size.max(other.alphabet_size);
        let shift = self.states.len();
        let mut states = self.states.clone();
        states.extend(other.states.iter().map(|s| Ste {
            id: s.id + shift,
            ..s.clone()
        }));
        let edges = self
            .edges()
            .chain(other.edges().map(|(a, b)| (a + shift, b + shift)))
            .collect::<Vec<_>>();
        HomogeneousNfa::new(alphabet, states, edges)
    }

    /// The sub-NFA induced by `ids` (ascending), renumbered densely.
    pub fn induced(&self, ids: &[StateId]) -> HomogeneousNfa {
        let mut index = alloc::vec![usize::MAX; self.states.len()];
        for (new, &old) in ids.iter().enumerate() {
            index[old] = new;
        }
        let states = ids
            .iter()
            .enumerate()
            .map(|(new, &old)| Ste {
                id: new,
                ..self.states[old].clone()
            })
            .collect();
        let mut edges = alloc::vec![BTreeSet::new(); ids.len()];
        for (new, &old) in ids.iter().enumerate() {
            for &d in &self.edges[old] {
                if index[d] != usize::MAX {
                    edges[new].insert(index[d]);
                }
            }
        }
        HomogeneousNfa {
            alphabet_size: self.alphabet_size,
            states,
            edges,
        }
    }
}
