// SPDX-License-Identifier: Apache-2.0
//! Position (Glushkov) automaton construction.
//!
//! Each leaf of the tree becomes one state carrying the leaf's class. An edge
//! `p -> q` exists iff `q` can follow `p`, so every in-edge of `q` consumes
//! `q`'s class and the result is homogeneous by construction.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::regex::Regex;
use super::{HomogeneousNfa, NfaError, StartKind, StateId, Ste, SymbolClass};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GlushkovError {
    #[error("pattern matches only the empty string")]
    EmptyLanguage,
    #[error(transparent)]
    Nfa(#[from] NfaError),
}

struct Info {
    nullable: bool,
    first: BTreeSet<StateId>,
    last: BTreeSet<StateId>,
}

struct Builder {
    classes: Vec<SymbolClass>,
    follow: Vec<BTreeSet<StateId>>,
}

impl Builder {
    fn visit(&mut self, r: &Regex) -> Info {
        match r {
            Regex::Class(c) => {
                let id = self.classes.len();
                self.classes.push(*c);
                self.follow.push(BTreeSet::new());
                Info {
                    nullable: false,
                    first: [id].into(),
                    last: [id].into(),
                }
            }
            Regex::Concat(items) => {
                let mut acc = Info {
                    nullable: true,
                    first: BTreeSet::new(),
                    last: BTreeSet::new(),
                };
                for item in items {
                    let next = self.visit(item);
                    for &p in &acc.last {
                        self.follow[p].extend(next.first.iter().copied());
                    }
                    if acc.nullable {
                        acc.first.extend(next.first.iter().copied());
                    }
                    if next.nullable {
                        acc.last.extend(next.last);
                    } else {
                        acc.last = next.last;
                    }
                    acc.nullable &= next.nullable;
                }
                acc
            }
            Regex::Alt(branches) => {
                let mut acc = Info {
                    nullable: false,
                    first: BTreeSet::new(),
                    last: BTreeSet::new(),
                };
                for b in branches {
                    let i = self.visit(b);
                    acc.nullable |= i.nullable;
                    acc.first.extend(i.first);
                    acc.last.extend(i.last);
                }
                acc
            }
            Regex::Star(inner) | Regex::Plus(inner) => {
                let i = self.visit(inner);
                for &p in &i.last {
                    self.follow[p].extend(i.first.iter().copied());
                }
                Info {
                    nullable: matches!(r, Regex::Star(_)) || i.nullable,
                    ..i
                }
            }
            Regex::Optional(inner) => {
                let i = self.visit(inner);
                Info {
                    nullable: true,
                    ..i
                }
            }
        }
    }
}

/// Builds the homogeneous NFA of `tree`. First positions get `start`, last
/// positions report. Empty matches are not reportable and are dropped.
pub fn glushkov_construct(
    tree: &Regex,
    alphabet_size: usize,
    start: StartKind,
) -> Result<HomogeneousNfa, GlushkovError> {
    let mut b = Builder {
        classes: Vec::new(),
        follow: Vec::new(),
    };
    let info = b.visit(tree);
    if b.classes.is_empty() || info.last.is_empty() {
        return Err(GlushkovError::EmptyLanguage);
    }
    let states = b
        .classes
        .iter()
        .enumerate()
        .map(|(id, &class)| Ste {
            id,
            class,
            start: if info.first.contains(&id) {
                start
            } else {
                StartKind::None
            },
            reporting: info.last.contains(&id),
        })
        .collect();
    let edges = b
        .follow
        .iter()
        .enumerate()
        .flat_map(|(p, f)| f.iter().map(move |&q| (p, q)))
        .collect::<Vec<_>>();
    Ok(HomogeneousNfa::new(alphabet_size, states, edges)?)
}

#[cfg(test)]
mod tests {
    use super::super::regex::parse;
    use super::*;

    fn build(p: &str) -> HomogeneousNfa {
        glushkov_construct(&parse(p).unwrap(), 256, StartKind::StartOfData).unwrap()
    }

    #[test]
    fn sample_machine() {
        let nfa = build("(a|b)e*cd+");
        assert_eq!(nfa.len(), 4);
        let edges: Vec<_> = nfa.edges().collect();
        assert_eq!(edges, [(0, 1), (0, 2), (1, 1), (1, 2), (2, 3), (3, 3)]);
        assert_eq!(nfa.state(0).start, StartKind::StartOfData);
        assert!((1..4).all(|i| nfa.state(i).start == StartKind::None));
        assert!(nfa.state(3).reporting);
        assert!((0..3).all(|i| !nfa.state(i).reporting));
        let ab = nfa.state(0).class.effective(256);
        assert_eq!(
            ab.iter().collect::<Vec<_>>(),
            [b'a' as usize, b'b' as usize]
        );
        assert_eq!(nfa.state(1).class, SymbolClass::single(b'e'));
    }

    #[test]
    fn single_literal() {
        let nfa = build("a");
        assert_eq!(nfa.len(), 1);
        assert_eq!(nfa.edge_count(), 0);
        assert_eq!(nfa.state(0).start, StartKind::StartOfData);
        assert!(nfa.state(0).reporting);
    }

    #[test]
    fn shared_prefix_alternation() {
        // positions: a0 b1 a2 c3
        let nfa = build("ab|ac");
        assert_eq!(nfa.len(), 4);
        assert_eq!(nfa.edges().collect::<Vec<_>>(), [(0, 1), (2, 3)]);
        let reporting: Vec<_> = (0..4).filter(|&i| nfa.state(i).reporting).collect();
        assert_eq!(reporting, [1, 3]);
        let starts: Vec<_> = (0..4)
            .filter(|&i| nfa.state(i).start != StartKind::None)
            .collect();
        assert_eq!(starts, [0, 2]);
    }

    #[test]
    fn classes_are_copied_from_leaves() {
        let tree = parse("x[^yz]+.").unwrap();
        let nfa = glushkov_construct(&tree, 256, StartKind::AllInput).unwrap();
        assert_eq!(nfa.state(0).class, SymbolClass::single(b'x'));
        assert!(nfa.state(1).class.negated);
        assert_eq!(nfa.state(2).class, SymbolClass::any());
    }

    #[test]
    fn small_alphabet_rejects_large_symbols() {
        let err = glushkov_construct(&parse("a").unwrap(), 2, StartKind::StartOfData).unwrap_err();
        assert!(matches!(
            err,
            GlushkovError::Nfa(NfaError::SymbolOutOfAlphabet { .. })
        ));
    }
}
