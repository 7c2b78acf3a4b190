// SPDX-License-Identifier: Apache-2.0
//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeSet;

use cama_core::automata::{Regex, StartKind, Ste, SymbolClass};
use cama_core::encode::{
    analyze, cluster_symbols, compile_nfa, select_scheme, CompiledNfa, Scheme,
};
use cama_core::fabric::{FabricConfig, TileMode};
use cama_core::mapper::{place, MapError, MapOptions, Placement};
use cama_core::{Bits256, HomogeneousNfa};
use proptest::prelude::*;

/// Symbol sets drawn from a small pool so that patterns actually match.
pub fn class_strategy(alphabet: usize) -> impl Strategy<Value = SymbolClass> {
    let pool = alphabet.min(6);
    prop_oneof![
        6 => (0..pool).prop_map(|s| SymbolClass::single(s as u8)),
        2 => proptest::collection::btree_set(0..pool, 1..=3)
            .prop_map(|s| SymbolClass::of(s.into_iter().collect())),
        1 => proptest::collection::btree_set(0..pool, 1..=2)
            .prop_map(|s| SymbolClass::negated(s.into_iter().collect())),
    ]
}

pub fn regex_strategy(alphabet: usize) -> impl Strategy<Value = Regex> {
    let leaf = class_strategy(alphabet).prop_map(Regex::Class);
    leaf.prop_recursive(6, 24, 3, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Regex::Concat),
            proptest::collection::vec(inner.clone(), 2..=3).prop_map(Regex::Alt),
            inner.clone().prop_map(|r| Regex::Star(Box::new(r))),
            inner.clone().prop_map(|r| Regex::Plus(Box::new(r))),
            inner.prop_map(|r| Regex::Optional(Box::new(r))),
        ]
    })
}

/// End positions `j` such that `r` matches `s[i..j]`. Set semantics over the
/// tree; shares nothing with the position automaton.
pub fn ends(r: &Regex, s: &[u8], i: usize, alphabet: usize) -> BTreeSet<usize> {
    match r {
        Regex::Class(c) => {
            let mut out = BTreeSet::new();
            if i < s.len() && c.effective(alphabet).contains(s[i] as usize) {
                out.insert(i + 1);
            }
            out
        }
        Regex::Concat(v) => {
            let mut cur: BTreeSet<usize> = [i].into_iter().collect();
            for part in v {
                cur = cur
                    .iter()
                    .flat_map(|&k| ends(part, s, k, alphabet))
                    .collect();
            }
            cur
        }
        Regex::Alt(v) => v.iter().flat_map(|p| ends(p, s, i, alphabet)).collect(),
        Regex::Optional(x) => {
            let mut out = ends(x, s, i, alphabet);
            out.insert(i);
            out
        }
        Regex::Star(x) => closure(x, s, [i].into_iter().collect(), alphabet),
        Regex::Plus(x) => closure(x, s, ends(x, s, i, alphabet), alphabet),
    }
}

fn closure(x: &Regex, s: &[u8], seed: BTreeSet<usize>, alphabet: usize) -> BTreeSet<usize> {
    let mut seen = seed.clone();
    let mut todo: Vec<usize> = seed.into_iter().collect();
    while let Some(k) = todo.pop() {
        for e in ends(x, s, k, alphabet) {
            if seen.insert(e) {
                todo.push(e);
            }
        }
    }
    seen
}

/// Cycles at which a non-empty match of `r` ends; `anchored` restricts
/// matches to start at 0.
pub fn match_cycles(r: &Regex, s: &[u8], alphabet: usize, anchored: bool) -> BTreeSet<u64> {
    let starts = if anchored {
        0..s.len().min(1)
    } else {
        0..s.len()
    };
    let mut out = BTreeSet::new();
    for i in starts {
        for j in ends(r, s, i, alphabet) {
            if j > i {
                out.insert((j - 1) as u64);
            }
        }
    }
    out
}

/// Reference ANML semantics written directly from the definition.
pub fn reference_reports(nfa: &HomogeneousNfa, input: &[u8]) -> Vec<(u64, usize, u8)> {
    let a = nfa.alphabet_size();
    let all_input: BTreeSet<usize> = nfa
        .states()
        .iter()
        .filter(|s| s.start == StartKind::AllInput)
        .map(|s| s.id)
        .collect();
    let mut enabled: BTreeSet<usize> = nfa
        .states()
        .iter()
        .filter(|s| s.start != StartKind::None)
        .map(|s| s.id)
        .collect();
    let mut out = Vec::new();
    for (i, &sym) in input.iter().enumerate() {
        let active: Vec<usize> = enabled
            .iter()
            .copied()
            .filter(|&q| nfa.state(q).class.effective(a).contains(sym as usize))
            .collect();
        for &q in &active {
            if nfa.state(q).reporting {
                out.push((i as u64, q, sym));
            }
        }
        enabled = all_input.clone();
        for &q in &active {
            enabled.extend(nfa.successors(q).iter().copied());
        }
    }
    out.sort_unstable();
    out
}

#[derive(Clone, Debug)]
pub struct NfaSpec {
    pub alphabet: usize,
    pub classes: Vec<SymbolClass>,
    pub starts: Vec<StartKind>,
    pub reporting: Vec<bool>,
    pub edges: Vec<(usize, usize)>,
}

impl NfaSpec {
    pub fn build(&self) -> HomogeneousNfa {
        let states = (0..self.classes.len())
            .map(|id| Ste {
                id,
                class: self.classes[id],
                start: self.starts[id],
                reporting: self.reporting[id],
            })
            .collect();
        HomogeneousNfa::new(self.alphabet, states, self.edges.iter().copied()).unwrap()
    }
}

fn any_class(alphabet: usize) -> impl Strategy<Value = SymbolClass> {
    let a = alphabet;
    prop_oneof![
        4 => (0..a).prop_map(|s| SymbolClass::single(s as u8)),
        2 => proptest::collection::btree_set(0..a, 1..=a.min(12))
            .prop_map(|s| SymbolClass::of(s.into_iter().collect())),
        2 => proptest::collection::btree_set(0..a, 0..=a.min(6))
            .prop_map(|s| SymbolClass::negated(s.into_iter().collect())),
        1 => Just(SymbolClass::any()),
    ]
}

fn start_kind() -> impl Strategy<Value = StartKind> {
    prop_oneof![
        6 => Just(StartKind::None),
        1 => Just(StartKind::StartOfData),
        1 => Just(StartKind::AllInput),
    ]
}

/// Random homogeneous NFAs over varied alphabets with mostly local edges and
/// a few long ones.
pub fn nfa_strategy(max_states: usize) -> impl Strategy<Value = NfaSpec> {
    (
        prop_oneof![Just(2usize), Just(5), Just(16), Just(40), Just(256)],
        1..=max_states,
    )
        .prop_flat_map(|(a, n)| {
            (
                Just(a),
                proptest::collection::vec(any_class(a), n),
                proptest::collection::vec(start_kind(), n),
                proptest::collection::vec(proptest::bool::weighted(0.3), n),
                proptest::collection::vec((0..n, -3i64..=6), 0..=2 * n),
                proptest::collection::vec((0..n, 0..n), 0..=3),
            )
        })
        .prop_map(|(alphabet, classes, mut starts, reporting, local, far)| {
            let n = classes.len();
            if starts.iter().all(|s| *s == StartKind::None) {
                starts[0] = StartKind::AllInput;
            }
            let mut edges: Vec<(usize, usize)> = local
                .into_iter()
                .map(|(u, d)| (u, (u as i64 + d).clamp(0, n as i64 - 1) as usize))
                .collect();
            edges.extend(far);
            NfaSpec {
                alphabet,
                classes,
                starts,
                reporting,
                edges,
            }
        })
}

pub fn input_strategy(alphabet: usize, max_len: usize) -> impl Strategy<Value = Vec<u8>> {
    // bias toward the low symbols the classes use
    let hot = alphabet.min(6);
    proptest::collection::vec(
        prop_oneof![3 => 0..hot, 1 => 0..alphabet].prop_map(|s| s as u8),
        0..=max_len,
    )
}

pub fn compile(nfa: &HomogeneousNfa) -> CompiledNfa {
    let st = analyze(nfa);
    let scheme = select_scheme(nfa.alphabet_size(), st.avg_class_size, 16, 32).unwrap();
    compile_nfa(nfa, cluster_symbols(&st, &scheme))
}

pub fn compile_with(nfa: &HomogeneousNfa, scheme: Scheme) -> CompiledNfa {
    compile_nfa(nfa, cluster_symbols(&analyze(nfa), &scheme))
}

pub fn map(
    nfa: &HomogeneousNfa,
    c: &CompiledNfa,
    mode: Option<TileMode>,
) -> Result<Placement, MapError> {
    place(
        nfa,
        c,
        &FabricConfig::default(),
        &MapOptions { force_mode: mode },
    )
}

pub fn bits(v: impl IntoIterator<Item = usize>) -> Bits256 {
    v.into_iter().collect()
}

/// `n choose k` by Pascal's triangle.
pub fn choose(n: usize, k: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![1u64; row.len() + 1];
        for i in 1..row.len() {
            next[i] = row[i - 1].saturating_add(row[i]);
        }
        row = next;
    }
    row.get(k).copied().unwrap_or(0)
}
