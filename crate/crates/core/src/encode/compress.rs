// SPDX-License-Identifier: Apache-2.0
//! Exact compression of symbol classes into CAM entries.
//!
//! An entry whose zero set is `Z` matches exactly the symbols whose code's
//! zero set is contained in `Z`. Merging codes is therefore only exact when
//! every code under the merged zero set belongs to the class: a code with `n`
//! zeros merged up to `m` zeros covers `C(m, n)` codes.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{binomial, CamEntry, Code, Codebook, SchemeKind};
use crate::automata::{HomogeneousNfa, StateId, SymbolClass};
use crate::bits::Bits256;

/// Compresses `members` into CAM entries for `owner`.
///
/// `members` is the set actually stored; with `invert` the state matches the
/// complement. An empty inverted set (a full class) becomes one all-zeros
/// entry with `invert = false`; an empty plain set becomes one all-ones entry,
/// which no valid input code matches.
pub fn compile_class(
    cb: &Codebook,
    members: Bits256,
    invert: bool,
    owner: StateId,
) -> Vec<CamEntry> {
    let len = cb.scheme.code_len;
    let entry = |zeros: u32, invert: bool| CamEntry {
        code: Code::with_zeros(zeros, len),
        owner,
        invert,
    };
    if members.is_empty() {
        let code = if invert {
            Code::zeros(len)
        } else {
            Code::ones(len)
        };
        return alloc::vec![CamEntry {
            code,
            owner,
            invert: false,
        }];
    }
    let zero_masks: Vec<u32> = members.iter().map(|s| cb.code(s).zero_mask()).collect();
    let zero_sets = match cb.scheme.kind {
        SchemeKind::OneZero => alloc::vec![zero_masks.iter().fold(0, |acc, z| acc | z)],
        SchemeKind::MultiZeros => multi_zero_cover(zero_masks, cb.scheme.zeros_per_code),
        SchemeKind::TwoZerosPrefix | SchemeKind::OneZeroPrefix => prefix_cover(cb, &zero_masks),
    };
    zero_sets.into_iter().map(|z| entry(z, invert)).collect()
}

/// Suffix compression per cluster, then prefix compression across entries
/// sharing a suffix field.
fn prefix_cover(cb: &Codebook, zero_masks: &[u32]) -> Vec<u32> {
    let pmask = cb.scheme.prefix_mask();
    // prefix -> union of suffix zeros (suffix compression)
    let mut by_prefix: BTreeMap<u32, u32> = BTreeMap::new();
    for &z in zero_masks {
        *by_prefix.entry(z & pmask).or_default() |= z & !pmask;
    }
    let mut by_suffix: BTreeMap<u32, Vec<u32>> = BTreeMap::new();
    for (p, s) in by_prefix {
        by_suffix.entry(s).or_default().push(p);
    }
    let mut out = Vec::new();
    for (suffix, prefixes) in by_suffix {
        match cb.scheme.kind {
            // one zero per prefix: any set of prefixes merges exactly
            SchemeKind::OneZeroPrefix => out.push(prefixes.iter().fold(suffix, |a, p| a | p)),
            _ => out.extend(
                pair_clique_cover(&prefixes, cb.scheme.prefix_len)
                    .into_iter()
                    .map(|p| p | suffix),
            ),
        }
    }
    out
}

/// Covers a set of two-zero prefixes (graph edges on prefix positions) by
/// cliques: a clique on `m ≥ 3` vertices contains all `C(m, 2)` prefixes it
/// would match, so it merges exactly. Greedy: largest remaining clique first.
fn pair_clique_cover(prefixes: &[u32], prefix_len: usize) -> Vec<u32> {
    let mut adj = alloc::vec![0u32; prefix_len];
    for &p in prefixes {
        let a = p.trailing_zeros() as usize;
        let b = 31 - p.leading_zeros() as usize;
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    let mut out = Vec::new();
    loop {
        let clique = max_clique(&adj);
        if clique.count_ones() < 3 {
            break;
        }
        out.push(clique);
        for v in bits(clique) {
            adj[v] &= !clique;
        }
    }
    for (a, &row) in adj.iter().enumerate() {
        for b in bits(row) {
            if a < b {
                out.push(1 << a | 1 << b);
            }
        }
    }
    out
}

fn bits(mut m: u32) -> impl Iterator<Item = usize> {
    core::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(b)
        }
    })
}

/// Largest clique; ties go to the numerically smallest vertex mask.
fn max_clique(adj: &[u32]) -> u32 {
    fn better(a: u32, b: u32) -> bool {
        a.count_ones() > b.count_ones() || (a.count_ones() == b.count_ones() && a < b)
    }
    fn expand(adj: &[u32], r: u32, mut p: u32, best: &mut u32) {
        if p == 0 {
            if better(r, *best) {
                *best = r;
            }
            return;
        }
        if r.count_ones() + p.count_ones() < best.count_ones() {
            return;
        }
        while p != 0 {
            let v = p.trailing_zeros() as usize;
            expand(adj, r | 1 << v, p & adj[v], best);
            p &= !(1 << v);
        }
        if better(r, *best) {
            *best = r;
        }
    }
    let all = adj
        .iter()
        .enumerate()
        .filter(|(_, &row)| row != 0)
        .fold(0u32, |m, (v, _)| m | 1 << v);
    let mut best = 0;
    expand(adj, 0, all, &mut best);
    best
}

/// Greedy cover of balanced codes by zero-supersets whose every `n`-subset is
/// a member code.
fn multi_zero_cover(mut members: Vec<u32>, n: usize) -> Vec<u32> {
    members.sort_unstable();
    members.dedup();
    let union = members.iter().fold(0u32, |a, z| a | z);
    let width = union.count_ones() as usize;
    let mut candidates = Vec::new();
    // 2^width subsets; wider unions only arise from hand-made schemes
    if width <= 16 && members.len() > 1 {
        let mut sub = union;
        loop {
            let k = sub.count_ones() as usize;
            if k > n
                && binomial(k, n) <= members.len() as u64
                && subsets_all_present(sub, n, &members)
            {
                candidates.push(sub);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & union;
        }
    }
    candidates.sort_unstable();
    let mut covered = alloc::vec![false; members.len()];
    let mut out = Vec::new();
    loop {
        let best = candidates
            .iter()
            .map(|&t| {
                let gain = members
                    .iter()
                    .zip(&covered)
                    .filter(|(&m, &c)| !c && m & !t == 0)
                    .count();
                (gain, t)
            })
            .max_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)));
        match best {
            Some((gain, t)) if gain >= 2 => {
                for (m, c) in members.iter().zip(covered.iter_mut()) {
                    if m & !t == 0 {
                        *c = true;
                    }
                }
                out.push(t);
            }
            _ => break,
        }
    }
    out.extend(
        members
            .iter()
            .zip(&covered)
            .filter(|(_, &c)| !c)
            .map(|(&m, _)| m),
    );
    out
}

fn subsets_all_present(set: u32, n: usize, sorted: &[u32]) -> bool {
    let pos: Vec<usize> = bits(set).collect();
    let k = pos.len();
    let mut idx: Vec<usize> = (0..n).collect();
    loop {
        let m = idx.iter().fold(0u32, |a, &i| a | 1 << pos[i]);
        if sorted.binary_search(&m).is_err() {
            return false;
        }
        let Some(i) = (0..n).rev().find(|&i| idx[i] < k - n + i) else {
            return true;
        };
        idx[i] += 1;
        for j in i + 1..n {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Symbols on which a state stored as `entries` is active.
pub fn matched_symbols(cb: &Codebook, entries: &[CamEntry]) -> Bits256 {
    let invert = entries.first().is_some_and(|e| e.invert);
    let mut out = Bits256::EMPTY;
    for s in 0..cb.alphabet_size {
        let code = cb.code(s).bits();
        let hit = entries.iter().any(|e| e.code.bits() & !code == 0);
        if hit != invert {
            out.insert(s);
        }
    }
    out
}

/// Compiles one state, storing either the class or its complement (with the
/// inverter enabled), whichever needs fewer entries. Ties keep the class.
pub fn compile_state(cb: &Codebook, class: &SymbolClass, owner: StateId) -> Vec<CamEntry> {
    compile_effective(cb, class.effective(cb.alphabet_size), owner)
}

fn compile_effective(cb: &Codebook, eff: Bits256, owner: StateId) -> Vec<CamEntry> {
    let plain = compile_class(cb, eff, false, owner);
    // one entry is the floor and ties keep the plain form
    if plain.len() <= 1 {
        return plain;
    }
    let inverted = compile_class(cb, eff.complement_within(cb.alphabet_size), true, owner);
    if inverted.len() < plain.len() {
        inverted
    } else {
        plain
    }
}

/// Entries for every state of an NFA.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CompiledNfa {
    pub codebook: Codebook,
    pub entries: Vec<Vec<CamEntry>>,
}

impl CompiledNfa {
    pub fn total_entries(&self) -> usize {
        self.entries.iter().map(Vec::len).sum()
    }

    pub fn entries_of(&self, state: StateId) -> &[CamEntry] {
        &self.entries[state]
    }
}

pub fn compile_nfa(nfa: &HomogeneousNfa, codebook: Codebook) -> CompiledNfa {
    // states sharing a class share entries up to the owner field
    let mut memo: BTreeMap<Bits256, Vec<CamEntry>> = BTreeMap::new();
    let entries = nfa
        .states()
        .iter()
        .map(|s| {
            let eff = s.class.effective(codebook.alphabet_size);
            let mut e = memo
                .entry(eff)
                .or_insert_with(|| compile_effective(&codebook, eff, 0))
                .clone();
            e.iter_mut().for_each(|x| x.owner = s.id);
            e
        })
        .collect();
    CompiledNfa { codebook, entries }
}
