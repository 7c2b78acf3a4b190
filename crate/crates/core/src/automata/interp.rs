// SPDX-License-Identifier: Apache-2.0
//! Direct NFA interpreter. This is the correctness oracle for the hardware
//! model and deliberately shares no code with it.

use alloc::vec::Vec;

use super::{HomogeneousNfa, ReportRecord, StartKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("symbol {symbol} at input index {index} is outside the alphabet of {alphabet}")]
pub struct InterpretError {
    pub index: usize,
    pub symbol: u8,
    pub alphabet: usize,
}

/// Runs `nfa` over `input`, reporting every (reporting state, cycle)
/// activation in cycle order, then ascending state id.
pub fn interpret(nfa: &HomogeneousNfa, input: &[u8]) -> Result<Vec<ReportRecord>, InterpretError> {
    let alphabet = nfa.alphabet_size();
    if let Some((index, &symbol)) = input
        .iter()
        .enumerate()
        .find(|(_, &s)| s as usize >= alphabet)
    {
        return Err(InterpretError {
            index,
            symbol,
            alphabet,
        });
    }
    let n = nfa.len();
    let always: Vec<usize> = (0..n)
        .filter(|&s| nfa.state(s).start == StartKind::AllInput)
        .collect();
    let mut enabled: Vec<bool> = nfa
        .states()
        .iter()
        .map(|s| s.start != StartKind::None)
        .collect();
    let mut next = alloc::vec![false; n];
    let mut reports = Vec::new();
    for (cycle, &symbol) in input.iter().enumerate() {
        next.iter_mut().for_each(|b| *b = false);
        for (s, &on) in enabled.iter().enumerate() {
            if !on || !nfa.state(s).class.accepts(symbol, alphabet) {
                continue;
            }
            if nfa.state(s).reporting {
                reports.push(ReportRecord {
                    cycle: cycle as u64,
                    state: s,
                    partition: 0,
                    symbol,
                });
            }
            for &d in nfa.successors(s) {
                next[d] = true;
            }
        }
        for &s in &always {
            next[s] = true;
        }
        core::mem::swap(&mut enabled, &mut next);
    }
    Ok(reports)
}
