// SPDX-License-Identifier: Apache-2.0
//! NFA input formats.
//!
//! JSON:
//! `{"alphabet": 256, "states": [{"id": 0, "symbols": [[97, 98]], "negated": false,
//!   "start": "all-input", "report": true}], "edges": [[0, 0]]}`
//! where `symbols` holds inclusive ranges and `start` is one of `none`,
//! `start-of-data`, `all-input`.
//!
//! Regex list: one pattern per line, each becoming its own component. Blank
//! lines and lines starting with `#` are skipped.

use std::path::Path;

use cama_core::automata::{glushkov_construct, parse_regex};
use cama_core::{Bits256, HomogeneousNfa, StartKind, Ste, SymbolClass};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_ALPHABET: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NfaFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphabet: Option<usize>,
    pub states: Vec<StateFile>,
    #[serde(default)]
    pub edges: Vec<(usize, usize)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateFile {
    pub id: usize,
    pub symbols: Vec<(u16, u16)>,
    #[serde(default)]
    pub negated: bool,
    #[serde(default)]
    pub start: StartKind,
    #[serde(default)]
    pub report: bool,
}

impl NfaFile {
    pub fn from_nfa(nfa: &HomogeneousNfa) -> Self {
        NfaFile {
            alphabet: Some(nfa.alphabet_size()),
            states: nfa
                .states()
                .iter()
                .map(|s| StateFile {
                    id: s.id,
                    symbols: ranges(&s.class.members),
                    negated: s.class.negated,
                    start: s.start,
                    report: s.reporting,
                })
                .collect(),
            edges: nfa.edges().collect(),
        }
    }

    /// `alphabet` applies only when the file does not declare one.
    pub fn build(&self, alphabet: Option<usize>) -> Result<HomogeneousNfa> {
        let a = match (self.alphabet, alphabet) {
            (Some(f), Some(flag)) if f != flag => {
                return Err(Error::input(format!(
                    "file declares an alphabet of {f} but --alphabet is {flag}"
                )))
            }
            (Some(f), _) => f,
            (None, flag) => flag.unwrap_or(DEFAULT_ALPHABET),
        };
        let mut states = Vec::with_capacity(self.states.len());
        for s in &self.states {
            let mut members = Bits256::EMPTY;
            for &(lo, hi) in &s.symbols {
                if lo > hi || hi > 255 {
                    return Err(Error::input(format!(
                        "state {}: bad symbol range [{lo}, {hi}]",
                        s.id
                    )));
                }
                (lo as usize..=hi as usize).for_each(|x| members.insert(x));
            }
            states.push(Ste {
                id: s.id,
                class: SymbolClass {
                    members,
                    negated: s.negated,
                },
                start: s.start,
                reporting: s.report,
            });
        }
        let nfa = HomogeneousNfa::new(a, states, self.edges.iter().copied())
            .map_err(|e| Error::input(e.to_string()))?;
        check_usable(nfa)
    }
}

fn check_usable(nfa: HomogeneousNfa) -> Result<HomogeneousNfa> {
    if nfa.is_empty() {
        return Err(Error::input("the NFA has no states"));
    }
    Ok(nfa)
}

/// Inclusive runs of consecutive members.
fn ranges(b: &Bits256) -> Vec<(u16, u16)> {
    let mut out: Vec<(u16, u16)> = Vec::new();
    for x in b.iter() {
        let x = x as u16;
        match out.last_mut() {
            Some((_, hi)) if *hi + 1 == x => *hi = x,
            _ => out.push((x, x)),
        }
    }
    out
}

pub fn parse_nfa_json(text: &str, alphabet: Option<usize>) -> Result<HomogeneousNfa> {
    let file: NfaFile =
        serde_json::from_str(text).map_err(|e| Error::input(format!("NFA schema error: {e}")))?;
    file.build(alphabet)
}

pub fn nfa_to_json(nfa: &HomogeneousNfa) -> String {
    serde_json::to_string_pretty(&NfaFile::from_nfa(nfa)).expect("NFA serializes")
}

/// One component per pattern, in order.
pub fn nfa_from_patterns<'a>(
    patterns: impl IntoIterator<Item = &'a str>,
    alphabet: usize,
    start: StartKind,
) -> Result<HomogeneousNfa> {
    let mut acc: Option<HomogeneousNfa> = None;
    for (line, p) in patterns.into_iter().enumerate() {
        let at = |msg: String| Error::input(format!("pattern {}: {msg}", line + 1));
        let tree = parse_regex(p).map_err(|e| at(e.to_string()))?;
        let nfa = glushkov_construct(&tree, alphabet, start).map_err(|e| at(e.to_string()))?;
        acc = Some(match acc {
            None => nfa,
            Some(a) => a.concat(&nfa).map_err(|e| at(e.to_string()))?,
        });
    }
    acc.ok_or_else(|| Error::input("no patterns"))
}

pub fn parse_regex_list(
    text: &str,
    alphabet: Option<usize>,
    start: StartKind,
) -> Result<HomogeneousNfa> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .collect();
    let a = alphabet.unwrap_or(DEFAULT_ALPHABET);
    let mut acc: Option<HomogeneousNfa> = None;
    for (i, p) in lines {
        let nfa = nfa_from_patterns([p], a, start)
            .map_err(|e| Error::input(format!("line {}: {}", i + 1, strip_pattern_prefix(&e))))?;
        acc = Some(match acc {
            None => nfa,
            Some(prev) => prev.concat(&nfa).map_err(|e| Error::input(e.to_string()))?,
        });
    }
    acc.ok_or_else(|| Error::input("regex file has no patterns"))
}

fn strip_pattern_prefix(e: &Error) -> String {
    let s = e.to_string();
    s.strip_prefix("pattern 1: ")
        .map(str::to_string)
        .unwrap_or(s)
}

/// Loads an NFA: `.json` files use the JSON schema, anything else is a
/// regex list.
pub fn load_nfa(
    path: &Path,
    alphabet: Option<usize>,
    start: StartKind,
) -> Result<(HomogeneousNfa, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(Error::io(path))?;
    let text = std::str::from_utf8(&bytes)
        .map_err(|_| Error::input(format!("{}: not UTF-8", path.display())))?;
    let nfa = if path
        .extension()
        .is_some_and(|e| e.eq_ignore_ascii_case("json"))
    {
        parse_nfa_json(text, alphabet)?
    } else {
        parse_regex_list(text, alphabet, start)?
    };
    Ok((nfa, bytes))
}
