// SPDX-License-Identifier: Apache-2.0
//! Differential fuzzing of compile, map and simulate against the reference
//! interpreter.
//!
//! Case `i` of seed `s` is drawn from a ChaCha stream keyed by `(s, i)`, so
//! cases are reproducible one by one and can be sharded freely.

use cama_core::automata::{Regex, StartKind, SymbolClass};
use cama_core::fabric::{SwitchProgram, TileMode};
use cama_core::mapper::{place, MapOptions, Placement};
use cama_core::sim::{run_oracle_compare, CompareError, Divergence};
use cama_core::{Bits256, HomogeneousNfa};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::nfa_io::nfa_from_patterns;
use crate::pipeline;

const ALPHABETS: [usize; 5] = [2, 4, 16, 40, 256];

/// Modes every case runs in; `None` lets the mapper choose.
pub const MODES: [Option<TileMode>; 4] = [
    None,
    Some(TileMode::Rcb16),
    Some(TileMode::Fcb16),
    Some(TileMode::Mode32),
];

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuzzCase {
    pub index: u64,
    pub seed: u64,
    pub alphabet: usize,
    pub start: StartKind,
    pub patterns: Vec<String>,
    #[serde(with = "hex_bytes")]
    pub input: Vec<u8>,
}

mod hex_bytes {
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[u8], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&hex::encode(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<u8>, D::Error> {
        hex::decode(String::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}

impl FuzzCase {
    pub fn nfa(&self) -> Result<HomogeneousNfa> {
        nfa_from_patterns(
            self.patterns.iter().map(String::as_str),
            self.alphabet,
            self.start,
        )
    }
}

/// Deliberate placement corruption used to check that the harness catches
/// faults.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// Clears the lowest programmed cell of the first non-empty local switch.
    DropLocalEdge,
}

pub fn inject(p: &mut Placement, fault: Fault) -> bool {
    match fault {
        Fault::DropLocalEdge => {
            for t in &mut p.tiles {
                for sw in &mut t.switches {
                    match sw {
                        SwitchProgram::Rcb(r) => {
                            if let Some(w) = r.windows.iter_mut().find(|w| **w != 0) {
                                *w &= *w - 1;
                                return true;
                            }
                        }
                        SwitchProgram::Fcb(f) => {
                            if let Some(row) = f.blocks.iter_mut().flatten().find(|r| **r != 0) {
                                *row &= *row - 1;
                                return true;
                            }
                        }
                    }
                }
            }
            false
        }
    }
}

fn class(rng: &mut ChaCha8Rng, alphabet: usize) -> SymbolClass {
    // a small hot pool keeps patterns matching often
    let pool = alphabet.min(6);
    let pick = |rng: &mut ChaCha8Rng, n: usize| -> Bits256 {
        let mut syms: Vec<usize> = (0..pool).collect();
        syms.shuffle(rng);
        syms.into_iter().take(n).collect()
    };
    match rng.gen_range(0..10) {
        0..=5 => SymbolClass::single(rng.gen_range(0..pool) as u8),
        6..=7 => {
            let n = rng.gen_range(1..=3);
            SymbolClass::of(pick(rng, n))
        }
        8 => {
            let n = rng.gen_range(1..=2);
            SymbolClass::negated(pick(rng, n))
        }
        _ => SymbolClass::single(rng.gen_range(0..alphabet) as u8),
    }
}

fn regex(rng: &mut ChaCha8Rng, alphabet: usize, depth: u32) -> Regex {
    if depth == 0 || rng.gen_bool(0.35) {
        return Regex::Class(class(rng, alphabet));
    }
    let sub = |rng: &mut ChaCha8Rng| regex(rng, alphabet, depth - 1);
    match rng.gen_range(0..6) {
        0 | 1 => Regex::Concat((0..rng.gen_range(2..=4)).map(|_| sub(rng)).collect()),
        2 => Regex::Alt((0..rng.gen_range(2..=3)).map(|_| sub(rng)).collect()),
        3 => Regex::Star(Box::new(sub(rng))),
        4 => Regex::Plus(Box::new(sub(rng))),
        _ => Regex::Optional(Box::new(sub(rng))),
    }
}

pub fn generate(seed: u64, index: u64, max_input: usize) -> FuzzCase {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let alphabet = *ALPHABETS.choose(&mut rng).expect("non-empty");
    let start = if rng.gen_bool(0.7) {
        StartKind::AllInput
    } else {
        StartKind::StartOfData
    };
    let patterns = (0..rng.gen_range(1..=3))
        .map(|_| {
            // a pattern must have at least one position to be reportable
            let mut r = regex(&mut rng, alphabet, 5);
            while r.positions() == 0 {
                r = regex(&mut rng, alphabet, 5);
            }
            r.to_string()
        })
        .collect();
    let hot = alphabet.min(6);
    let len = rng.gen_range(0..=max_input);
    let input = (0..len)
        .map(|_| if rng.gen_bool(0.75) { rng.gen_range(0..hot) } else { rng.gen_range(0..alphabet) } as u8)
        .collect();
    FuzzCase {
        index,
        seed,
        alphabet,
        start,
        patterns,
        input,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum Outcome {
    /// Reports agreed in every mode that could be mapped.
    Pass { reports: usize, modes: usize },
    /// No mode could be mapped or the case is not constructible.
    Skip { reason: String },
    Diverged {
        mode: Option<TileMode>,
        detail: String,
    },
}

fn check_mode(
    nfa: &HomogeneousNfa,
    case: &FuzzCase,
    mode: Option<TileMode>,
    fault: Option<Fault>,
) -> Option<std::result::Result<usize, Divergence>> {
    let cfg = cama_core::fabric::FabricConfig::default();
    let (_, compiled) = pipeline::encode(nfa, &cfg).ok()?;
    let mut p = place(nfa, &compiled, &cfg, &MapOptions { force_mode: mode }).ok()?;
    if let Some(f) = fault {
        inject(&mut p, f);
    }
    match run_oracle_compare(nfa, &p, &case.input) {
        Ok(n) => Some(Ok(n)),
        Err(CompareError::Divergence(d)) => Some(Err(d)),
        // generated inputs stay inside the alphabet
        Err(e) => panic!("case {}: {e}", case.index),
    }
}

pub fn run_case(case: &FuzzCase, fault: Option<Fault>) -> Outcome {
    let nfa = match case.nfa() {
        Ok(n) => n,
        Err(e) => {
            return Outcome::Skip {
                reason: e.to_string(),
            }
        }
    };
    let (mut modes, mut reports) = (0, 0);
    for mode in MODES {
        match check_mode(&nfa, case, mode, fault) {
            None => {}
            Some(Ok(n)) => {
                modes += 1;
                reports = n;
            }
            Some(Err(d)) => {
                return Outcome::Diverged {
                    mode,
                    detail: d.to_string(),
                }
            }
        }
    }
    if modes == 0 {
        return Outcome::Skip {
            reason: "no mode could map the case".into(),
        };
    }
    Outcome::Pass { reports, modes }
}

fn diverges(case: &FuzzCase, mode: Option<TileMode>, fault: Option<Fault>) -> bool {
    case.nfa()
        .ok()
        .and_then(|nfa| check_mode(&nfa, case, mode, fault))
        .is_some_and(|r| r.is_err())
}

/// Greedy shrinking: fewer patterns, then a shorter input, keeping the
/// divergence in `mode`.
pub fn shrink(case: &FuzzCase, mode: Option<TileMode>, fault: Option<Fault>) -> FuzzCase {
    let mut best = case.clone();
    let mut i = 0;
    while best.patterns.len() > 1 && i < best.patterns.len() {
        let mut c = best.clone();
        c.patterns.remove(i);
        if diverges(&c, mode, fault) {
            best = c;
        } else {
            i += 1;
        }
    }
    // halve the tail, then drop single symbols
    while !best.input.is_empty() {
        let mut c = best.clone();
        c.input.truncate(best.input.len() / 2);
        if !diverges(&c, mode, fault) {
            break;
        }
        best = c;
    }
    let mut k = 0;
    while k < best.input.len() {
        let mut c = best.clone();
        c.input.remove(k);
        if diverges(&c, mode, fault) {
            best = c;
        } else {
            k += 1;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CaseDigest {
    pub index: u64,
    pub alphabet: usize,
    pub patterns: Vec<String>,
    pub input_len: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub mode: Option<TileMode>,
    pub detail: String,
    pub original: FuzzCase,
    pub shrunk: FuzzCase,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzSummary {
    pub seed: u64,
    pub cases: u64,
    pub passed: u64,
    pub skipped: u64,
    pub diverged: u64,
    pub reports: u64,
    pub case_list: Vec<CaseDigest>,
    pub counterexample: Option<Counterexample>,
}

#[derive(Clone, Copy, Debug)]
pub struct FuzzConfig {
    pub seed: u64,
    pub cases: u64,
    pub max_input: usize,
    pub fault: Option<Fault>,
    /// Stop at the first divergence.
    pub stop_early: bool,
}

pub fn fuzz(cfg: &FuzzConfig) -> FuzzSummary {
    let mut s = FuzzSummary {
        seed: cfg.seed,
        cases: 0,
        passed: 0,
        skipped: 0,
        diverged: 0,
        reports: 0,
        case_list: Vec::new(),
        counterexample: None,
    };
    for i in 0..cfg.cases {
        let case = generate(cfg.seed, i, cfg.max_input);
        s.cases += 1;
        s.case_list.push(CaseDigest {
            index: i,
            alphabet: case.alphabet,
            patterns: case.patterns.clone(),
            input_len: case.input.len(),
        });
        match run_case(&case, cfg.fault) {
            Outcome::Pass { reports, .. } => {
                s.passed += 1;
                s.reports += reports as u64;
            }
            Outcome::Skip { .. } => s.skipped += 1,
            Outcome::Diverged { mode, detail } => {
                s.diverged += 1;
                if s.counterexample.is_none() {
                    s.counterexample = Some(Counterexample {
                        mode,
                        detail,
                        shrunk: shrink(&case, mode, cfg.fault),
                        original: case,
                    });
                }
                if cfg.stop_early {
                    break;
                }
            }
        }
    }
    s
}
