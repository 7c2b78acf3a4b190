// SPDX-License-Identifier: Apache-2.0
//! Symbol encoding for the 8T CAM.
//!
//! The match rule is the subset rule: an entry matches an input code iff every
//! `1` of the entry is also `1` in the input, so an entry `0` is a don't-care.
//! Every symbol code carries a fixed number of zeros, which makes a single
//! mismatching symbol always hit at least one discharging cell. Classes are
//! compressed by clearing `1`s, which is only exact under the combinatorial
//! rules implemented in [`compile_class`].

mod codebook;
mod compress;
mod scheme;
mod stats;
mod table;

pub use codebook::{cluster_symbols, encode_symbol, zero_patterns, Codebook};
pub use compress::{compile_class, compile_nfa, compile_state, matched_symbols, CompiledNfa};
pub use scheme::{binomial, ceil_sqrt, isqrt, select_scheme};
pub use stats::{analyze, apply_negation_opt, AlphabetStats, Ratio};
pub use table::{build_encoder_table, EncoderTable};

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use crate::automata::StateId;

/// Longest supported code: two 16-row sub-arrays ANDed together.
pub const MAX_CODE_LEN: usize = 32;
/// Rows of one CAM sub-array.
pub const CAM_ROWS: usize = 16;

/// A bit string of `len ≤ 32` bits. Character `i` of the textual form is bit
/// `i` of `bits`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Code {
    bits: u32,
    len: u8,
}

impl Code {
    pub fn new(bits: u32, len: usize) -> Self {
        assert!(len <= MAX_CODE_LEN, "code length {len} exceeds 32");
        Code {
            bits: bits & mask(len),
            len: len as u8,
        }
    }

    /// All-ones code: never matches a valid input since every input code has
    /// at least one zero.
    pub fn ones(len: usize) -> Self {
        Code::new(u32::MAX, len)
    }

    pub fn zeros(len: usize) -> Self {
        Code::new(0, len)
    }

    /// Code of `len` ones with zeros at the positions set in `zero_mask`.
    pub fn with_zeros(zero_mask: u32, len: usize) -> Self {
        Code::new(!zero_mask, len)
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn len(&self) -> usize {
        self.len as usize
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn zero_mask(&self) -> u32 {
        !self.bits & mask(self.len())
    }

    pub fn zero_count(&self) -> usize {
        self.zero_mask().count_ones() as usize
    }

    pub fn and(&self, other: &Code) -> Code {
        debug_assert_eq!(self.len, other.len);
        Code::new(self.bits & other.bits, self.len())
    }

    /// Zero-extended to 32 bits.
    pub fn padded(&self) -> u32 {
        self.bits
    }
}

#[inline]
pub fn mask(len: usize) -> u32 {
    if len >= 32 {
        u32::MAX
    } else {
        (1u32 << len) - 1
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len() {
            f.write_str(if self.bits >> i & 1 == 1 { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Code({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid code string {0:?}")]
pub struct CodeParseError(pub String);

impl FromStr for Code {
    type Err = CodeParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.len() > MAX_CODE_LEN {
            return Err(CodeParseError(s));
        }
        let mut bits = 0u32;
        for (i, c) in s.chars().enumerate() {
            match c {
                '1' => bits |= 1 << i,
                '0' => {}
                _ => return Err(CodeParseError(s)),
            }
        }
        Ok(Code::new(bits, s.len()))
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for Code {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for Code {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SchemeKind {
    /// Complemented one-hot, ℒ = 𝒜.
    OneZero,
    /// Balanced constant-weight codes with ⌊ℒ/2⌋ zeros.
    MultiZeros,
    /// Two-zero prefix + one-zero suffix.
    TwoZerosPrefix,
    /// One-zero prefix + one-zero suffix.
    OneZeroPrefix,
}

impl SchemeKind {
    pub fn is_prefix(&self) -> bool {
        matches!(self, SchemeKind::TwoZerosPrefix | SchemeKind::OneZeroPrefix)
    }

    /// Zeros in the prefix field (prefix kinds only).
    pub fn prefix_zeros(&self) -> usize {
        match self {
            SchemeKind::TwoZerosPrefix => 2,
            _ => 1,
        }
    }
}

/// Encoding scheme. For prefix kinds the prefix occupies bit positions
/// `0..prefix_len` and the suffix `prefix_len..code_len`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Scheme {
    pub kind: SchemeKind,
    pub code_len: usize,
    pub prefix_len: usize,
    pub suffix_len: usize,
    pub zeros_per_code: usize,
}

impl Scheme {
    pub fn one_zero(alphabet: usize) -> Self {
        Scheme {
            kind: SchemeKind::OneZero,
            code_len: alphabet,
            prefix_len: 0,
            suffix_len: 0,
            zeros_per_code: 1,
        }
    }

    pub fn multi_zeros(code_len: usize) -> Self {
        Scheme {
            kind: SchemeKind::MultiZeros,
            code_len,
            prefix_len: 0,
            suffix_len: 0,
            zeros_per_code: code_len / 2,
        }
    }

    pub fn two_zeros_prefix(prefix_len: usize, suffix_len: usize) -> Self {
        Scheme {
            kind: SchemeKind::TwoZerosPrefix,
            code_len: prefix_len + suffix_len,
            prefix_len,
            suffix_len,
            zeros_per_code: 3,
        }
    }

    pub fn one_zero_prefix(prefix_len: usize, suffix_len: usize) -> Self {
        Scheme {
            kind: SchemeKind::OneZeroPrefix,
            code_len: prefix_len + suffix_len,
            prefix_len,
            suffix_len,
            zeros_per_code: 2,
        }
    }

    /// Number of distinct symbols this scheme can encode.
    pub fn capacity(&self) -> u64 {
        match self.kind {
            SchemeKind::OneZero => self.code_len as u64,
            SchemeKind::MultiZeros => binomial(self.code_len, self.zeros_per_code),
            SchemeKind::TwoZerosPrefix => binomial(self.prefix_len, 2) * self.suffix_len as u64,
            SchemeKind::OneZeroPrefix => (self.prefix_len * self.suffix_len) as u64,
        }
    }

    pub fn prefix_mask(&self) -> u32 {
        mask(self.prefix_len)
    }

    pub fn suffix_mask(&self) -> u32 {
        mask(self.code_len) & !mask(self.prefix_len)
    }
}

/// One CAM entry. `invert` marks a state stored by its complement; the state
/// matches when none of its entries match.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CamEntry {
    pub code: Code,
    pub owner: StateId,
    pub invert: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EncodeError {
    #[error("alphabet size {0} outside 1..=256")]
    BadAlphabet(usize),
    #[error("alphabet of {alphabet} symbols needs a {needed}-bit code; the fabric supports {max}")]
    Unmappable {
        alphabet: usize,
        needed: usize,
        max: usize,
    },
    #[error("symbol {symbol} is not in the codebook alphabet of {alphabet}")]
    UnknownSymbol { symbol: usize, alphabet: usize },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn code_text_round_trip() {
        let c: Code = "00101".parse().unwrap();
        assert_eq!(c.len(), 5);
        assert_eq!(c.zero_count(), 3);
        assert_eq!(alloc::format!("{c}"), "00101");
        assert_eq!(c.zero_mask(), 0b01011);
        assert!("0021".parse::<Code>().is_err());
    }

    #[test]
    fn thirty_two_bit_codes() {
        let c = Code::ones(32);
        assert_eq!(c.zero_count(), 0);
        assert_eq!(Code::zeros(32).zero_count(), 32);
    }
}
