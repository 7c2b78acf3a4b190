// SPDX-License-Identifier: Apache-2.0
//! Byte-oriented regex parser.
//!
//! Supported syntax: literals, `.`, escapes (`\n \t \r \xHH \d \w \s` and their
//! negations, or any escaped punctuation), classes `[..]` / `[^..]` with
//! ranges, grouping, alternation and the postfix operators `*`, `+`, `?`.
//! An alternation whose branches are all single-symbol atoms is folded into
//! one class, so `(a|b)` and `[ab]` produce the same tree.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::fmt;

use super::SymbolClass;
use crate::bits::Bits256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Class(SymbolClass),
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
    Optional(Box<Regex>),
}

impl Regex {
    /// Number of symbol positions (leaves) in the tree.
    pub fn positions(&self) -> usize {
        match self {
            Regex::Class(_) => 1,
            Regex::Concat(v) | Regex::Alt(v) => v.iter().map(Regex::positions).sum(),
            Regex::Star(r) | Regex::Plus(r) | Regex::Optional(r) => r.positions(),
        }
    }

    /// True if the empty string is in the language.
    pub fn nullable(&self) -> bool {
        match self {
            Regex::Class(_) => false,
            Regex::Concat(v) => v.iter().all(Regex::nullable),
            Regex::Alt(v) => v.iter().any(Regex::nullable),
            Regex::Star(_) | Regex::Optional(_) => true,
            Regex::Plus(r) => r.nullable(),
        }
    }

    /// Largest symbol referenced by any class, plus one.
    pub fn symbol_bound(&self) -> usize {
        match self {
            Regex::Class(c) => c.members.bound(),
            Regex::Concat(v) | Regex::Alt(v) => {
                v.iter().map(Regex::symbol_bound).max().unwrap_or(0)
            }
            Regex::Star(r) | Regex::Plus(r) | Regex::Optional(r) => r.symbol_bound(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    EmptyPattern,
    EmptyAlternative,
    UnmatchedOpenParen,
    UnmatchedCloseParen,
    NothingToRepeat,
    UnclosedClass,
    EmptyClass,
    InvalidRange,
    InvalidEscape,
    UnexpectedEnd,
}

/// Syntax error at a byte offset into the pattern.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self.kind {
            ParseErrorKind::EmptyPattern => "empty pattern",
            ParseErrorKind::EmptyAlternative => "empty alternative or group",
            ParseErrorKind::UnmatchedOpenParen => "unclosed group",
            ParseErrorKind::UnmatchedCloseParen => "unmatched ')'",
            ParseErrorKind::NothingToRepeat => "repetition operator without operand",
            ParseErrorKind::UnclosedClass => "unclosed character class",
            ParseErrorKind::EmptyClass => "empty character class",
            ParseErrorKind::InvalidRange => "invalid class range",
            ParseErrorKind::InvalidEscape => "invalid escape",
            ParseErrorKind::UnexpectedEnd => "unexpected end of pattern",
        };
        write!(f, "regex syntax error at byte {}: {}", self.offset, what)
    }
}

/// Prints a pattern that `parse` accepts and that denotes the same language.
/// Symbols other than ASCII alphanumerics are written as `\xHH`.
impl fmt::Display for Regex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Regex::Class(c) => write_class(f, c),
            Regex::Concat(v) => v.iter().try_for_each(|r| match r {
                Regex::Alt(_) => write!(f, "({r})"),
                _ => write!(f, "{r}"),
            }),
            Regex::Alt(v) => {
                f.write_str("(")?;
                for (i, r) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str("|")?;
                    }
                    write!(f, "{r}")?;
                }
                f.write_str(")")
            }
            Regex::Star(r) => write_postfix(f, r, '*'),
            Regex::Plus(r) => write_postfix(f, r, '+'),
            Regex::Optional(r) => write_postfix(f, r, '?'),
        }
    }
}

fn write_postfix(f: &mut fmt::Formatter<'_>, r: &Regex, op: char) -> fmt::Result {
    match r {
        Regex::Class(_) | Regex::Alt(_) => write!(f, "{r}{op}"),
        _ => write!(f, "({r}){op}"),
    }
}

fn write_symbol(f: &mut fmt::Formatter<'_>, s: usize) -> fmt::Result {
    let b = s as u8;
    if b.is_ascii_alphanumeric() {
        write!(f, "{}", b as char)
    } else {
        write!(f, "\\x{b:02x}")
    }
}

fn write_class(f: &mut fmt::Formatter<'_>, c: &SymbolClass) -> fmt::Result {
    let members: Vec<usize> = c.members.iter().collect();
    if !c.negated && members.len() == 1 {
        return write_symbol(f, members[0]);
    }
    f.write_str(if c.negated { "[^" } else { "[" })?;
    if members.is_empty() {
        // `[]` is not valid syntax; the negated full range also matches nothing
        return f.write_str("^\\x00-\\xff]");
    }
    let mut i = 0;
    while i < members.len() {
        let mut j = i;
        while j + 1 < members.len() && members[j + 1] == members[j] + 1 {
            j += 1;
        }
        write_symbol(f, members[i])?;
        if j > i {
            f.write_str("-")?;
            write_symbol(f, members[j])?;
        }
        i = j + 1;
    }
    f.write_str("]")
}

pub fn parse(pattern: &str) -> Result<Regex, ParseError> {
    let mut p = Parser {
        src: pattern.as_bytes(),
        pos: 0,
    };
    if p.src.is_empty() {
        return Err(p.err(ParseErrorKind::EmptyPattern));
    }
    let tree = p.alternation()?;
    if p.pos < p.src.len() {
        // only a stray ')' stops the top-level alternation early
        return Err(p.err(ParseErrorKind::UnmatchedCloseParen));
    }
    Ok(tree)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            offset: self.pos,
            kind,
        }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn alternation(&mut self) -> Result<Regex, ParseError> {
        let mut branches = Vec::new();
        loop {
            branches.push(self.concat()?);
            if self.peek() == Some(b'|') {
                self.pos += 1;
            } else {
                break;
            }
        }
        if branches.len() == 1 {
            return Ok(branches.pop().unwrap());
        }
        if branches.iter().all(|b| matches!(b, Regex::Class(_))) {
            let folded = branches
                .iter()
                .map(|b| match b {
                    Regex::Class(c) => *c,
                    _ => unreachable!(),
                })
                .reduce(|a, b| a.union(&b))
                .unwrap();
            return Ok(Regex::Class(folded));
        }
        Ok(Regex::Alt(branches))
    }

    fn concat(&mut self) -> Result<Regex, ParseError> {
        let mut items = Vec::new();
        while let Some(b) = self.peek() {
            if b == b'|' || b == b')' {
                break;
            }
            let atom = self.atom()?;
            items.push(self.postfix(atom));
        }
        match items.len() {
            0 => Err(self.err(ParseErrorKind::EmptyAlternative)),
            1 => Ok(items.pop().unwrap()),
            _ => Ok(Regex::Concat(items)),
        }
    }

    fn postfix(&mut self, mut atom: Regex) -> Regex {
        while let Some(op) = self.peek() {
            atom = match op {
                b'*' => Regex::Star(Box::new(atom)),
                b'+' => Regex::Plus(Box::new(atom)),
                b'?' => Regex::Optional(Box::new(atom)),
                _ => break,
            };
            self.pos += 1;
        }
        atom
    }

    fn atom(&mut self) -> Result<Regex, ParseError> {
        let start = self.pos;
        match self
            .bump()
            .ok_or_else(|| self.err(ParseErrorKind::UnexpectedEnd))?
        {
            b'(' => {
                let inner = self.alternation()?;
                if self.bump() != Some(b')') {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnmatchedOpenParen,
                    });
                }
                Ok(inner)
            }
            b'*' | b'+' | b'?' => Err(ParseError {
                offset: start,
                kind: ParseErrorKind::NothingToRepeat,
            }),
            b'[' => self.class(start).map(Regex::Class),
            b'.' => Ok(Regex::Class(SymbolClass::any())),
            b'\\' => self.escape().map(Regex::Class),
            b => Ok(Regex::Class(SymbolClass::single(b))),
        }
    }

    fn escape(&mut self) -> Result<SymbolClass, ParseError> {
        let at = self.pos - 1;
        let bad = ParseError {
            offset: at,
            kind: ParseErrorKind::InvalidEscape,
        };
        let b = self.bump().ok_or(bad)?;
        let digits: Bits256 = (b'0'..=b'9').map(usize::from).collect();
        let word: Bits256 = (b'0'..=b'9')
            .chain(b'a'..=b'z')
            .chain(b'A'..=b'Z')
            .chain(core::iter::once(b'_'))
            .map(usize::from)
            .collect();
        let space: Bits256 = [b' ', b'\t', b'\n', b'\r', 0x0b, 0x0c]
            .into_iter()
            .map(usize::from)
            .collect();
        Ok(match b {
            b'n' => SymbolClass::single(b'\n'),
            b't' => SymbolClass::single(b'\t'),
            b'r' => SymbolClass::single(b'\r'),
            b'0' => SymbolClass::single(0),
            b'd' => SymbolClass::of(digits),
            b'D' => SymbolClass::negated(digits),
            b'w' => SymbolClass::of(word),
            b'W' => SymbolClass::negated(word),
            b's' => SymbolClass::of(space),
            b'S' => SymbolClass::negated(space),
            b'x' => {
                let hi = self.bump().and_then(hex_val).ok_or(bad)?;
                let lo = self.bump().and_then(hex_val).ok_or(bad)?;
                SymbolClass::single(hi * 16 + lo)
            }
            b if b.is_ascii_alphanumeric() => return Err(bad),
            b => SymbolClass::single(b),
        })
    }

    /// Single byte inside a class, handling escapes.
    fn class_byte(&mut self) -> Result<u8, ParseError> {
        let at = self.pos;
        match self.bump() {
            None => Err(ParseError {
                offset: at,
                kind: ParseErrorKind::UnclosedClass,
            }),
            Some(b'\\') => {
                let bad = ParseError {
                    offset: at,
                    kind: ParseErrorKind::InvalidEscape,
                };
                match self.bump().ok_or(bad)? {
                    b'n' => Ok(b'\n'),
                    b't' => Ok(b'\t'),
                    b'r' => Ok(b'\r'),
                    b'0' => Ok(0),
                    b'x' => {
                        let hi = self.bump().and_then(hex_val).ok_or(bad)?;
                        let lo = self.bump().and_then(hex_val).ok_or(bad)?;
                        Ok(hi * 16 + lo)
                    }
                    b if b.is_ascii_alphanumeric() => Err(bad),
                    b => Ok(b),
                }
            }
            Some(b) => Ok(b),
        }
    }

    fn class(&mut self, start: usize) -> Result<SymbolClass, ParseError> {
        let negated = if self.peek() == Some(b'^') {
            self.pos += 1;
            true
        } else {
            false
        };
        let mut members = Bits256::EMPTY;
        let mut first = true;
        loop {
            match self.peek() {
                None => {
                    return Err(ParseError {
                        offset: start,
                        kind: ParseErrorKind::UnclosedClass,
                    })
                }
                // a leading ']' is a literal
                Some(b']') if !first => {
                    self.pos += 1;
                    break;
                }
                _ => {}
            }
            first = false;
            let range_at = self.pos;
            let lo = self.class_byte()?;
            if self.peek() == Some(b'-') && self.src.get(self.pos + 1).is_some_and(|&c| c != b']') {
                self.pos += 1;
                let hi = self.class_byte()?;
                if hi < lo {
                    return Err(ParseError {
                        offset: range_at,
                        kind: ParseErrorKind::InvalidRange,
                    });
                }
                for s in lo..=hi {
                    members.insert(s as usize);
                }
            } else {
                members.insert(lo as usize);
            }
        }
        if members.is_empty() {
            return Err(ParseError {
                offset: start,
                kind: ParseErrorKind::EmptyClass,
            });
        }
        Ok(SymbolClass { members, negated })
    }
}

fn hex_val(b: u8) -> Option<u8> {
    (b as char).to_digit(16).map(|d| d as u8)
}
