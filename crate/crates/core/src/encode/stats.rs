// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use crate::automata::{HomogeneousNfa, SymbolClass};
use crate::bits::Bits256;

/// Exact non-negative rational. Averages stay rational so that `𝒮 = 1` is an
/// exact test (1.006 must not count as 1).
#[derive(Clone, Copy, Debug)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Ratio {
    pub num: u64,
    pub den: u64,
}

impl Ratio {
    pub fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Ratio { num, den }
    }

    pub fn integer(n: u64) -> Self {
        Ratio { num: n, den: 1 }
    }

    pub fn is_one(&self) -> bool {
        self.num == self.den
    }

    pub fn ceil(&self) -> u64 {
        self.num.div_ceil(self.den)
    }

    pub fn to_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Ratio {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.4}", self.to_f64())
    }
}

/// Returns the smaller of the class and its complement and whether the
/// complement was chosen. Equal sizes keep the class.
pub fn apply_negation_opt(class: &SymbolClass, alphabet_size: usize) -> (Bits256, bool) {
    let eff = class.effective(alphabet_size);
    let comp = eff.complement_within(alphabet_size);
    if comp.len() < eff.len() {
        (comp, true)
    } else {
        (eff, false)
    }
}

/// Symbol statistics over the negation-optimized classes of an NFA.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetStats {
    pub alphabet_size: usize,
    pub avg_class_size_raw: Ratio,
    /// 𝒮: average class size after negation optimization.
    pub avg_class_size: Ratio,
    pub freq: Vec<u64>,
    cooccur: Vec<u64>,
}

impl AlphabetStats {
    pub fn cooccur(&self, x: usize, y: usize) -> u64 {
        self.cooccur[x * self.alphabet_size + y]
    }

    /// Statistics from raw classes, without an NFA.
    pub fn from_classes<'a>(
        alphabet_size: usize,
        classes: impl IntoIterator<Item = &'a SymbolClass>,
    ) -> Self {
        let a = alphabet_size;
        let mut freq = alloc::vec![0u64; a];
        let mut cooccur = alloc::vec![0u64; a * a];
        let (mut raw, mut opt, mut n) = (0u64, 0u64, 0u64);
        let mut members: Vec<usize> = Vec::with_capacity(a);
        for class in classes {
            n += 1;
            raw += class.effective(a).len() as u64;
            let (set, _) = apply_negation_opt(class, a);
            opt += set.len() as u64;
            members.clear();
            members.extend(set.iter());
            for &x in &members {
                freq[x] += 1;
                for &y in &members {
                    cooccur[x * a + y] += 1;
                }
            }
        }
        let den = n.max(1);
        AlphabetStats {
            alphabet_size: a,
            avg_class_size_raw: Ratio::new(raw, den),
            avg_class_size: Ratio::new(opt, den),
            freq,
            cooccur,
        }
    }
}

pub fn analyze(nfa: &HomogeneousNfa) -> AlphabetStats {
    AlphabetStats::from_classes(nfa.alphabet_size(), nfa.states().iter().map(|s| &s.class))
}
