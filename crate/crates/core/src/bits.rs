// SPDX-License-Identifier: Apache-2.0
//! Fixed-width 256-bit set, used both for symbol sets and for column vectors.

use core::fmt;

/// A set over `0..256` stored as four 64-bit words.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bits256(pub [u64; 4]);

impl Bits256 {
    pub const EMPTY: Bits256 = Bits256([0; 4]);
    pub const FULL: Bits256 = Bits256([u64::MAX; 4]);

    /// The set `{0, 1, ..., n-1}` (n ≤ 256).
    pub fn prefix(n: usize) -> Self {
        assert!(n <= 256, "prefix length {n} exceeds 256");
        let mut words = [0u64; 4];
        for (w, word) in words.iter_mut().enumerate() {
            let lo = w * 64;
            if n >= lo + 64 {
                *word = u64::MAX;
            } else if n > lo {
                *word = (1u64 << (n - lo)) - 1;
            }
        }
        Bits256(words)
    }

    #[inline]
    pub fn contains(&self, i: usize) -> bool {
        i < 256 && self.0[i >> 6] & (1u64 << (i & 63)) != 0
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0[i >> 6] |= 1u64 << (i & 63);
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0[i >> 6] &= !(1u64 << (i & 63));
    }

    pub fn set(&mut self, i: usize, value: bool) {
        if value {
            self.insert(i)
        } else {
            self.remove(i)
        }
    }

    pub fn len(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a |= b;
        }
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= b;
        }
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = *self;
        for (a, b) in out.0.iter_mut().zip(other.0.iter()) {
            *a &= !b;
        }
        out
    }

    /// Complement within `0..n`.
    pub fn complement_within(&self, n: usize) -> Self {
        Bits256::prefix(n).difference(self)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.0.iter().zip(other.0.iter()).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.difference(other).is_empty()
    }

    /// Bits `offset..offset+64` as a word; positions past 255 read as 0.
    pub fn window64(&self, offset: usize) -> u64 {
        if offset >= 256 {
            return 0;
        }
        let (w, b) = (offset >> 6, offset & 63);
        let lo = self.0[w] >> b;
        let hi = if b == 0 || w == 3 {
            0
        } else {
            self.0[w + 1] << (64 - b)
        };
        lo | hi
    }

    /// Highest member plus one, or 0 for the empty set.
    pub fn bound(&self) -> usize {
        for w in (0..4).rev() {
            if self.0[w] != 0 {
                return w * 64 + 64 - self.0[w].leading_zeros() as usize;
            }
        }
        0
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter {
        Iter {
            words: self.0,
            word: 0,
        }
    }
}

impl fmt::Debug for Bits256 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for Bits256 {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut out = Bits256::EMPTY;
        for i in iter {
            out.insert(i);
        }
        out
    }
}

pub struct Iter {
    words: [u64; 4],
    word: usize,
}

impl Iterator for Iter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        while self.word < 4 {
            let w = self.words[self.word];
            if w != 0 {
                let bit = w.trailing_zeros() as usize;
                self.words[self.word] &= w - 1;
                return Some(self.word * 64 + bit);
            }
            self.word += 1;
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    #[test]
    fn prefix_and_complement() {
        assert_eq!(Bits256::prefix(0), Bits256::EMPTY);
        assert_eq!(Bits256::prefix(256), Bits256::FULL);
        assert_eq!(Bits256::prefix(65).len(), 65);
        let s: Bits256 = [1usize, 3, 200].into_iter().collect();
        assert_eq!(s.complement_within(4).iter().collect::<Vec<_>>(), [0, 2]);
        assert_eq!(s.bound(), 201);
    }

    #[test]
    fn iter_is_ascending() {
        let s: Bits256 = [255usize, 0, 64, 63, 128].into_iter().collect();
        assert_eq!(s.iter().collect::<Vec<_>>(), [0, 63, 64, 128, 255]);
        assert_eq!(s.len(), 5);
    }
}
