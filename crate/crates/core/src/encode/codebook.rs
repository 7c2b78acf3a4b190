// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;

use super::{AlphabetStats, Code, EncodeError, Scheme, SchemeKind};

/// The first `count` zero patterns of `n` bits with exactly `k` zeros, in
/// lexicographic order of their zero-position tuples. Each pattern is a mask
/// of the zero positions.
pub fn zero_patterns(n: usize, k: usize, count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    if k > n {
        return out;
    }
    let mut pos: Vec<usize> = (0..k).collect();
    while out.len() < count {
        out.push(pos.iter().fold(0u32, |m, &p| m | 1 << p));
        // advance to the next combination
        let Some(i) = (0..k).rev().find(|&i| pos[i] < n - k + i) else {
            break;
        };
        pos[i] += 1;
        for j in i + 1..k {
            pos[j] = pos[j - 1] + 1;
        }
        if k == 0 {
            break;
        }
    }
    out
}

/// Per-symbol codes plus, for prefix schemes, the cluster of each symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Codebook {
    pub scheme: Scheme,
    pub alphabet_size: usize,
    pub codes: Vec<Code>,
    /// Cluster index per symbol; empty for non-prefix schemes.
    pub clusters: Vec<u16>,
}

impl Codebook {
    pub fn code(&self, symbol: usize) -> Code {
        self.codes[symbol]
    }

    pub fn cluster_count(&self) -> usize {
        self.clusters
            .iter()
            .map(|&c| c as usize + 1)
            .max()
            .unwrap_or(0)
    }

    /// Code positions belonging to the prefix field.
    pub fn prefix_of(&self, code: Code) -> u32 {
        code.zero_mask() & self.scheme.prefix_mask()
    }
}

/// Assigns codes. Prefix schemes group symbols greedily into clusters of
/// `suffix_len` symbols: seed with the most frequent undistributed symbol,
/// then repeatedly add the symbol with the highest co-occurrence sum against
/// the cluster (ties: higher frequency, then lower symbol).
pub fn cluster_symbols(stats: &AlphabetStats, scheme: &Scheme) -> Codebook {
    let a = stats.alphabet_size;
    let len = scheme.code_len;
    match scheme.kind {
        SchemeKind::OneZero | SchemeKind::MultiZeros => Codebook {
            scheme: *scheme,
            alphabet_size: a,
            codes: zero_patterns(len, scheme.zeros_per_code, a)
                .into_iter()
                .map(|z| Code::with_zeros(z, len))
                .collect(),
            clusters: Vec::new(),
        },
        SchemeKind::TwoZerosPrefix | SchemeKind::OneZeroPrefix => {
            let ls = scheme.suffix_len;
            let n_clusters = a.div_ceil(ls);
            let prefixes = zero_patterns(scheme.prefix_len, scheme.kind.prefix_zeros(), n_clusters);
            assert_eq!(prefixes.len(), n_clusters, "scheme too small for alphabet");
            let mut codes = alloc::vec![Code::ones(len); a];
            let mut clusters = alloc::vec![0u16; a];
            let mut placed = alloc::vec![false; a];
            let mut score = alloc::vec![0u64; a];
            let mut remaining = a;
            for (k, &prefix) in prefixes.iter().enumerate() {
                score.iter_mut().for_each(|s| *s = 0);
                let mut slot = 0;
                while slot < ls && remaining > 0 {
                    // the seed has all scores zero, so the freq tie-break picks it
                    let x = (0..a)
                        .filter(|&x| !placed[x])
                        .max_by(|&x, &y| {
                            (score[x], stats.freq[x])
                                .cmp(&(score[y], stats.freq[y]))
                                .then(y.cmp(&x))
                        })
                        .unwrap();
                    placed[x] = true;
                    remaining -= 1;
                    clusters[x] = k as u16;
                    codes[x] = Code::with_zeros(prefix | 1 << (scheme.prefix_len + slot), len);
                    for (y, s) in score.iter_mut().enumerate() {
                        *s += stats.cooccur(y, x);
                    }
                    slot += 1;
                }
            }
            Codebook {
                scheme: *scheme,
                alphabet_size: a,
                codes,
                clusters,
            }
        }
    }
}

pub fn encode_symbol(codebook: &Codebook, symbol: usize) -> Result<Code, EncodeError> {
    codebook
        .codes
        .get(symbol)
        .copied()
        .ok_or(EncodeError::UnknownSymbol {
            symbol,
            alphabet: codebook.alphabet_size,
        })
}
