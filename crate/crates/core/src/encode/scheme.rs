// SPDX-License-Identifier: Apache-2.0
//! Encoding-scheme selection.

use super::{EncodeError, Ratio, Scheme};

/// `n choose k`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

pub fn isqrt(n: usize) -> usize {
    let mut r = 0usize;
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

pub fn ceil_sqrt(n: usize) -> usize {
    let r = isqrt(n);
    if r * r < n {
        r + 1
    } else {
        r
    }
}

/// Shortest prefix with two zeros such that `C(l_p, 2) · suffix_len ≥ alphabet`.
fn two_zero_prefix_len(alphabet: usize, suffix_len: usize) -> usize {
    let mut lp = 2;
    while binomial(lp, 2) * (suffix_len as u64) < alphabet as u64 {
        lp += 1;
    }
    lp
}

/// Chooses the encoding for an alphabet of `alphabet` symbols whose average
/// (negation-optimized) class size is `avg_class`.
///
/// * `alphabet ≤ cam_rows`: One-Zero, ℒ = 𝒜.
/// * `avg_class == 1`: Multi-Zeros with the least ℒ such that
///   `C(ℒ, ⌊ℒ/2⌋) ≥ 𝒜`.
/// * otherwise sweep the suffix length over `max(2, ⌈𝒮⌉) ..= ⌊√𝒜⌋`; the
///   shortest Two-Zeros-Prefix code wins if it beats `2⌈√𝒜⌉`, else
///   One-Zero-Prefix with a `⌈√𝒜⌉`-bit prefix and suffix.
pub fn select_scheme(
    alphabet: usize,
    avg_class: Ratio,
    cam_rows: usize,
    max_len: usize,
) -> Result<Scheme, EncodeError> {
    if alphabet == 0 || alphabet > crate::automata::MAX_ALPHABET {
        return Err(EncodeError::BadAlphabet(alphabet));
    }
    let scheme = if alphabet <= cam_rows {
        Scheme::one_zero(alphabet)
    } else if avg_class.is_one() {
        let mut len = 1;
        while binomial(len, len / 2) < alphabet as u64 {
            len += 1;
        }
        Scheme::multi_zeros(len)
    } else {
        let lo = (avg_class.ceil() as usize).max(2);
        let hi = isqrt(alphabet);
        let best = (lo..=hi)
            .map(|ls| (ls + two_zero_prefix_len(alphabet, ls), ls))
            .min();
        let side = ceil_sqrt(alphabet);
        match best {
            Some((len, ls)) if len < 2 * side => Scheme::two_zeros_prefix(len - ls, ls),
            _ => Scheme::one_zero_prefix(side, side),
        }
    };
    if scheme.code_len > max_len {
        return Err(EncodeError::Unmappable {
            alphabet,
            needed: scheme.code_len,
            max: max_len,
        });
    }
    Ok(scheme)
}

#[cfg(test)]
mod tests {
    use super::super::SchemeKind;
    use super::*;

    fn pick(a: usize, num: u64, den: u64) -> Scheme {
        select_scheme(a, Ratio::new(num, den), 16, 32).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(10, 5), 252);
        assert_eq!(binomial(11, 5), 462);
        assert_eq!(binomial(11, 2), 55);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(200, 100), u64::MAX);
    }

    #[test]
    fn sqrt_helpers() {
        assert_eq!(isqrt(255), 15);
        assert_eq!(isqrt(256), 16);
        assert_eq!(ceil_sqrt(115), 11);
        assert_eq!(ceil_sqrt(256), 16);
    }

    #[test]
    fn worked_example() {
        let s = pick(256, 5, 1);
        assert_eq!(s.kind, SchemeKind::TwoZerosPrefix);
        assert_eq!(s.code_len, 16);
        assert_eq!((s.prefix_len, s.suffix_len), (11, 5));
    }

    #[test]
    fn branch_selection() {
        assert_eq!(pick(256, 1, 1), Scheme::multi_zeros(11));
        assert_eq!(pick(2, 1, 1), Scheme::one_zero(2));
        assert_eq!(pick(256, 5155, 100), Scheme::one_zero_prefix(16, 16));
        assert_eq!(pick(115, 129, 100).code_len, 13);
        assert_eq!(pick(107, 121, 100).code_len, 12);
        assert_eq!(pick(256, 1006, 1000).code_len, 16);
    }

    #[test]
    fn unmappable() {
        let err = select_scheme(256, Ratio::new(5155, 100), 16, 16).unwrap_err();
        assert!(matches!(err, EncodeError::Unmappable { needed: 32, .. }));
        assert!(select_scheme(0, Ratio::integer(1), 16, 32).is_err());
    }
}
