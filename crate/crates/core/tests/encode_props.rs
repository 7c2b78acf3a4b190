// SPDX-License-Identifier: Apache-2.0
mod common;

use cama_core::encode::{
    apply_negation_opt, build_encoder_table, cluster_symbols, compile_class, compile_state,
    matched_symbols, select_scheme, AlphabetStats, Code, Codebook, Ratio, Scheme, SchemeKind,
};
use cama_core::SymbolClass;
use common::*;
use proptest::prelude::*;

/// A scheme together with an alphabet it can encode.
pub fn scheme_strategy() -> impl Strategy<Value = (Scheme, usize)> {
    prop_oneof![
        (2usize..=16).prop_map(|a| (Scheme::one_zero(a), a)),
        (4usize..=11).prop_flat_map(|l| {
            let cap = (choose(l, l / 2) as usize).min(256);
            (Just(Scheme::multi_zeros(l)), 2..=cap)
        }),
        (3usize..=12, 2usize..=6).prop_flat_map(|(lp, ls)| {
            let cap = (choose(lp, 2) as usize * ls).min(256);
            (Just(Scheme::two_zeros_prefix(lp, ls)), 2..=cap)
        }),
        (2usize..=16, 2usize..=16).prop_flat_map(|(lp, ls)| {
            let cap = (lp * ls).min(256);
            (Just(Scheme::one_zero_prefix(lp, ls)), 2..=cap)
        }),
    ]
}

fn class_in(a: usize) -> impl Strategy<Value = SymbolClass> {
    prop_oneof![
        proptest::collection::btree_set(0..a, 0..=a).prop_map(|s| SymbolClass::of(bits(s))),
        proptest::collection::btree_set(0..a, 0..=a).prop_map(|s| SymbolClass::negated(bits(s))),
        // contiguous ranges, common in real rule sets
        (0..a, 0..a).prop_map(|(x, y)| SymbolClass::of(bits(x.min(y)..=x.max(y)))),
    ]
}

/// Scheme, alphabet, clustering classes, and the class under test.
fn case() -> impl Strategy<Value = (Scheme, usize, Vec<SymbolClass>, SymbolClass)> {
    scheme_strategy().prop_flat_map(|(s, a)| {
        (
            Just(s),
            Just(a),
            proptest::collection::vec(class_in(a), 0..8),
            class_in(a),
        )
    })
}

fn book(scheme: &Scheme, a: usize, classes: &[SymbolClass]) -> Codebook {
    cluster_symbols(&AlphabetStats::from_classes(a, classes), scheme)
}

fn and_of(codes: impl IntoIterator<Item = Code>, len: usize) -> Code {
    codes
        .into_iter()
        .fold(Code::ones(len), |acc, c| acc.and(&c))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 2000, rng_seed: proptest::test_runner::RngSeed::Fixed(21), ..ProptestConfig::default() })]

    #[test]
    fn compiled_entries_match_exactly((scheme, a, classes, class) in case()) {
        let cb = book(&scheme, a, &classes);
        let eff = class.effective(a);
        let plain = compile_class(&cb, eff, false, 0);
        prop_assert_eq!(brute(&cb, &plain), eff);
        let inv = compile_class(&cb, eff.complement_within(a), true, 0);
        prop_assert_eq!(brute(&cb, &inv), eff);
        let best = compile_state(&cb, &class, 0);
        prop_assert_eq!(brute(&cb, &best), eff);
        prop_assert_eq!(matched_symbols(&cb, &best), eff);
    }

    #[test]
    fn entries_are_ands_of_the_codes_they_cover((scheme, a, classes, class) in case()) {
        let cb = book(&scheme, a, &classes);
        let eff = class.effective(a);
        prop_assume!(!eff.is_empty());
        let entries = compile_class(&cb, eff, false, 3);
        prop_assert!(entries.len() <= eff.len());
        for e in &entries {
            prop_assert_eq!(e.owner, 3);
            let covered: Vec<Code> = eff.iter().map(|s| cb.code(s)).filter(|c| e.code.bits() & !c.bits() == 0).collect();
            prop_assert!(!covered.is_empty());
            prop_assert_eq!(e.code, and_of(covered, scheme.code_len));
        }
    }

    #[test]
    fn negation_never_costs_entries((scheme, a, classes, class) in case()) {
        let cb = book(&scheme, a, &classes);
        let eff = class.effective(a);
        let with_no = compile_state(&cb, &class, 0).len();
        prop_assert!(with_no <= compile_class(&cb, eff, false, 0).len());
        prop_assert!(with_no <= compile_class(&cb, eff.complement_within(a), true, 0).len());
    }

    #[test]
    fn codebook_invariants((scheme, a, classes, _c) in case()) {
        let cb = book(&scheme, a, &classes);
        prop_assert_eq!(cb.codes.len(), a);
        let mut seen = std::collections::BTreeSet::new();
        for c in &cb.codes {
            prop_assert_eq!(c.len(), scheme.code_len);
            prop_assert_eq!(c.zero_count(), scheme.zeros_per_code);
            prop_assert!(seen.insert(*c));
            if scheme.kind.is_prefix() {
                let z = c.zero_mask();
                prop_assert_eq!((z & scheme.prefix_mask()).count_ones() as usize, scheme.kind.prefix_zeros());
                prop_assert_eq!((z & scheme.suffix_mask()).count_ones(), 1);
            }
        }
        if scheme.kind.is_prefix() {
            for k in 0..cb.cluster_count() {
                let members: Vec<usize> = (0..a).filter(|&s| cb.clusters[s] as usize == k).collect();
                prop_assert!(members.len() <= scheme.suffix_len);
                let prefixes: std::collections::BTreeSet<u32> = members.iter().map(|&s| cb.prefix_of(cb.code(s))).collect();
                prop_assert!(prefixes.len() <= 1);
            }
        }
        prop_assert_eq!(&cb, &book(&scheme, a, &classes));
    }

    #[test]
    fn encoder_table_round_trips((scheme, a, classes, _c) in case()) {
        let cb = book(&scheme, a, &classes);
        let t = build_encoder_table(&cb);
        prop_assert_eq!(t.width, scheme.code_len);
        for s in 0..a {
            prop_assert_eq!(t.lookup(s as u8).unwrap(), cb.code(s));
            prop_assert_eq!(t.rows[s] >> scheme.code_len.min(31) >> (scheme.code_len / 32), 0);
        }
    }
}

fn brute(cb: &Codebook, entries: &[cama_core::encode::CamEntry]) -> cama_core::Bits256 {
    let invert = entries[0].invert;
    (0..cb.alphabet_size)
        .filter(|&s| {
            entries
                .iter()
                .any(|e| e.code.bits() & !cb.code(s).bits() == 0)
                != invert
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 500, rng_seed: proptest::test_runner::RngSeed::Fixed(22), ..ProptestConfig::default() })]

    #[test]
    fn bits_above_the_code_never_matter(len in 1usize..=16, entry in any::<u16>(), garbage in any::<u16>()) {
        let m = (1u32 << len) - 1;
        let e = entry as u32 & m;
        for x in 0..=u16::MAX as u32 {
            let clean = x & m;
            let dirty = clean | ((garbage as u32) & !m & 0xFFFF);
            prop_assert_eq!(e & !clean == 0, e & !dirty & 0xFFFF == 0);
        }
    }

    #[test]
    fn negation_choice_is_the_smaller_side(members in proptest::collection::btree_set(0usize..256, 0..256), neg in any::<bool>()) {
        let class = if neg { SymbolClass::negated(bits(members)) } else { SymbolClass::of(bits(members)) };
        let eff = class.effective(256);
        let (chosen, inv) = apply_negation_opt(&class, 256);
        prop_assert!(chosen.len() <= eff.len());
        prop_assert!(chosen.len() <= 256 - eff.len());
        prop_assert_eq!(inv, eff.len() > 256 - eff.len());
        prop_assert_eq!(if inv { chosen.complement_within(256) } else { chosen }, eff);
    }

    #[test]
    fn scheme_selection_is_minimal(a in 1usize..=256, num in 1u64..=60_000, den in 1u64..=1000) {
        prop_assume!(num >= den);
        let avg = Ratio::new(num, den);
        match (select_scheme(a, avg, 16, 32), oracle_len(a, num, den)) {
            (Ok(s), Some(len)) => {
                prop_assert_eq!(s.code_len, len);
                prop_assert!(capacity_oracle(&s) >= a as u64);
            }
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "{got:?} vs {want:?}"),
        }
    }
}

fn capacity_oracle(s: &Scheme) -> u64 {
    match s.kind {
        SchemeKind::OneZero => s.code_len as u64,
        SchemeKind::MultiZeros => choose(s.code_len, s.code_len / 2),
        SchemeKind::TwoZerosPrefix => choose(s.prefix_len, 2) * s.suffix_len as u64,
        SchemeKind::OneZeroPrefix => (s.prefix_len * s.suffix_len) as u64,
    }
}

/// Brute-force reading of the selection rule over a (l_p, l_s) grid.
fn oracle_len(a: usize, num: u64, den: u64) -> Option<usize> {
    let len = if a <= 16 {
        a
    } else if num == den {
        (1..=64).find(|&l| choose(l, l / 2) >= a as u64).unwrap()
    } else {
        let side = (1..=16).find(|&r| r * r >= a).unwrap();
        let ls_min = (num.div_ceil(den) as usize).max(2);
        let ls_max = (1..=16).rev().find(|&r| r * r <= a).unwrap();
        let mut best = None::<usize>;
        for ls in ls_min..=ls_max {
            for lp in 2..=64 {
                if choose(lp, 2) * ls as u64 >= a as u64 {
                    best = Some(best.map_or(lp + ls, |b| b.min(lp + ls)));
                    break;
                }
            }
        }
        match best {
            Some(b) if b < 2 * side => b,
            _ => 2 * side,
        }
    };
    (len <= 32).then_some(len)
}
