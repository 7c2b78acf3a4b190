// SPDX-License-Identifier: Apache-2.0
mod common;

use std::collections::BTreeSet;

use cama_core::automata::{connected_components, StartKind, SymbolClass};
use cama_core::fabric::TileMode;
use cama_core::mapper::{emit_report_mask, MapError, Placement};
use cama_core::HomogeneousNfa;
use common::*;
use proptest::prelude::*;

fn mode() -> impl Strategy<Value = Option<TileMode>> {
    prop_oneof![
        2 => Just(None),
        1 => Just(Some(TileMode::Rcb16)),
        1 => Just(Some(TileMode::Fcb16)),
        1 => Just(Some(TileMode::Mode32)),
    ]
}

/// Column of switch-local index `i` on switch `k` of a tile.
fn column(mode: TileMode, k: usize, i: usize) -> usize {
    match mode {
        TileMode::Rcb16 => k * 256 + i,
        _ => i,
    }
}

/// Edges the programmed hardware realizes, pulled back to states.
fn realized(p: &Placement) -> BTreeSet<(usize, usize)> {
    let mut out = BTreeSet::new();
    for t in &p.tiles {
        let st = |c: usize| t.columns[c].expect("switch touches an empty column").state;
        for (k, sw) in t.switches.iter().enumerate() {
            for (i, j) in sw.pairs() {
                out.insert((st(column(t.mode, k, i)), st(column(t.mode, k, j))));
            }
        }
    }
    for (a, g) in p.globals.iter().enumerate() {
        let tile_at = |slot: usize| {
            p.tiles
                .iter()
                .find(|t| t.array == a && t.slot == slot)
                .unwrap()
        };
        for ((st, sp), (dt, dp)) in g.pairs() {
            out.insert((
                tile_at(st).send_ports[sp].state,
                tile_at(dt).recv_ports[dp].state,
            ));
        }
    }
    out
}

fn edges(nfa: &HomogeneousNfa) -> BTreeSet<(usize, usize)> {
    (0..nfa.len())
        .flat_map(|u| nfa.successors(u).iter().map(move |&v| (u, v)))
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 400, rng_seed: proptest::test_runner::RngSeed::Fixed(41), ..ProptestConfig::default() })]

    #[test]
    fn placement_realizes_exactly_the_edges(spec in nfa_strategy(300), m in mode()) {
        let nfa = spec.build();
        let c = compile(&nfa);
        let p = match map(&nfa, &c, m) {
            Ok(p) => p,
            Err(MapError::ForcedModeInvalid { .. } | MapError::PortOverflow { .. }) => return Ok(()),
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        };
        prop_assert_eq!(realized(&p), edges(&nfa));

        // every state owns exactly its entries, contiguously, in one tile
        prop_assert_eq!(p.locations.len(), nfa.len());
        for (s, loc) in p.locations.iter().enumerate() {
            prop_assert_eq!(loc.len, c.entries_of(s).len());
            let t = &p.tiles[loc.tile];
            for (k, e) in c.entries_of(s).iter().enumerate() {
                let col = t.columns[loc.start + k].unwrap();
                prop_assert_eq!(col.state, s);
                prop_assert_eq!(col.code, e.code);
            }
            let seg = t.mode.segment_width();
            prop_assert_eq!(loc.start / seg, (loc.start + loc.len - 1) / seg);
        }
        let placed: usize = p.tiles.iter().map(|t| t.placed().len()).sum();
        prop_assert_eq!(placed, c.total_entries());
        prop_assert_eq!(p.stats.columns, placed);
    }

    #[test]
    fn capacity_and_ports_hold(spec in nfa_strategy(300), m in mode()) {
        let nfa = spec.build();
        let c = compile(&nfa);
        let Ok(p) = map(&nfa, &c, m) else { return Ok(()) };
        for t in &p.tiles {
            prop_assert_eq!(t.columns.len(), t.mode.columns());
            prop_assert!(t.send_ports.len() <= 16 && t.recv_ports.len() <= 16);
            prop_assert!(t.slot < 8);
            if p.scheme.code_len > 16 {
                prop_assert_eq!(t.mode, TileMode::Mode32);
            }
        }
        for a in 0..p.stats.arrays {
            prop_assert!(p.tiles_of_array(a).count() <= 8);
        }
        prop_assert_eq!(p.stats.tiles(), p.tiles.len());
        prop_assert_eq!(p.globals.len(), p.stats.arrays);
        let mut partitions: Vec<u32> = p.ccs.iter().map(|cc| cc.partition).collect();
        partitions.dedup();
        prop_assert_eq!(partitions.len(), connected_components(&nfa).len());
    }

    #[test]
    fn placement_is_deterministic(spec in nfa_strategy(200), m in mode()) {
        let nfa = spec.build();
        let c = compile(&nfa);
        prop_assert_eq!(map(&nfa, &c, m), map(&nfa, &c, m));
    }

    #[test]
    fn report_mask_covers_reporting_replicas(spec in nfa_strategy(200)) {
        let nfa = spec.build();
        let c = compile(&nfa);
        let Ok(p) = map(&nfa, &c, None) else { return Ok(()) };
        let masks = emit_report_mask(&nfa, &p);
        let want = (0..nfa.len()).filter(|&s| nfa.state(s).reporting).count();
        prop_assert_eq!(masks.iter().map(|m| m.len()).sum::<usize>(), want);
        for (t, m) in p.tiles.iter().zip(&masks) {
            for col in m.iter() {
                prop_assert!(nfa.state(t.columns[col].unwrap().state).reporting);
            }
        }
        for (t, m) in p.tiles.iter().zip(&masks) {
            prop_assert_eq!(&t.report_mask, m);
        }
    }

    #[test]
    fn appending_a_small_component_keeps_the_rest(spec in nfa_strategy(200)) {
        let nfa = spec.build();
        let c = compile(&nfa);
        let Ok(before) = map(&nfa, &c, None) else { return Ok(()) };
        let mut grown = spec.clone();
        grown.classes.push(SymbolClass::single(0));
        grown.starts.push(StartKind::AllInput);
        grown.reporting.push(true);
        let nfa2 = grown.build();
        let c2 = compile(&nfa2);
        // Only comparable when the encoding is unchanged and every state is
        // at least as wide as the new one.
        prop_assume!(c2.codebook == c.codebook && c2.entries[..nfa.len()] == c.entries[..]);
        let after = map(&nfa2, &c2, None).unwrap();
        prop_assert!(after.stats.tiles() >= before.stats.tiles());
        prop_assert_eq!(&after.locations[..nfa.len()], &before.locations[..]);
    }
}
