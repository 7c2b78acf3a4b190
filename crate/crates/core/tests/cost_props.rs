// SPDX-License-Identifier: Apache-2.0
mod common;

use cama_core::cost::{
    area_of, breakdown, cost_report, energy_of_cycle, energy_parts, energy_parts_of_cycle,
    leakage_ua, power_of, CostParams,
};
use cama_core::sim::{run_e, run_t, ActivityTrace, CycleTrace, TileCycle, Version};
use common::*;
use proptest::prelude::*;

fn tile_cycle() -> impl Strategy<Value = TileCycle> {
    (0u16..=256, 0u16..=256, 0u16..=384, 0u16..=384, 0u16..=16).prop_map(|(a, b, r0, r1, g)| {
        TileCycle {
            enabled: [a, b],
            matches: a.min(b),
            active_rows: [r0, r1],
            switch_accessed: [r0 > 0, r1 > 0],
            global_sends: g,
        }
    })
}

fn cycle(tiles: usize) -> impl Strategy<Value = CycleTrace> {
    (
        proptest::collection::vec(tile_cycle(), tiles),
        any::<bool>(),
        0u32..10,
        0u16..4,
    )
        .prop_map(|(tiles, encoder, reports, global_accesses)| CycleTrace {
            tiles,
            encoder,
            reports,
            global_accesses,
        })
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 1000, rng_seed: proptest::test_runner::RngSeed::Fixed(61), ..ProptestConfig::default() })]

    #[test]
    fn cycle_energy_is_monotone(c in cycle(3), t in 0usize..3, s in 0usize..2, d in 1u16..40, v in prop_oneof![Just(Version::E), Just(Version::T)]) {
        let p = CostParams::default();
        let base = energy_parts_of_cycle(&c, v, &p).total();
        let mut more = c.clone();
        more.tiles[t].enabled[s] = (more.tiles[t].enabled[s] + d).min(256);
        prop_assert!(energy_parts_of_cycle(&more, v, &p).total() >= base);
        let mut rows = c.clone();
        rows.tiles[t].active_rows[s] = (rows.tiles[t].active_rows[s] + d).min(384);
        rows.tiles[t].switch_accessed[s] = true;
        prop_assert!(energy_parts_of_cycle(&rows, v, &p).total() >= base);
        let mut glob = c.clone();
        glob.global_accesses += 1;
        prop_assert!(close(energy_parts_of_cycle(&glob, v, &p).total(), base + 17.9));
        // full precharge never costs less than selective
        prop_assert!(energy_parts_of_cycle(&c, Version::E, &p).total() <= energy_parts_of_cycle(&c, Version::T, &p).total());
    }

    #[test]
    fn cycle_energy_matches_the_formula(c in cycle(2)) {
        let p = CostParams::default();
        let mut want = 0.0;
        for t in &c.tiles {
            for s in 0..2 {
                if t.enabled[s] > 0 {
                    want += 2.67 + (16.78 - 2.67) * t.enabled[s] as f64 / 256.0;
                }
                if t.switch_accessed[s] {
                    want += 8.67 * (0.8 + 0.2 * t.active_rows[s] as f64 / 384.0);
                }
            }
        }
        want += 17.9 * c.global_accesses as f64 + if c.encoder { 2.4 } else { 0.0 };
        prop_assert!(close(energy_parts_of_cycle(&c, Version::E, &p).total(), want));
    }

    #[test]
    fn dynamic_power_is_intensive(cs in proptest::collection::vec(cycle(2), 1..20), k in 2usize..5) {
        let pl = two_tiles();
        let p = CostParams::default();
        let one = ActivityTrace { version: Version::E, symbols: cs.len(), cycles: cs.clone(), input_interrupts: 0, output_interrupts: 0 };
        let many = ActivityTrace { symbols: cs.len() * k, cycles: (0..k).flat_map(|_| cs.iter().cloned()).collect(), ..one.clone() };
        let a = power_of(&one, pl, Version::E, &p).unwrap();
        let b = power_of(&many, pl, Version::E, &p).unwrap();
        prop_assert!(close(a.dynamic_w, b.dynamic_w));
        prop_assert_eq!(a.leakage_w, b.leakage_w);
        let parts = energy_parts(&one, pl, &p).unwrap();
        let sh = breakdown(&parts);
        if parts.total() > 0.0 {
            prop_assert!(close(sh.state_matching + sh.interconnect + sh.encoder, 1.0));
        }
        let sum: f64 = one.cycles.iter().map(|c| energy_of_cycle(c, pl, Version::E, &p).unwrap()).sum();
        prop_assert!(close(sum, parts.total() * 1e-12));
    }

    #[test]
    fn selective_precharge_saves_energy((spec, input) in nfa_strategy(120).prop_flat_map(|s| { let a = s.alphabet; (Just(s), input_strategy(a, 200)) })) {
        let nfa = spec.build();
        let c = compile(&nfa);
        let Ok(pl) = map(&nfa, &c, None) else { return Ok(()) };
        let p = CostParams::default();
        let (_, te) = run_e(&pl, &input).unwrap();
        let (_, tt) = run_t(&pl, &input).unwrap();
        let e = energy_parts(&te, &pl, &p).unwrap();
        let t = energy_parts(&tt, &pl, &p).unwrap();
        prop_assert!(close(e.interconnect, t.interconnect));
        prop_assert!(close(e.encoder, t.encoder));
        prop_assert!(e.state_matching <= t.state_matching + 1e-9);
        let partial = !input.is_empty() && pl.tiles.iter().any(|t| t.placed_per_sub_array().iter().any(|&n| n > 0 && n < 256))
            || te.cycles.iter().zip(&tt.cycles).any(|(a, b)| a.tiles.iter().zip(&b.tiles).any(|(x, y)| x.enabled != y.enabled));
        if partial {
            prop_assert!(e.state_matching < t.state_matching);
        }
        let r = cost_report(&te, &pl, &p).unwrap();
        if !input.is_empty() {
            prop_assert!(close(r.energy_per_symbol_nj, r.total_energy_j * 1e9 / input.len() as f64));
        }
        prop_assert!(close(r.throughput_gbps, 1.21 * 8.0));
        prop_assert!(close(r.area_um2, pl.tiles.len() as f64 * 19148.0 + pl.globals.len() as f64 * 18153.0 + 3659.0 * 0.125));
        prop_assert!(close(leakage_ua(&pl, &p), pl.tiles.len() as f64 * (2.0 * 299.0 + 2.0 * 243.0) + pl.globals.len() as f64 * 584.0 + 247.0 * 0.125));
    }
}

/// A 600-state chain spans two Rcb16 tiles.
fn two_tiles() -> &'static cama_core::mapper::Placement {
    static P: std::sync::OnceLock<cama_core::mapper::Placement> = std::sync::OnceLock::new();
    P.get_or_init(|| {
        let nfa = chain(600);
        let pl = map(
            &nfa,
            &compile(&nfa),
            Some(cama_core::fabric::TileMode::Rcb16),
        )
        .unwrap();
        assert_eq!(pl.tiles.len(), 2);
        pl
    })
}

fn chain(n: usize) -> cama_core::HomogeneousNfa {
    let spec = NfaSpec {
        alphabet: 256,
        classes: (0..n)
            .map(|i| cama_core::SymbolClass::single((i % 256) as u8))
            .collect(),
        starts: (0..n)
            .map(|i| {
                if i == 0 {
                    cama_core::StartKind::AllInput
                } else {
                    cama_core::StartKind::None
                }
            })
            .collect(),
        reporting: (0..n).map(|i| i + 1 == n).collect(),
        edges: (1..n).map(|i| (i - 1, i)).collect(),
    };
    spec.build()
}

#[test]
fn idle_run_draws_only_leakage() {
    let nfa = chain(10);
    let pl = map(&nfa, &compile(&nfa), None).unwrap();
    let p = CostParams::default();
    let idle = ActivityTrace {
        version: Version::T,
        symbols: 50,
        cycles: vec![
            CycleTrace {
                tiles: vec![TileCycle::default(); pl.tiles.len()],
                encoder: false,
                reports: 0,
                global_accesses: 0
            };
            50
        ],
        input_interrupts: 1,
        output_interrupts: 0,
    };
    let pw = power_of(&idle, &pl, Version::T, &p).unwrap();
    assert_eq!(pw.dynamic_w, 0.0);
    assert_eq!(pw.total_w, pw.leakage_w);
    assert!(close(pw.leakage_w, leakage_ua(&pl, &p) * 1e-6 * 0.9));
    assert!(close(area_of(&pl, &p), 19148.0 + 18153.0 + 457.375));
    let r = cost_report(&idle, &pl, &p).unwrap();
    assert_eq!(r.breakdown.total(), 0.0);
    assert!(close(r.throughput_gbps, 2.14 * 8.0));
}

#[test]
fn mismatched_trace_is_rejected() {
    let nfa = chain(10);
    let pl = map(&nfa, &compile(&nfa), None).unwrap();
    let bad = CycleTrace {
        tiles: vec![TileCycle::default(); pl.tiles.len() + 1],
        encoder: true,
        reports: 0,
        global_accesses: 0,
    };
    assert!(energy_of_cycle(&bad, &pl, Version::E, &CostParams::default()).is_err());
}
