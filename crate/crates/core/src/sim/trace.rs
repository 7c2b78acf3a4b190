// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;

use super::{Buffers, Version};

/// Activity of one tile in one cycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TileCycle {
    /// Precharged entries per sub-array.
    pub enabled: [u16; 2],
    /// Raw column matches.
    pub matches: u16,
    /// Active rows per local switch.
    pub active_rows: [u16; 2],
    pub switch_accessed: [bool; 2],
    pub global_sends: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CycleTrace {
    pub tiles: Vec<TileCycle>,
    pub encoder: bool,
    pub reports: u32,
    /// Arrays whose global switch was read.
    pub global_accesses: u16,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ActivityTrace {
    pub version: Version,
    pub symbols: usize,
    pub cycles: Vec<CycleTrace>,
    pub input_interrupts: u64,
    pub output_interrupts: u64,
}

impl ActivityTrace {
    pub(super) fn new(
        version: Version,
        symbols: usize,
        cycles: Vec<CycleTrace>,
        b: &Buffers,
    ) -> Self {
        ActivityTrace {
            version,
            symbols,
            cycles,
            input_interrupts: b.input_interrupts,
            output_interrupts: b.output_interrupts,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TraceSummary {
    pub cycles: u64,
    pub symbols: u64,
    pub enabled_entries: u64,
    pub matches: u64,
    pub active_rows: u64,
    pub switch_accesses: u64,
    pub global_accesses: u64,
    pub global_sends: u64,
    pub reports: u64,
    pub avg_enabled_entries: f64,
    pub avg_active_rows: f64,
    pub avg_global_accesses: f64,
    pub reports_per_cycle: f64,
}

pub fn trace_summary(trace: &ActivityTrace) -> TraceSummary {
    let mut s = TraceSummary {
        cycles: trace.cycles.len() as u64,
        symbols: trace.symbols as u64,
        ..TraceSummary::default()
    };
    for c in &trace.cycles {
        s.reports += c.reports as u64;
        s.global_accesses += c.global_accesses as u64;
        for t in &c.tiles {
            s.enabled_entries += t.enabled.iter().map(|&n| n as u64).sum::<u64>();
            s.matches += t.matches as u64;
            s.active_rows += t.active_rows.iter().map(|&n| n as u64).sum::<u64>();
            s.switch_accesses += t.switch_accessed.iter().filter(|&&a| a).count() as u64;
            s.global_sends += t.global_sends as u64;
        }
    }
    if s.cycles > 0 {
        let n = s.cycles as f64;
        s.avg_enabled_entries = s.enabled_entries as f64 / n;
        s.avg_active_rows = s.active_rows as f64 / n;
        s.avg_global_accesses = s.global_accesses as f64 / n;
        s.reports_per_cycle = s.reports as f64 / n;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idle_trace_is_zero() {
        let t = ActivityTrace {
            version: Version::E,
            symbols: 3,
            cycles: alloc::vec![
                CycleTrace {
                    tiles: alloc::vec![TileCycle::default(); 2],
                    encoder: true,
                    reports: 0,
                    global_accesses: 0,
                };
                3
            ],
            input_interrupts: 1,
            output_interrupts: 0,
        };
        let s = trace_summary(&t);
        assert_eq!(s.cycles, 3);
        assert_eq!(
            s.enabled_entries + s.active_rows + s.reports + s.global_accesses,
            0
        );
        assert_eq!(s.reports_per_cycle, 0.0);
    }
}
