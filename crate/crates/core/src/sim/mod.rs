// SPDX-License-Identifier: Apache-2.0
//! Cycle-accurate functional execution of a placement.
//!
//! Both versions consume one symbol per cycle and stamp reports with the
//! consumed-symbol index, so their report streams are identical. CAMA-E
//! precharges only enabled columns and matches, reports and routes in one
//! cycle. CAMA-T precharges every placed column, latches the match vector,
//! and ANDs it with the enabled vector one cycle later; its trace therefore
//! has one extra drain row.

mod trace;

pub use trace::{trace_summary, ActivityTrace, CycleTrace, TileCycle, TraceSummary};

use alloc::vec::Vec;

use crate::automata::{interpret, HomogeneousNfa, InterpretError, ReportRecord, StateId};
use crate::fabric::{rcb_row_load, route_global, tile_match, TileMode, TileVec};
use crate::mapper::Placement;

pub const INPUT_BUFFER: usize = 128;
pub const OUTPUT_BUFFER: usize = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Version {
    E,
    T,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SimError {
    #[error("symbol {symbol} at index {index} is outside the alphabet of {alphabet}")]
    SymbolOutOfRange {
        index: usize,
        symbol: u8,
        alphabet: usize,
    },
}

/// Host-interface buffers. Refills and flushes are free; only the
/// interrupt counts are kept.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Buffers {
    pub input_occupancy: usize,
    pub output_occupancy: usize,
    pub input_interrupts: u64,
    pub output_interrupts: u64,
}

impl Buffers {
    fn consume(&mut self, remaining: usize) {
        if self.input_occupancy == 0 {
            self.input_interrupts += 1;
            self.input_occupancy = remaining.min(INPUT_BUFFER);
        }
        self.input_occupancy -= 1;
    }

    fn push_report(&mut self) {
        self.output_occupancy += 1;
        if self.output_occupancy == OUTPUT_BUFFER {
            self.output_interrupts += 1;
            self.output_occupancy = 0;
        }
    }

    fn finish(&mut self) {
        if self.output_occupancy > 0 {
            self.output_interrupts += 1;
            self.output_occupancy = 0;
        }
    }
}

/// Per-column registers of the whole fabric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MachineState {
    pub enabled: Vec<TileVec>,
    pub match_reg: Vec<TileVec>,
    pub cycle: u64,
    pub buffers: Buffers,
}

impl MachineState {
    pub fn initial(p: &Placement) -> Self {
        MachineState {
            enabled: p
                .tiles
                .iter()
                .map(|t| t.start_of_data.union(&t.all_input))
                .collect(),
            match_reg: alloc::vec![TileVec::EMPTY; p.tiles.len()],
            cycle: 0,
            buffers: Buffers::default(),
        }
    }
}

struct Ctx<'a> {
    p: &'a Placement,
    row_load: Vec<u16>,
    placed: Vec<TileVec>,
    placed_counts: Vec<[usize; 2]>,
    /// Tile index by (array, slot).
    by_slot: Vec<Vec<Option<usize>>>,
}

impl<'a> Ctx<'a> {
    fn new(p: &'a Placement) -> Self {
        let mut by_slot = alloc::vec![alloc::vec![None; p.config.tiles_per_array]; p.globals.len()];
        for (i, t) in p.tiles.iter().enumerate() {
            by_slot[t.array][t.slot] = Some(i);
        }
        Ctx {
            p,
            row_load: (0..256)
                .map(|i| rcb_row_load(i, &p.config) as u16)
                .collect(),
            placed: p.tiles.iter().map(|t| t.placed()).collect(),
            placed_counts: p.tiles.iter().map(|t| t.placed_per_sub_array()).collect(),
            by_slot,
        }
    }

    fn check(&self, input: &[u8]) -> Result<(), SimError> {
        let a = self.p.encoder.alphabet_size();
        match input.iter().position(|&s| s as usize >= a) {
            Some(index) => Err(SimError::SymbolOutOfRange {
                index,
                symbol: input[index],
                alphabet: a,
            }),
            None => Ok(()),
        }
    }

    fn code(&self, symbol: u8) -> u32 {
        self.p.encoder.rows[symbol as usize]
    }

    fn enabled_counts(&self, t: usize, en: &TileVec) -> [u16; 2] {
        let tile = &self.p.tiles[t];
        let n = en.intersection(&self.placed[t]);
        match tile.mode {
            TileMode::Rcb16 => [n.0[0].len() as u16, n.0[1].len() as u16],
            TileMode::Fcb16 => [n.len() as u16, 0],
            TileMode::Mode32 => [n.len() as u16; 2],
        }
    }

    /// Reports, local routing and global routing for one consumed symbol.
    /// Fills the transition-side fields of `row` and returns the next
    /// enabled vectors.
    fn transition(
        &self,
        active: &[TileVec],
        index: usize,
        symbol: u8,
        reports: &mut Vec<ReportRecord>,
        buffers: &mut Buffers,
        row: &mut CycleTrace,
    ) -> Vec<TileVec> {
        let start = reports.len();
        for (t, tile) in self.p.tiles.iter().enumerate() {
            for c in active[t].intersection(&tile.report_mask).iter() {
                let e = tile.columns[c].expect("report column is placed");
                reports.push(ReportRecord {
                    cycle: index as u64,
                    state: e.state,
                    partition: e.partition,
                    symbol,
                });
            }
        }
        reports[start..].sort_unstable();
        for _ in start..reports.len() {
            buffers.push_report();
        }
        row.reports = (reports.len() - start) as u32;

        let mut next: Vec<TileVec> = Vec::with_capacity(self.p.tiles.len());
        let mut exported = alloc::vec![0u16; self.p.tiles.len()];
        for (t, tile) in self.p.tiles.iter().enumerate() {
            let a = &active[t];
            let tc = &mut row.tiles[t];
            match tile.mode {
                TileMode::Rcb16 => {
                    for s in 0..2 {
                        let rows: u16 = a.0[s].iter().map(|c| self.row_load[c]).sum();
                        tc.active_rows[s] = rows;
                        tc.switch_accessed[s] = rows > 0;
                    }
                }
                _ => {
                    for s in 0..2 {
                        let rows = a.count_range(s * 128, s * 128 + 128) as u16;
                        tc.active_rows[s] = rows;
                        tc.switch_accessed[s] = rows > 0;
                    }
                }
            }
            exported[t] = tile.exported(a);
            tc.global_sends = exported[t].count_ones() as u16;
            next.push(tile.route(a).union(&tile.all_input));
        }
        for (array, g) in self.p.globals.iter().enumerate() {
            let slots = &self.by_slot[array];
            let ex: Vec<u16> = slots.iter().map(|t| t.map_or(0, |t| exported[t])).collect();
            if ex.iter().all(|&b| b == 0) {
                continue;
            }
            row.global_accesses += 1;
            for (slot, bits) in route_global(g, &ex).into_iter().enumerate() {
                if let (Some(t), true) = (slots[slot], bits != 0) {
                    next[t] = next[t].union(&self.p.tiles[t].imported(bits));
                }
            }
        }
        next
    }
}

fn new_row(tiles: usize) -> CycleTrace {
    CycleTrace {
        tiles: alloc::vec![TileCycle::default(); tiles],
        encoder: false,
        reports: 0,
        global_accesses: 0,
    }
}

/// Non-pipelined execution with selective precharge.
pub fn run_e(p: &Placement, input: &[u8]) -> Result<(Vec<ReportRecord>, ActivityTrace), SimError> {
    let ctx = Ctx::new(p);
    ctx.check(input)?;
    let mut st = MachineState::initial(p);
    let mut reports = Vec::new();
    let mut cycles = Vec::with_capacity(input.len());
    for (i, &sym) in input.iter().enumerate() {
        st.buffers.consume(input.len() - i);
        let mut row = new_row(p.tiles.len());
        row.encoder = true;
        let code = ctx.code(sym);
        let mut active = Vec::with_capacity(p.tiles.len());
        for (t, tile) in p.tiles.iter().enumerate() {
            let en = &st.enabled[t];
            let raw = tile_match(tile, code, en);
            row.tiles[t].enabled = ctx.enabled_counts(t, en);
            row.tiles[t].matches = raw.len() as u16;
            active.push(tile.state_active(&raw, en));
        }
        st.enabled = ctx.transition(&active, i, sym, &mut reports, &mut st.buffers, &mut row);
        st.cycle += 1;
        cycles.push(row);
    }
    st.buffers.finish();
    Ok((
        reports,
        ActivityTrace::new(Version::E, input.len(), cycles, &st.buffers),
    ))
}

/// Two-stage pipelined execution with full precharge.
pub fn run_t(p: &Placement, input: &[u8]) -> Result<(Vec<ReportRecord>, ActivityTrace), SimError> {
    let ctx = Ctx::new(p);
    ctx.check(input)?;
    let mut st = MachineState::initial(p);
    let mut reports = Vec::new();
    let rows = if input.is_empty() { 0 } else { input.len() + 1 };
    let mut cycles = Vec::with_capacity(rows);
    for k in 0..rows {
        let mut row = new_row(p.tiles.len());
        // stage 2 for symbol k-1 reads the latch written in the previous row
        if k >= 1 {
            let active: Vec<TileVec> = p
                .tiles
                .iter()
                .enumerate()
                .map(|(t, tile)| tile.state_active(&st.match_reg[t], &st.enabled[t]))
                .collect();
            st.enabled = ctx.transition(
                &active,
                k - 1,
                input[k - 1],
                &mut reports,
                &mut st.buffers,
                &mut row,
            );
        }
        if k < input.len() {
            st.buffers.consume(input.len() - k);
            row.encoder = true;
            let code = ctx.code(input[k]);
            for (t, tile) in p.tiles.iter().enumerate() {
                let raw = tile_match(tile, code, &ctx.placed[t]);
                let [a, b] = ctx.placed_counts[t];
                row.tiles[t].enabled = [a as u16, b as u16];
                row.tiles[t].matches = raw.len() as u16;
                st.match_reg[t] = raw;
            }
        }
        st.cycle += 1;
        cycles.push(row);
    }
    st.buffers.finish();
    Ok((
        reports,
        ActivityTrace::new(Version::T, input.len(), cycles, &st.buffers),
    ))
}

pub fn run(
    p: &Placement,
    input: &[u8],
    version: Version,
) -> Result<(Vec<ReportRecord>, ActivityTrace), SimError> {
    match version {
        Version::E => run_e(p, input),
        Version::T => run_t(p, input),
    }
}

/// `(cycle, state, symbol)`: the part of a report that is independent of
/// partition numbering.
pub type ReportKey = (u64, StateId, u8);

fn keys(r: &[ReportRecord]) -> Vec<ReportKey> {
    let mut k: Vec<ReportKey> = r.iter().map(|r| (r.cycle, r.state, r.symbol)).collect();
    k.sort_unstable();
    k
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Divergence {
    pub version: Version,
    /// Index of the first differing key in sorted order.
    pub position: usize,
    pub expected: Option<ReportKey>,
    pub actual: Option<ReportKey>,
    pub expected_total: usize,
    pub actual_total: usize,
}

impl core::fmt::Display for Divergence {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(
            f,
            "CAMA-{:?} diverges at report #{}: expected {:?}, got {:?} ({} expected, {} produced)",
            self.version,
            self.position,
            self.expected,
            self.actual,
            self.expected_total,
            self.actual_total
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CompareError {
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Interpret(#[from] InterpretError),
    #[error("{0}")]
    Divergence(Divergence),
}

/// Multiset comparison of the interpreter against both versions.
pub fn run_oracle_compare(
    nfa: &HomogeneousNfa,
    p: &Placement,
    input: &[u8],
) -> Result<usize, CompareError> {
    let expected = keys(&interpret(nfa, input)?);
    for v in [Version::E, Version::T] {
        let (r, _) = run(p, input, v)?;
        let actual = keys(&r);
        if actual != expected {
            let position = expected
                .iter()
                .zip(&actual)
                .position(|(a, b)| a != b)
                .unwrap_or(expected.len().min(actual.len()));
            return Err(CompareError::Divergence(Divergence {
                version: v,
                position,
                expected: expected.get(position).copied(),
                actual: actual.get(position).copied(),
                expected_total: expected.len(),
                actual_total: actual.len(),
            }));
        }
    }
    Ok(expected.len())
}
