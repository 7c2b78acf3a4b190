// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;

use super::{route_local, SwitchProgram, TileMode};
use crate::automata::StateId;
use crate::bits::Bits256;
use crate::encode::Code;

/// A 512-column vector, halves indexed by sub-array (or 256-column view).
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TileVec(pub [Bits256; 2]);

impl TileVec {
    pub const EMPTY: TileVec = TileVec([Bits256::EMPTY; 2]);

    pub fn contains(&self, c: usize) -> bool {
        c < 512 && self.0[c / 256].contains(c % 256)
    }

    pub fn insert(&mut self, c: usize) {
        self.0[c / 256].insert(c % 256)
    }

    pub fn len(&self) -> usize {
        self.0[0].len() + self.0[1].len()
    }

    pub fn is_empty(&self) -> bool {
        self.0[0].is_empty() && self.0[1].is_empty()
    }

    pub fn union(&self, o: &TileVec) -> TileVec {
        TileVec([self.0[0].union(&o.0[0]), self.0[1].union(&o.0[1])])
    }

    pub fn intersection(&self, o: &TileVec) -> TileVec {
        TileVec([
            self.0[0].intersection(&o.0[0]),
            self.0[1].intersection(&o.0[1]),
        ])
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0[0].iter().chain(self.0[1].iter().map(|c| c + 256))
    }

    /// Members in `lo..hi`.
    pub fn count_range(&self, lo: usize, hi: usize) -> usize {
        self.iter().filter(|&c| c >= lo && c < hi).count()
    }
}

impl core::fmt::Debug for TileVec {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for TileVec {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut v = TileVec::EMPTY;
        for c in iter {
            v.insert(c);
        }
        v
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ColumnEntry {
    pub code: Code,
    pub state: StateId,
    pub partition: u32,
}

/// The contiguous replica columns of one state.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Run {
    pub state: StateId,
    pub start: usize,
    pub len: usize,
    pub invert: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SendPort {
    pub state: StateId,
    pub column: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecvPort {
    pub state: StateId,
    pub columns: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tile {
    pub array: usize,
    /// Index within the array (global-switch slot group).
    pub slot: usize,
    pub mode: TileMode,
    pub columns: Vec<Option<ColumnEntry>>,
    pub runs: Vec<Run>,
    /// Rcb16: one RCB program per sub-array. Otherwise one FCB program.
    pub switches: Vec<SwitchProgram>,
    pub report_mask: TileVec,
    pub start_of_data: TileVec,
    pub all_input: TileVec,
    pub send_ports: Vec<SendPort>,
    pub recv_ports: Vec<RecvPort>,
}

impl Tile {
    pub fn placed(&self) -> TileVec {
        self.columns
            .iter()
            .enumerate()
            .filter(|(_, c)| c.is_some())
            .map(|(i, _)| i)
            .collect()
    }

    /// Entries stored per sub-array.
    pub fn placed_per_sub_array(&self) -> [usize; 2] {
        let mut n = [0; 2];
        for (c, e) in self.columns.iter().enumerate() {
            if e.is_some() {
                for &s in self.mode.sub_arrays_of(c) {
                    n[s] += 1;
                }
            }
        }
        n
    }

    /// State-level activity: a state is active when enabled and its replica
    /// OR, XOR its invert flag, is 1. Every replica column carries the result.
    pub fn state_active(&self, raw: &TileVec, enabled: &TileVec) -> TileVec {
        let mut out = TileVec::EMPTY;
        for r in &self.runs {
            if !enabled.contains(r.start) {
                continue;
            }
            let hit = (r.start..r.start + r.len).any(|c| raw.contains(c));
            if hit != r.invert {
                for c in r.start..r.start + r.len {
                    out.insert(c);
                }
            }
        }
        out
    }

    /// Local successors of the active columns.
    pub fn route(&self, active: &TileVec) -> TileVec {
        match self.mode {
            TileMode::Rcb16 => TileVec([
                route_local(&self.switches[0], &active.0[0]),
                route_local(&self.switches[1], &active.0[1]),
            ]),
            _ => TileVec([route_local(&self.switches[0], &active.0[0]), Bits256::EMPTY]),
        }
    }

    /// Send-port bits asserted by the active columns.
    pub fn exported(&self, active: &TileVec) -> u16 {
        self.send_ports
            .iter()
            .enumerate()
            .filter(|(_, p)| active.contains(p.column))
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// Columns enabled by asserted receive ports.
    pub fn imported(&self, bits: u16) -> TileVec {
        let mut out = TileVec::EMPTY;
        for (i, p) in self.recv_ports.iter().enumerate() {
            if bits >> i & 1 == 1 {
                for &c in &p.columns {
                    out.insert(c);
                }
            }
        }
        out
    }
}

/// Column-level CAM match with selective precharge. Columns outside `enable`
/// and empty columns read 0. In `Mode32` a column matches iff both 16-bit
/// halves match.
pub fn tile_match(tile: &Tile, input: u32, enable: &TileVec) -> TileVec {
    let mut out = TileVec::EMPTY;
    for c in enable.iter() {
        let Some(e) = tile.columns.get(c).copied().flatten() else {
            continue;
        };
        let miss = e.code.bits() & !input;
        let hit = match tile.mode {
            TileMode::Mode32 => miss & 0xFFFF == 0 && (miss >> 16) & 0xFFFF == 0,
            _ => miss & 0xFFFF == 0,
        };
        if hit {
            out.insert(c);
        }
    }
    out
}
