// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;

use super::{FabricConfig, FabricError};
use crate::bits::Bits256;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SwitchKind {
    Rcb,
    Fcb,
}

/// Source window `[lo, hi)` feeding destination `j`. Destinations are grouped
/// by `k_dia`; each group reads a fixed window of `window_width` sources that
/// starts `⌊k_dia/2⌋` below the group.
pub fn rcb_window(j: usize, cfg: &FabricConfig) -> (usize, usize) {
    let g = j / cfg.k_dia;
    let base = g * cfg.k_dia;
    let lo = base.saturating_sub(cfg.k_dia / 2);
    let hi = (base + cfg.k_dia).min(cfg.cam_cols);
    (lo, hi.min(lo + cfg.window_width()))
}

pub fn rcb_supports(i: usize, j: usize, cfg: &FabricConfig) -> bool {
    let (lo, hi) = rcb_window(j, cfg);
    (lo..hi).contains(&i)
}

/// Number of destination-group windows containing source `i`: the RRCB rows
/// a single active source drives.
pub fn rcb_row_load(i: usize, cfg: &FabricConfig) -> usize {
    (0..cfg.cam_cols.div_ceil(cfg.k_dia))
        .filter(|&g| rcb_supports(i, (g * cfg.k_dia).min(cfg.cam_cols - 1), cfg))
        .count()
}

/// Band configuration: for every destination a mask over its source window.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RcbProgram {
    pub cfg: FabricConfig,
    pub windows: Vec<u64>,
}

/// Two independent 128×128 full crossbars: per block, per source row, the
/// destination mask.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FcbProgram {
    pub blocks: [Vec<u128>; 2],
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum SwitchProgram {
    Rcb(RcbProgram),
    Fcb(FcbProgram),
}

impl SwitchProgram {
    pub fn empty(kind: SwitchKind, cfg: &FabricConfig) -> Self {
        match kind {
            SwitchKind::Rcb => SwitchProgram::Rcb(RcbProgram {
                cfg: *cfg,
                windows: alloc::vec![0; cfg.cam_cols],
            }),
            SwitchKind::Fcb => SwitchProgram::Fcb(FcbProgram {
                blocks: [alloc::vec![0; 128], alloc::vec![0; 128]],
            }),
        }
    }

    pub fn kind(&self) -> SwitchKind {
        match self {
            SwitchProgram::Rcb(_) => SwitchKind::Rcb,
            SwitchProgram::Fcb(_) => SwitchKind::Fcb,
        }
    }

    pub fn set(&mut self, i: usize, j: usize) -> Result<(), FabricError> {
        let kind = self.kind();
        let bad = FabricError::Unsupported {
            src: i,
            dst: j,
            kind,
        };
        match self {
            SwitchProgram::Rcb(p) => {
                if j >= p.windows.len() || !rcb_supports(i, j, &p.cfg) {
                    return Err(bad);
                }
                let (lo, _) = rcb_window(j, &p.cfg);
                p.windows[j] |= 1 << (i - lo);
            }
            SwitchProgram::Fcb(p) => {
                if i >= 256 || j >= 256 || i / 128 != j / 128 {
                    return Err(bad);
                }
                p.blocks[i / 128][i % 128] |= 1 << (j % 128);
            }
        }
        Ok(())
    }

    /// Programmed pairs in ascending `(src, dst)` order.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        match self {
            SwitchProgram::Rcb(p) => {
                for (j, &w) in p.windows.iter().enumerate() {
                    let (lo, _) = rcb_window(j, &p.cfg);
                    let mut w = w;
                    while w != 0 {
                        out.push((lo + w.trailing_zeros() as usize, j));
                        w &= w - 1;
                    }
                }
                out.sort_unstable();
            }
            SwitchProgram::Fcb(p) => {
                for (b, rows) in p.blocks.iter().enumerate() {
                    for (i, &row) in rows.iter().enumerate() {
                        let mut r = row;
                        while r != 0 {
                            out.push((b * 128 + i, b * 128 + r.trailing_zeros() as usize));
                            r &= r - 1;
                        }
                    }
                }
            }
        }
        out
    }
}

/// Programs exactly `transitions`, or names the first pair the switch cannot
/// realize.
pub fn program_switch(
    transitions: impl IntoIterator<Item = (usize, usize)>,
    kind: SwitchKind,
    cfg: &FabricConfig,
) -> Result<SwitchProgram, FabricError> {
    let mut p = SwitchProgram::empty(kind, cfg);
    for (i, j) in transitions {
        p.set(i, j)?;
    }
    Ok(p)
}

pub fn route_local(program: &SwitchProgram, active: &Bits256) -> Bits256 {
    let mut out = Bits256::EMPTY;
    if active.is_empty() {
        return out;
    }
    match program {
        SwitchProgram::Rcb(p) => {
            for (j, &w) in p.windows.iter().enumerate() {
                if w != 0 && active.window64(rcb_window(j, &p.cfg).0) & w != 0 {
                    out.insert(j);
                }
            }
        }
        SwitchProgram::Fcb(p) => {
            for i in active.iter() {
                let mut r = p.blocks[i / 128][i % 128];
                while r != 0 {
                    out.insert((i / 128) * 128 + r.trailing_zeros() as usize);
                    r &= r - 1;
                }
            }
        }
    }
    out
}

/// Unconstrained 256×256 crossbar; the reference for both configurations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseSwitch {
    pub rows: Vec<Bits256>,
}

impl DenseSwitch {
    pub fn from_pairs(pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut rows = alloc::vec![Bits256::EMPTY; 256];
        for (i, j) in pairs {
            rows[i].insert(j);
        }
        DenseSwitch { rows }
    }

    pub fn route(&self, active: &Bits256) -> Bits256 {
        active
            .iter()
            .fold(Bits256::EMPTY, |acc, i| acc.union(&self.rows[i]))
    }
}
