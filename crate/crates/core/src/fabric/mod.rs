// SPDX-License-Identifier: Apache-2.0
//! Functional models of the hardware blocks.
//!
//! A tile holds two 16×256 CAM sub-arrays and two 128×128 RRCBs. A tile runs
//! in one of three modes:
//!
//! | mode     | states | CAM use                              | local switch            |
//! |----------|--------|--------------------------------------|-------------------------|
//! | `Rcb16`  | 512    | two independent sub-arrays           | one RCB band per array  |
//! | `Fcb16`  | 256    | sub-array 0                          | two 128×128 FCB blocks  |
//! | `Mode32` | 256    | low half in 0, high half in 1 (AND)  | two 128×128 FCB blocks  |
//!
//! Eight tiles share one 256×256 global switch (an array), with 16 send and 16
//! receive ports per tile.

mod global;
mod switch;
mod tile;

pub use global::{route_global, GlobalProgram};
pub use switch::{
    program_switch, rcb_row_load, rcb_supports, rcb_window, route_local, DenseSwitch, FcbProgram,
    RcbProgram, SwitchKind, SwitchProgram,
};
pub use tile::{tile_match, ColumnEntry, RecvPort, Run, SendPort, Tile, TileVec};

use crate::encode::{CamEntry, Code};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FabricConfig {
    pub cam_rows: usize,
    pub cam_cols: usize,
    pub rrcb_dim: usize,
    pub k_dia: usize,
    pub wl_segments: usize,
    pub bl_segments: usize,
    pub tiles_per_array: usize,
    pub arrays_per_bank: usize,
    pub global_dim: usize,
    pub global_ports_in: usize,
    pub global_ports_out: usize,
}

impl Default for FabricConfig {
    fn default() -> Self {
        FabricConfig {
            cam_rows: 16,
            cam_cols: 256,
            rrcb_dim: 128,
            k_dia: 43,
            wl_segments: 3,
            bl_segments: 2,
            tiles_per_array: 8,
            arrays_per_bank: 16,
            global_dim: 256,
            global_ports_in: 16,
            global_ports_out: 16,
        }
    }
}

impl FabricConfig {
    /// RRCB input width: one WL segment per row segment.
    pub fn source_slots(&self) -> usize {
        self.wl_segments * self.rrcb_dim
    }

    pub fn dest_slots(&self) -> usize {
        self.bl_segments * self.rrcb_dim
    }

    /// Source slots per destination group.
    pub fn window_width(&self) -> usize {
        self.source_slots() / self.cam_cols.div_ceil(self.k_dia)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum TileMode {
    Rcb16,
    Fcb16,
    Mode32,
}

impl TileMode {
    pub fn columns(&self) -> usize {
        match self {
            TileMode::Rcb16 => 512,
            TileMode::Fcb16 | TileMode::Mode32 => 256,
        }
    }

    /// Columns behind one local switch: a whole sub-array under RCB, one
    /// 128-wide block under FCB.
    pub fn segment_width(&self) -> usize {
        match self {
            TileMode::Rcb16 => 256,
            TileMode::Fcb16 | TileMode::Mode32 => 128,
        }
    }

    pub fn segments(&self) -> usize {
        self.columns() / self.segment_width()
    }

    pub fn max_code_len(&self) -> usize {
        match self {
            TileMode::Mode32 => 32,
            _ => 16,
        }
    }

    /// Sub-arrays whose bit lines carry a column's entry.
    pub fn sub_arrays_of(&self, column: usize) -> &'static [usize] {
        match self {
            TileMode::Rcb16 if column >= 256 => &[1],
            TileMode::Rcb16 | TileMode::Fcb16 => &[0],
            TileMode::Mode32 => &[0, 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FabricError {
    #[error("entry width {entry} does not match input width {input}")]
    WidthMismatch { entry: usize, input: usize },
    #[error("transition ({src}, {dst}) is not supported by the {kind:?} switch")]
    Unsupported {
        src: usize,
        dst: usize,
        kind: SwitchKind,
    },
    #[error("tile {tile} needs {needed} global {dir} ports; {max} available")]
    PortOverflow {
        tile: usize,
        dir: &'static str,
        needed: usize,
        max: usize,
    },
}

/// The subset rule: every `1` of the entry must be `1` in the input. The
/// entry's invert flag is applied per state, not here.
pub fn cam_match(entry: &CamEntry, input: Code) -> Result<bool, FabricError> {
    if entry.code.len() != input.len() {
        return Err(FabricError::WidthMismatch {
            entry: entry.code.len(),
            input: input.len(),
        });
    }
    Ok(entry.code.bits() & !input.bits() == 0)
}
