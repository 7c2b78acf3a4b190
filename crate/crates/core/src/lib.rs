// SPDX-License-Identifier: Apache-2.0
//! Compiler and cycle-accurate functional model of a CAM-based automata
//! accelerator for homogeneous NFAs.
//!
//! The pipeline is:
//!
//! 1. [`automata`]: regex / NFA front-end and the reference interpreter.
//! 2. [`encode`]: alphabet statistics, encoding-scheme selection, symbol
//!    clustering and exact compression of symbol classes into CAM entries.
//! 3. [`fabric`]: functional models of the 8T CAM sub-arrays, the reduced
//!    crossbar (RCB / FCB configurations) and the global switch.
//! 4. [`mapper`]: placement of connected components onto tiles and arrays.
//! 5. [`sim`]: energy-optimized (non-pipelined) and throughput-optimized
//!    (pipelined) execution with activity traces.
//! 6. [`cost`]: energy, power, area and throughput from 28nm block models.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod automata;
pub mod bits;
pub mod cost;
pub mod encode;
pub mod fabric;
pub mod mapper;
pub mod sim;

pub use automata::{HomogeneousNfa, ReportRecord, StartKind, StateId, Ste, SymbolClass};
pub use bits::Bits256;
