// SPDX-License-Identifier: Apache-2.0
//! File formats, run manifests, the differential fuzzer and the command-line
//! driver around `cama-core`.

pub mod artifact;
pub mod cli;
pub mod error;
pub mod fuzz;
pub mod manifest;
pub mod nfa_io;
pub mod params;
pub mod pipeline;
pub mod records;
pub mod trace_csv;

pub use error::{Error, Result};

/// Output format of tables and report streams.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    #[default]
    Table,
}
