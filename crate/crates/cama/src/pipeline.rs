// SPDX-License-Identifier: Apache-2.0
//! NFA to placement: statistics, scheme choice, entry compilation, mapping.

use cama_core::encode::{
    analyze, cluster_symbols, compile_nfa, select_scheme, AlphabetStats, CompiledNfa, Scheme,
};
use cama_core::fabric::{FabricConfig, TileMode};
use cama_core::mapper::{place, MapOptions, Placement};
use cama_core::HomogeneousNfa;

use crate::error::Result;

/// Widest search word the fabric drives (two 16-row sub-arrays).
pub const MAX_CODE_LEN: usize = 32;

#[derive(Clone, Debug)]
pub struct Compiled {
    pub stats: AlphabetStats,
    pub scheme: Scheme,
    pub compiled: CompiledNfa,
    pub placement: Placement,
}

pub fn choose_scheme(nfa: &HomogeneousNfa, cfg: &FabricConfig) -> Result<(AlphabetStats, Scheme)> {
    let stats = analyze(nfa);
    let scheme = select_scheme(
        nfa.alphabet_size(),
        stats.avg_class_size,
        cfg.cam_rows,
        MAX_CODE_LEN,
    )?;
    Ok((stats, scheme))
}

pub fn encode(nfa: &HomogeneousNfa, cfg: &FabricConfig) -> Result<(AlphabetStats, CompiledNfa)> {
    let (stats, scheme) = choose_scheme(nfa, cfg)?;
    let compiled = compile_nfa(nfa, cluster_symbols(&stats, &scheme));
    Ok((stats, compiled))
}

pub fn compile(nfa: &HomogeneousNfa, force_mode: Option<TileMode>) -> Result<Compiled> {
    let cfg = FabricConfig::default();
    let (stats, compiled) = encode(nfa, &cfg)?;
    let placement = place(nfa, &compiled, &cfg, &MapOptions { force_mode })?;
    Ok(Compiled {
        stats,
        scheme: compiled.codebook.scheme,
        compiled,
        placement,
    })
}
