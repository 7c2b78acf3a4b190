// SPDX-License-Identifier: Apache-2.0
//! JSON artifacts written by `compile` and read back by `sim` and `cost`.

use std::fmt::Write as _;
use std::path::Path;

use cama_core::encode::{Codebook, Scheme};
use cama_core::fabric::{SwitchProgram, TileMode};
use cama_core::mapper::Placement;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifest::{sha256_hex, RunManifest};
use crate::pipeline::Compiled;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CodebookArtifact {
    pub manifest: RunManifest,
    pub scheme: Scheme,
    pub alphabet_size: usize,
    /// Average class size before and after negation, as fractions.
    pub avg_class_size_raw: (u64, u64),
    pub avg_class_size: (u64, u64),
    pub total_entries: usize,
    pub codebook: Codebook,
}

impl CodebookArtifact {
    pub fn new(manifest: RunManifest, c: &Compiled) -> Self {
        CodebookArtifact {
            manifest,
            scheme: c.scheme,
            alphabet_size: c.compiled.codebook.alphabet_size,
            avg_class_size_raw: (
                c.stats.avg_class_size_raw.num,
                c.stats.avg_class_size_raw.den,
            ),
            avg_class_size: (c.stats.avg_class_size.num, c.stats.avg_class_size.den),
            total_entries: c.compiled.total_entries(),
            codebook: c.compiled.codebook.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlacementArtifact {
    pub manifest: RunManifest,
    /// Digest of `placement` alone; traces carry it to detect staleness.
    pub placement_sha256: String,
    pub placement: Placement,
}

pub fn placement_hash(p: &Placement) -> String {
    sha256_hex(&serde_json::to_vec(p).expect("placement serializes"))
}

impl PlacementArtifact {
    pub fn new(manifest: RunManifest, placement: Placement) -> Self {
        PlacementArtifact {
            manifest,
            placement_sha256: placement_hash(&placement),
            placement,
        }
    }
}

pub fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("artifact serializes");
    s.push('\n');
    s
}

pub fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(Error::io(path))
}

/// Reads a placement artifact and checks the structural facts the simulator
/// relies on.
pub fn read_placement(path: &Path) -> Result<(PlacementArtifact, Vec<u8>)> {
    let bytes = std::fs::read(path).map_err(Error::io(path))?;
    let a: PlacementArtifact = serde_json::from_slice(&bytes)
        .map_err(|e| Error::input(format!("{}: placement schema error: {e}", path.display())))?;
    let p = &a.placement;
    if placement_hash(p) != a.placement_sha256 {
        return Err(Error::input(format!(
            "{}: placement digest does not match its contents",
            path.display()
        )));
    }
    let bad = |m: String| Err(Error::input(format!("{}: {m}", path.display())));
    if p.locations.len() != p.state_count {
        return bad(format!(
            "{} locations for {} states",
            p.locations.len(),
            p.state_count
        ));
    }
    for (i, t) in p.tiles.iter().enumerate() {
        let switches = if t.mode == TileMode::Rcb16 { 2 } else { 1 };
        if t.columns.len() != t.mode.columns() || t.switches.len() != switches {
            return bad(format!(
                "tile {i} does not have the shape of a {:?} tile",
                t.mode
            ));
        }
        if t.array >= p.globals.len() || t.slot >= p.config.tiles_per_array {
            return bad(format!("tile {i} sits outside the declared arrays"));
        }
    }
    if p.encoder.width != p.scheme.code_len {
        return bad("encoder width differs from the scheme".into());
    }
    Ok((a, bytes))
}

/// Source indices as `a-b` runs.
fn runs(mut v: Vec<usize>) -> String {
    v.sort_unstable();
    let mut out = String::new();
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j + 1 < v.len() && v[j + 1] == v[j] + 1 {
            j += 1;
        }
        if !out.is_empty() {
            out.push(',');
        }
        if j > i {
            let _ = write!(out, "{}-{}", v[i], v[j]);
        } else {
            let _ = write!(out, "{}", v[i]);
        }
        i = j + 1;
    }
    out
}

/// Human-readable dump: column contents, then each switch row as runs of
/// source indices per destination.
pub fn placement_dump(manifest: &RunManifest, p: &Placement) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# manifest: {}", manifest.to_line());
    let _ = writeln!(
        s,
        "scheme {:?} code_len {} states {} tiles {} arrays {}",
        p.scheme.kind,
        p.scheme.code_len,
        p.state_count,
        p.tiles.len(),
        p.stats.arrays
    );
    for (i, t) in p.tiles.iter().enumerate() {
        let _ = writeln!(
            s,
            "tile {i} array {} slot {} mode {:?} placed {}",
            t.array,
            t.slot,
            t.mode,
            t.placed().len()
        );
        for r in &t.runs {
            let codes: Vec<String> = (r.start..r.start + r.len)
                .filter_map(|c| t.columns[c].map(|e| e.code.to_string()))
                .collect();
            let _ = writeln!(
                s,
                "  state {} cols {}-{} invert {} codes {}",
                r.state,
                r.start,
                r.start + r.len - 1,
                r.invert as u8,
                codes.join(" ")
            );
        }
        for (k, sw) in t.switches.iter().enumerate() {
            let kind = match sw {
                SwitchProgram::Rcb(_) => "rcb",
                SwitchProgram::Fcb(_) => "fcb",
            };
            let mut by_dst: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
            for (i, j) in sw.pairs() {
                by_dst.entry(j).or_default().push(i);
            }
            let _ = writeln!(
                s,
                "  switch {k} {kind} pairs {}",
                by_dst.values().map(Vec::len).sum::<usize>()
            );
            for (j, srcs) in by_dst {
                let _ = writeln!(s, "    {j} <- {}", runs(srcs));
            }
        }
        for (n, port) in t.send_ports.iter().enumerate() {
            let _ = writeln!(s, "  send {n} state {} col {}", port.state, port.column);
        }
        for (n, port) in t.recv_ports.iter().enumerate() {
            let _ = writeln!(
                s,
                "  recv {n} state {} cols {}",
                port.state,
                runs(port.columns.clone())
            );
        }
    }
    for (a, g) in p.globals.iter().enumerate() {
        let pairs = g.pairs();
        let _ = writeln!(s, "global {a} routes {}", pairs.len());
        for ((st, sp), (dt, dp)) in pairs {
            let _ = writeln!(s, "  {st}.{sp} -> {dt}.{dp}");
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn runs_compress_consecutive_indices() {
        assert_eq!(runs(vec![5, 1, 2, 3, 9]), "1-3,5,9");
        assert_eq!(runs(vec![]), "");
    }
}
