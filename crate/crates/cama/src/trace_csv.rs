// SPDX-License-Identifier: Apache-2.0
//! Per-cycle activity traces as CSV.
//!
//! Comment lines carry the run-level facts: the digest of the placement the
//! trace was produced on, the version, symbol and interrupt counts, and the
//! manifest. One row per cycle follows, with eight columns per tile.

use std::collections::BTreeMap;

use cama_core::sim::{ActivityTrace, CycleTrace, TileCycle, Version};

use crate::error::{Error, Result};
use crate::manifest::RunManifest;

const TILE_FIELDS: [&str; 8] = [
    "enabled0",
    "enabled1",
    "matches",
    "rows0",
    "rows1",
    "switch0",
    "switch1",
    "global_sends",
];

pub fn write_trace(
    trace: &ActivityTrace,
    tiles: usize,
    placement_sha256: &str,
    manifest: &RunManifest,
) -> String {
    let version = match trace.version {
        Version::E => "e",
        Version::T => "t",
    };
    let mut head = String::new();
    for (k, v) in [
        ("placement-sha256", placement_sha256.to_string()),
        ("version", version.to_string()),
        ("symbols", trace.symbols.to_string()),
        ("input-interrupts", trace.input_interrupts.to_string()),
        ("output-interrupts", trace.output_interrupts.to_string()),
        ("tiles", tiles.to_string()),
        ("manifest", manifest.to_line()),
    ] {
        head.push_str(&format!("# {k}: {v}\n"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![
        "cycle".to_string(),
        "encoder".into(),
        "reports".into(),
        "global_accesses".into(),
    ];
    for t in 0..tiles {
        header.extend(TILE_FIELDS.iter().map(|f| format!("t{t}_{f}")));
    }
    w.write_record(&header).expect("in-memory write");
    for (i, c) in trace.cycles.iter().enumerate() {
        let mut row = vec![
            i as u64,
            c.encoder as u64,
            c.reports as u64,
            c.global_accesses as u64,
        ];
        for t in &c.tiles {
            row.extend([
                t.enabled[0] as u64,
                t.enabled[1] as u64,
                t.matches as u64,
                t.active_rows[0] as u64,
                t.active_rows[1] as u64,
                t.switch_accessed[0] as u64,
                t.switch_accessed[1] as u64,
                t.global_sends as u64,
            ]);
        }
        w.serialize(row).expect("in-memory write");
    }
    head + &String::from_utf8(w.into_inner().expect("flush")).expect("ascii")
}

#[derive(Clone, Debug, PartialEq)]
pub struct TraceFile {
    pub placement_sha256: String,
    pub tiles: usize,
    pub manifest: Option<RunManifest>,
    pub trace: ActivityTrace,
}

pub fn read_trace(text: &str) -> Result<TraceFile> {
    let bad = |m: String| Error::input(format!("trace: {m}"));
    let mut meta = BTreeMap::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        if let Some((k, v)) = line[1..].trim().split_once(": ") {
            meta.insert(k.to_string(), v.to_string());
        }
    }
    let get = |k: &str| {
        meta.get(k)
            .cloned()
            .ok_or_else(|| bad(format!("missing `{k}` header")))
    };
    let num = |k: &str| -> Result<u64> {
        get(k)?
            .parse()
            .map_err(|_| bad(format!("`{k}` is not a number")))
    };
    let version = match get("version")?.as_str() {
        "e" => Version::E,
        "t" => Version::T,
        v => return Err(bad(format!("unknown version `{v}`"))),
    };
    let tiles = num("tiles")? as usize;
    let manifest = meta
        .get("manifest")
        .and_then(|m| serde_json::from_str(m).ok());

    let mut r = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let width = r.headers().map_err(|e| bad(e.to_string()))?.len();
    if width != 4 + 8 * tiles {
        return Err(bad(format!("{width} columns for {tiles} tiles")));
    }
    let mut cycles = Vec::new();
    for (i, rec) in r.deserialize::<Vec<u64>>().enumerate() {
        let v = rec.map_err(|e| bad(e.to_string()))?;
        if v[0] != i as u64 {
            return Err(bad(format!("row {i} is labelled cycle {}", v[0])));
        }
        let small =
            |x: u64| u16::try_from(x).map_err(|_| bad(format!("row {i}: value {x} out of range")));
        let mut tc = Vec::with_capacity(tiles);
        for t in v[4..].chunks(8) {
            tc.push(TileCycle {
                enabled: [small(t[0])?, small(t[1])?],
                matches: small(t[2])?,
                active_rows: [small(t[3])?, small(t[4])?],
                switch_accessed: [t[5] != 0, t[6] != 0],
                global_sends: small(t[7])?,
            });
        }
        cycles.push(CycleTrace {
            tiles: tc,
            encoder: v[1] != 0,
            reports: u32::try_from(v[2])
                .map_err(|_| bad(format!("row {i}: report count out of range")))?,
            global_accesses: small(v[3])?,
        });
    }
    Ok(TraceFile {
        placement_sha256: get("placement-sha256")?,
        tiles,
        manifest,
        trace: ActivityTrace {
            version,
            symbols: num("symbols")? as usize,
            cycles,
            input_interrupts: num("input-interrupts")?,
            output_interrupts: num("output-interrupts")?,
        },
    })
}
