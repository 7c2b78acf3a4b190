// SPDX-License-Identifier: Apache-2.0
//! Placement of connected components onto tiles and arrays.
//!
//! Components are sorted by descending replicated size (stable) and packed
//! next-fit, one open tile per mode. A state's replica columns are contiguous
//! and never straddle a segment (the columns behind one local switch). Edges
//! inside a segment go through the local switch; all others go through the
//! array's global switch and consume ports.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::automata::{
    bfs_order, connected_components, Component, HomogeneousNfa, StartKind, StateId,
};
use crate::encode::{CompiledNfa, EncoderTable, Scheme};
use crate::fabric::{
    rcb_supports, ColumnEntry, FabricConfig, GlobalProgram, RecvPort, Run, SendPort, SwitchKind,
    SwitchProgram, Tile, TileMode, TileVec,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("component {cc} needs {needed} columns; at most {available} fit one array")]
    CapacityExceeded {
        cc: usize,
        needed: usize,
        available: usize,
    },
    #[error("state {state} has {entries} entries; a {mode:?} segment holds {width}")]
    StateTooWide {
        state: StateId,
        entries: usize,
        mode: TileMode,
        width: usize,
    },
    #[error("component {cc} needs {needed} global {dir} ports on one tile; {max} available")]
    PortOverflow {
        cc: usize,
        dir: &'static str,
        needed: usize,
        max: usize,
    },
    #[error("mode {mode:?} cannot hold component {cc}: {reason}")]
    ForcedModeInvalid {
        cc: usize,
        mode: TileMode,
        reason: &'static str,
    },
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapOptions {
    pub force_mode: Option<TileMode>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StateLoc {
    pub tile: usize,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CcPlacement {
    pub partition: u32,
    pub array: usize,
    pub mode: TileMode,
    pub tiles: Vec<usize>,
    /// States in layout (BFS) order.
    pub states: Vec<StateId>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MappingStats {
    pub rcb_tiles: usize,
    pub fcb_tiles: usize,
    pub mode32_tiles: usize,
    pub arrays: usize,
    /// Arrays whose global switch carries at least one route.
    pub global_switches: usize,
    pub global_routes: usize,
    pub columns: usize,
}

impl MappingStats {
    pub fn tiles(&self) -> usize {
        self.rcb_tiles + self.fcb_tiles + self.mode32_tiles
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Placement {
    pub config: FabricConfig,
    pub scheme: Scheme,
    pub encoder: EncoderTable,
    pub state_count: usize,
    pub ccs: Vec<CcPlacement>,
    pub tiles: Vec<Tile>,
    /// One global program per array, indexed by array id.
    pub globals: Vec<GlobalProgram>,
    pub locations: Vec<StateLoc>,
    pub stats: MappingStats,
}

impl Placement {
    pub fn tiles_of_array(&self, array: usize) -> impl Iterator<Item = (usize, &Tile)> {
        self.tiles
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.array == array)
    }
}

/// Result of the band check: offending edges are listed in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RcbCheck {
    pub feasible: bool,
    pub offending: Vec<(StateId, StateId)>,
}

/// Packs replica runs in `order` into segments of `width`, never splitting a
/// run. Returns `(segment, offset)` per state and the segment count.
fn layout(order: &[StateId], widths: &[usize], width: usize) -> (Vec<(usize, usize)>, usize) {
    let mut out = Vec::with_capacity(order.len());
    let (mut seg, mut off) = (0, 0);
    for &s in order {
        if off + widths[s] > width {
            seg += 1;
            off = 0;
        }
        out.push((seg, off));
        off += widths[s];
    }
    (out, if order.is_empty() { 0 } else { seg + 1 })
}

/// Every destination replica must be reachable from some source replica.
fn band_edge_ok(u: (usize, usize), v: (usize, usize), cfg: &FabricConfig) -> bool {
    (v.0..v.0 + v.1).all(|cv| (u.0..u.0 + u.1).any(|cu| rcb_supports(cu % 256, cv % 256, cfg)))
}

fn cc_edges<'a>(
    nfa: &'a HomogeneousNfa,
    states: &'a [StateId],
) -> impl Iterator<Item = (StateId, StateId)> + 'a {
    states
        .iter()
        .flat_map(move |&u| nfa.successors(u).iter().map(move |&v| (u, v)))
}

fn widths_of(compiled: &CompiledNfa) -> Vec<usize> {
    compiled.entries.iter().map(Vec::len).collect()
}

/// Band check of a component laid out in `ordering` from column 0, sliced at
/// 256. Edges whose endpoints fall in different slices are not band edges.
pub fn check_rcb_feasible(
    nfa: &HomogeneousNfa,
    compiled: &CompiledNfa,
    ordering: &[StateId],
    cfg: &FabricConfig,
) -> RcbCheck {
    let widths = widths_of(compiled);
    let (pos, _) = layout(ordering, &widths, 256);
    let at: BTreeMap<StateId, (usize, usize)> =
        ordering.iter().zip(&pos).map(|(&s, &p)| (s, p)).collect();
    let mut offending = Vec::new();
    for (u, v) in cc_edges(nfa, ordering) {
        let (Some(&(su, ou)), Some(&(sv, ov))) = (at.get(&u), at.get(&v)) else {
            continue;
        };
        if su == sv && !band_edge_ok((ou, widths[u]), (ov, widths[v]), cfg) {
            offending.push((u, v));
        }
    }
    offending.sort_unstable();
    RcbCheck {
        feasible: offending.is_empty(),
        offending,
    }
}

/// Mode per component: `Mode32` when codes exceed 16 bits, else `Rcb16` if
/// the BFS layout passes the band check, else `Fcb16`.
pub fn choose_app_mode(
    scheme: &Scheme,
    nfa: &HomogeneousNfa,
    compiled: &CompiledNfa,
    ccs: &[Component],
    cfg: &FabricConfig,
) -> Vec<TileMode> {
    ccs.iter()
        .map(|cc| {
            if scheme.code_len > 16 {
                TileMode::Mode32
            } else if check_rcb_feasible(nfa, compiled, &bfs_order(nfa, cc), cfg).feasible {
                TileMode::Rcb16
            } else {
                TileMode::Fcb16
            }
        })
        .collect()
}

/// Report masks: the first replica column of every reporting state.
pub fn emit_report_mask(nfa: &HomogeneousNfa, placement: &Placement) -> Vec<TileVec> {
    placement
        .tiles
        .iter()
        .map(|t| {
            t.runs
                .iter()
                .filter(|r| nfa.state(r.state).reporting)
                .map(|r| r.start)
                .collect()
        })
        .collect()
}

struct Packer<'a> {
    cfg: FabricConfig,
    nfa: &'a HomogeneousNfa,
    compiled: &'a CompiledNfa,
    widths: Vec<usize>,
    tiles: Vec<Tile>,
    globals: Vec<GlobalProgram>,
    loc: Vec<Option<StateLoc>>,
    /// Open tile and its next free column, per mode.
    open: [Option<(usize, usize)>; 3],
    next_slot: (usize, usize),
}

fn mode_index(m: TileMode) -> usize {
    match m {
        TileMode::Rcb16 => 0,
        TileMode::Fcb16 => 1,
        TileMode::Mode32 => 2,
    }
}

impl Packer<'_> {
    fn new_tile(&mut self, mode: TileMode) -> usize {
        let (array, slot) = self.next_slot;
        self.next_slot = if slot + 1 == self.cfg.tiles_per_array {
            (array + 1, 0)
        } else {
            (array, slot + 1)
        };
        while self.globals.len() <= array {
            self.globals.push(GlobalProgram::new(&self.cfg));
        }
        let (kind, n) = match mode {
            TileMode::Rcb16 => (SwitchKind::Rcb, 2),
            _ => (SwitchKind::Fcb, 1),
        };
        self.tiles.push(Tile {
            array,
            slot,
            mode,
            columns: alloc::vec![None; mode.columns()],
            runs: Vec::new(),
            switches: (0..n)
                .map(|_| SwitchProgram::empty(kind, &self.cfg))
                .collect(),
            report_mask: TileVec::EMPTY,
            start_of_data: TileVec::EMPTY,
            all_input: TileVec::EMPTY,
            send_ports: Vec::new(),
            recv_ports: Vec::new(),
        });
        self.tiles.len() - 1
    }

    /// Reserves `k` fresh tiles inside one array.
    fn fresh_tiles(&mut self, mode: TileMode, k: usize) -> Vec<usize> {
        if self.next_slot.1 + k > self.cfg.tiles_per_array {
            self.next_slot = (self.next_slot.0 + 1, 0);
        }
        (0..k).map(|_| self.new_tile(mode)).collect()
    }

    /// Absolute `(tile, start)` of every state for a layout beginning at
    /// `seg0` of `tiles[0]`, with an extra column offset on single segments.
    fn resolve(
        &self,
        mode: TileMode,
        tiles: &[usize],
        seg0: usize,
        base: usize,
        pos: &[(usize, usize)],
    ) -> Vec<(usize, usize)> {
        let w = mode.segment_width();
        let per = mode.segments();
        pos.iter()
            .map(|&(seg, off)| {
                let g = seg0 + seg;
                (tiles[g / per], (g % per) * w + base + off)
            })
            .collect()
    }

    fn band_ok(&self, states: &[StateId], cols: &[(usize, usize)]) -> bool {
        let at: BTreeMap<StateId, (usize, usize)> =
            states.iter().zip(cols).map(|(&s, &c)| (s, c)).collect();
        cc_edges(self.nfa, states).all(|(u, v)| {
            let (tu, cu) = at[&u];
            let (tv, cv) = at[&v];
            tu != tv
                || cu / 256 != cv / 256
                || band_edge_ok((cu, self.widths[u]), (cv, self.widths[v]), &self.cfg)
        })
    }

    /// Cross-segment edges grouped as new send and receive ports per tile;
    /// `None` if some tile would exceed its budget.
    fn port_demand(
        &self,
        mode: TileMode,
        states: &[StateId],
        cols: &[(usize, usize)],
    ) -> Result<(), (&'static str, usize)> {
        let w = mode.segment_width();
        let at: BTreeMap<StateId, (usize, usize)> =
            states.iter().zip(cols).map(|(&s, &c)| (s, c)).collect();
        let mut send: BTreeMap<usize, BTreeSet<StateId>> = BTreeMap::new();
        let mut recv: BTreeMap<usize, BTreeSet<StateId>> = BTreeMap::new();
        for (u, v) in cc_edges(self.nfa, states) {
            let (tu, cu) = at[&u];
            let (tv, cv) = at[&v];
            if tu != tv || cu / w != cv / w {
                send.entry(tu).or_default().insert(u);
                recv.entry(tv).or_default().insert(v);
            }
        }
        for (t, s) in &send {
            let n = self.tiles[*t].send_ports.len() + s.len();
            if n > self.cfg.global_ports_out {
                return Err(("send", n));
            }
        }
        for (t, s) in &recv {
            let n = self.tiles[*t].recv_ports.len() + s.len();
            if n > self.cfg.global_ports_in {
                return Err(("receive", n));
            }
        }
        Ok(())
    }

    fn commit(
        &mut self,
        partition: u32,
        mode: TileMode,
        states: &[StateId],
        cols: &[(usize, usize)],
    ) {
        for (&s, &(t, c)) in states.iter().zip(cols) {
            let entries = &self.compiled.entries[s];
            let tile = &mut self.tiles[t];
            for (k, e) in entries.iter().enumerate() {
                tile.columns[c + k] = Some(ColumnEntry {
                    code: e.code,
                    state: s,
                    partition,
                });
            }
            tile.runs.push(Run {
                state: s,
                start: c,
                len: entries.len(),
                invert: entries.first().is_some_and(|e| e.invert),
            });
            let ste = self.nfa.state(s);
            for k in 0..entries.len() {
                match ste.start {
                    StartKind::StartOfData => tile.start_of_data.insert(c + k),
                    StartKind::AllInput => tile.all_input.insert(c + k),
                    StartKind::None => {}
                }
            }
            if ste.reporting {
                tile.report_mask.insert(c);
            }
            self.loc[s] = Some(StateLoc {
                tile: t,
                start: c,
                len: entries.len(),
            });
        }
        let w = mode.segment_width();
        for (u, v) in cc_edges(self.nfa, states).collect::<Vec<_>>() {
            let lu = self.loc[u].unwrap();
            let lv = self.loc[v].unwrap();
            if lu.tile == lv.tile && lu.start / w == lv.start / w {
                let tile = &mut self.tiles[lu.tile];
                for cv in lv.start..lv.start + lv.len {
                    for cu in lu.start..lu.start + lu.len {
                        let (sw, i, j) = match mode {
                            TileMode::Rcb16 => (cu / 256, cu % 256, cv % 256),
                            _ => (0, cu, cv),
                        };
                        if mode != TileMode::Rcb16 || rcb_supports(i, j, &self.cfg) {
                            tile.switches[sw].set(i, j).expect("checked by layout");
                        }
                    }
                }
            } else {
                let sp = send_port(&mut self.tiles[lu.tile], u, lu.start);
                let rp = recv_port(&mut self.tiles[lv.tile], v, lv);
                let (a, su, sv) = (
                    self.tiles[lu.tile].array,
                    self.tiles[lu.tile].slot,
                    self.tiles[lv.tile].slot,
                );
                self.globals[a]
                    .connect(su, sp, sv, rp)
                    .expect("ports checked");
            }
        }
    }
}

fn send_port(tile: &mut Tile, state: StateId, column: usize) -> usize {
    if let Some(i) = tile.send_ports.iter().position(|p| p.state == state) {
        return i;
    }
    tile.send_ports.push(SendPort { state, column });
    tile.send_ports.len() - 1
}

fn recv_port(tile: &mut Tile, state: StateId, loc: StateLoc) -> usize {
    if let Some(i) = tile.recv_ports.iter().position(|p| p.state == state) {
        return i;
    }
    tile.recv_ports.push(RecvPort {
        state,
        columns: (loc.start..loc.start + loc.len).collect(),
    });
    tile.recv_ports.len() - 1
}

/// Maps a compiled NFA. Deterministic: identical inputs give identical
/// placements.
pub fn place(
    nfa: &HomogeneousNfa,
    compiled: &CompiledNfa,
    cfg: &FabricConfig,
    opts: &MapOptions,
) -> Result<Placement, MapError> {
    let scheme = compiled.codebook.scheme;
    let comps = connected_components(nfa);
    let widths = widths_of(compiled);
    let sizes: Vec<usize> = comps
        .iter()
        .map(|cc| cc.states.iter().map(|&s| widths[s]).sum())
        .collect();
    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by_key(|&i| core::cmp::Reverse(sizes[i]));
    let sorted: Vec<Component> = order.iter().map(|&i| comps[i].clone()).collect();

    let modes: Vec<TileMode> = match opts.force_mode {
        None => choose_app_mode(&scheme, nfa, compiled, &sorted, cfg),
        Some(m) => {
            if scheme.code_len > m.max_code_len() {
                return Err(MapError::ForcedModeInvalid {
                    cc: 0,
                    mode: m,
                    reason: "codes are wider than 16 bits",
                });
            }
            alloc::vec![m; sorted.len()]
        }
    };

    let mut p = Packer {
        cfg: *cfg,
        nfa,
        compiled,
        widths,
        tiles: Vec::new(),
        globals: Vec::new(),
        loc: alloc::vec![None; nfa.len()],
        open: [None; 3],
        next_slot: (0, 0),
    };
    let mut ccs = Vec::with_capacity(sorted.len());

    for (idx, (cc, &mode)) in sorted.iter().zip(&modes).enumerate() {
        let partition = idx as u32;
        let states = bfs_order(nfa, cc);
        let w = mode.segment_width();
        let per = mode.segments();
        if let Some(&s) = states.iter().find(|&&s| p.widths[s] > w) {
            return Err(MapError::StateTooWide {
                state: s,
                entries: p.widths[s],
                mode,
                width: w,
            });
        }
        if mode == TileMode::Rcb16 && opts.force_mode.is_some() {
            let chk = check_rcb_feasible(nfa, compiled, &states, cfg);
            if !chk.feasible {
                return Err(MapError::ForcedModeInvalid {
                    cc: idx,
                    mode,
                    reason: "an edge falls outside the RCB band",
                });
            }
        }
        let (pos, nseg) = layout(&states, &p.widths, w);
        let total = sizes[order[idx]];
        let mi = mode_index(mode);

        let cols = if nseg == 1 {
            let mut candidates: Vec<(usize, usize)> = Vec::new(); // (tile, absolute column)
            if let Some((t, cur)) = p.open[mi] {
                let (seg, off) = (cur / w, cur % w);
                if seg < per && off + total <= w {
                    candidates.push((t, cur));
                }
                if seg + 1 < per {
                    candidates.push((t, (seg + 1) * w));
                }
            }
            let mut chosen = None;
            for (t, start) in candidates {
                let cols = p.resolve(mode, &[t], start / w, start % w, &pos);
                if mode != TileMode::Rcb16 || p.band_ok(&states, &cols) {
                    chosen = Some(cols);
                    break;
                }
            }
            match chosen {
                Some(c) => c,
                None => {
                    let t = p.new_tile(mode);
                    p.resolve(mode, &[t], 0, 0, &pos)
                }
            }
        } else {
            let mut chosen = None;
            if let Some((t, cur)) = p.open[mi] {
                let seg0 = cur.div_ceil(w);
                if seg0 + nseg <= per {
                    let cols = p.resolve(mode, &[t], seg0, 0, &pos);
                    if p.port_demand(mode, &states, &cols).is_ok() {
                        chosen = Some(cols);
                    }
                }
            }
            match chosen {
                Some(c) => c,
                None => {
                    let k = nseg.div_ceil(per);
                    if k > cfg.tiles_per_array {
                        return Err(MapError::CapacityExceeded {
                            cc: idx,
                            needed: total,
                            available: cfg.tiles_per_array * mode.columns(),
                        });
                    }
                    let tiles = p.fresh_tiles(mode, k);
                    let cols = p.resolve(mode, &tiles, 0, 0, &pos);
                    if let Err((dir, needed)) = p.port_demand(mode, &states, &cols) {
                        return Err(MapError::PortOverflow {
                            cc: idx,
                            dir,
                            needed,
                            max: if dir == "send" {
                                cfg.global_ports_out
                            } else {
                                cfg.global_ports_in
                            },
                        });
                    }
                    cols
                }
            }
        };
        p.commit(partition, mode, &states, &cols);
        let (lt, lc) = states
            .iter()
            .map(|&s| p.loc[s].unwrap())
            .map(|l| (l.tile, l.start + l.len))
            .max()
            .unwrap_or((0, 0));
        if !states.is_empty() {
            p.open[mi] = Some((lt, lc));
        }
        let mut tiles: Vec<usize> = cols.iter().map(|c| c.0).collect();
        tiles.sort_unstable();
        tiles.dedup();
        ccs.push(CcPlacement {
            partition,
            array: tiles.first().map_or(0, |&t| p.tiles[t].array),
            mode,
            tiles,
            states,
        });
    }

    let mut stats = MappingStats {
        arrays: p.globals.len(),
        global_switches: p.globals.iter().filter(|g| !g.is_empty()).count(),
        global_routes: p.globals.iter().map(|g| g.pairs().len()).sum(),
        ..MappingStats::default()
    };
    for t in &p.tiles {
        match t.mode {
            TileMode::Rcb16 => stats.rcb_tiles += 1,
            TileMode::Fcb16 => stats.fcb_tiles += 1,
            TileMode::Mode32 => stats.mode32_tiles += 1,
        }
        stats.columns += t.columns.iter().filter(|c| c.is_some()).count();
    }
    let locations = p
        .loc
        .iter()
        .map(|l| l.expect("every state belongs to a component"))
        .collect();
    Ok(Placement {
        config: *cfg,
        scheme,
        encoder: EncoderTable::from_codebook(&compiled.codebook),
        state_count: nfa.len(),
        ccs,
        tiles: p.tiles,
        globals: p.globals,
        locations,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::{glushkov_construct, regex, Ste, SymbolClass};
    use crate::encode::{analyze, cluster_symbols, compile_nfa, select_scheme, Scheme};

    fn chain(n: usize, alphabet: usize) -> HomogeneousNfa {
        let states = (0..n)
            .map(|i| Ste {
                id: i,
                class: SymbolClass::single((i % alphabet) as u8),
                start: if i == 0 {
                    StartKind::StartOfData
                } else {
                    StartKind::None
                },
                reporting: i + 1 == n,
            })
            .collect();
        HomogeneousNfa::new(alphabet, states, (0..n - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn compile_with(nfa: &HomogeneousNfa, scheme: Scheme) -> CompiledNfa {
        compile_nfa(nfa, cluster_symbols(&analyze(nfa), &scheme))
    }

    fn compile(nfa: &HomogeneousNfa) -> CompiledNfa {
        let st = analyze(nfa);
        let scheme = select_scheme(nfa.alphabet_size(), st.avg_class_size, 16, 32).unwrap();
        compile_nfa(nfa, cluster_symbols(&st, &scheme))
    }

    fn example() -> HomogeneousNfa {
        glushkov_construct(
            &regex::parse("(a|b)e*cd+").unwrap(),
            256,
            StartKind::StartOfData,
        )
        .unwrap()
    }

    #[test]
    fn sample_machine_one_rcb_tile() {
        let nfa = example();
        let c = compile(&nfa);
        let p = place(&nfa, &c, &FabricConfig::default(), &MapOptions::default()).unwrap();
        assert_eq!(p.stats.tiles(), 1);
        assert_eq!(p.stats.rcb_tiles, 1);
        let masks = emit_report_mask(&nfa, &p);
        assert_eq!(masks[0].len(), 1);
        assert!(masks[0].contains(p.locations[3].start));
        assert_eq!(masks[0], p.tiles[0].report_mask);
    }

    #[test]
    fn many_small_components_share_a_tile() {
        let one = chain(4, 256);
        let mut nfa = one.clone();
        for _ in 1..21 {
            nfa = nfa.concat(&one).unwrap();
        }
        let c = compile_with(&nfa, Scheme::multi_zeros(11));
        let p = place(&nfa, &c, &FabricConfig::default(), &MapOptions::default()).unwrap();
        assert_eq!(p.stats.tiles(), 1);
        assert_eq!(p.stats.rcb_tiles, 1);
        assert_eq!(p.stats.columns, 84);
        assert_eq!(p.ccs.len(), 21);
    }

    #[test]
    fn long_chain_spills_to_two_tiles() {
        let nfa = chain(600, 256);
        let c = compile_with(&nfa, Scheme::two_zeros_prefix(11, 5));
        let p = place(&nfa, &c, &FabricConfig::default(), &MapOptions::default()).unwrap();
        assert_eq!(p.stats.tiles(), 2);
        assert!(p.stats.global_routes >= 1);
        assert!(!p.tiles[0].send_ports.is_empty());
        assert!(!p.tiles[1].recv_ports.is_empty());
    }

    #[test]
    fn long_code_selects_mode32() {
        let nfa = example();
        let c = compile_with(&nfa, Scheme::one_zero_prefix(16, 16));
        let ccs = connected_components(&nfa);
        let m = choose_app_mode(&c.codebook.scheme, &nfa, &c, &ccs, &FabricConfig::default());
        assert_eq!(m, [TileMode::Mode32]);
        let err = place(
            &nfa,
            &c,
            &FabricConfig::default(),
            &MapOptions {
                force_mode: Some(TileMode::Rcb16),
            },
        )
        .unwrap_err();
        assert!(matches!(err, MapError::ForcedModeInvalid { .. }));
    }

    #[test]
    fn wide_span_falls_back_to_fcb() {
        // 0 -> 1 -> ... -> 119 and a back edge 119 -> 0 spanning 119 columns
        let n = 120;
        let states = (0..n)
            .map(|i| Ste {
                id: i,
                class: SymbolClass::single(i as u8),
                start: if i == 0 {
                    StartKind::AllInput
                } else {
                    StartKind::None
                },
                reporting: false,
            })
            .collect();
        let edges = (0..n - 1).map(|i| (i, i + 1)).chain([(n - 1, 0)]);
        let nfa = HomogeneousNfa::new(256, states, edges).unwrap();
        let c = compile_with(&nfa, Scheme::two_zeros_prefix(11, 5));
        let order: Vec<_> = (0..n).collect();
        let chk = check_rcb_feasible(&nfa, &c, &order, &FabricConfig::default());
        assert!(!chk.feasible);
        assert_eq!(chk.offending, [(n - 1, 0)]);
        let p = place(&nfa, &c, &FabricConfig::default(), &MapOptions::default()).unwrap();
        assert_eq!(p.stats.fcb_tiles, 1);
    }

    #[test]
    fn fcb_split_uses_global_ports() {
        let nfa = chain(200, 256);
        let c = compile_with(&nfa, Scheme::two_zeros_prefix(11, 5));
        let opts = MapOptions {
            force_mode: Some(TileMode::Fcb16),
        };
        let p = place(&nfa, &c, &FabricConfig::default(), &opts).unwrap();
        assert_eq!(p.stats.fcb_tiles, 1);
        assert_eq!(p.tiles[0].send_ports.len(), 1);
        assert_eq!(p.tiles[0].recv_ports.len(), 1);
        assert_eq!(p.stats.global_routes, 1);
    }

    #[test]
    fn too_many_cross_sources() {
        // 18 states unreachable from the start sort last (block 1) and each
        // feed a chain state in block 0
        let n = 128 + 18;
        let mut states: Vec<Ste> = (0..n)
            .map(|i| Ste {
                id: i,
                class: SymbolClass::single(1),
                start: StartKind::None,
                reporting: false,
            })
            .collect();
        states[0].start = StartKind::AllInput;
        let edges = (0..127)
            .map(|i| (i, i + 1))
            .chain((0..18).map(|k| (128 + k, k)));
        let nfa = HomogeneousNfa::new(256, states, edges).unwrap();
        let c = compile_with(&nfa, Scheme::two_zeros_prefix(11, 5));
        let opts = MapOptions {
            force_mode: Some(TileMode::Fcb16),
        };
        let err = place(&nfa, &c, &FabricConfig::default(), &opts).unwrap_err();
        assert!(
            matches!(err, MapError::PortOverflow { dir: "send", .. }),
            "{err:?}"
        );
    }

    #[test]
    fn component_larger_than_array() {
        let nfa = chain(8 * 512 + 1, 256);
        let c = compile_with(&nfa, Scheme::two_zeros_prefix(11, 5));
        let err = place(&nfa, &c, &FabricConfig::default(), &MapOptions::default()).unwrap_err();
        assert!(matches!(err, MapError::CapacityExceeded { .. }));
    }
}
