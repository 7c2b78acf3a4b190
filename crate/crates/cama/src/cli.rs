// SPDX-License-Identifier: Apache-2.0
//! Subcommands. Each writes its primary output to the given writer and its
//! artifacts to files; errors carry the exit code.

use std::io::Write;
use std::path::{Path, PathBuf};

use cama_core::automata::{connected_components, interpret};
use cama_core::cost::{cost_report, CostParams, CostReport};
use cama_core::fabric::TileMode;
use cama_core::sim::{self, run_oracle_compare, CompareError, SimError, Version};
use cama_core::{HomogeneousNfa, StartKind};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::artifact::{
    placement_dump, read_placement, to_json, write_file, CodebookArtifact, PlacementArtifact,
};
use crate::error::{Error, Result};
use crate::fuzz::{self, Fault, FuzzConfig};
use crate::manifest::RunManifest;
use crate::nfa_io::load_nfa;
use crate::params::{default_toml, load_params};
use crate::pipeline::{self, Compiled};
use crate::records::render_reports;
use crate::trace_csv::{read_trace, write_trace};
use crate::Format;

#[derive(Debug, Parser)]
#[command(
    name = "cama",
    about = "Compile, map, simulate and cost homogeneous NFAs on a CAM fabric"
)]
pub struct Cli {
    /// Seed for generated cases; recorded in manifests.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    pub format: Format,
    /// TOML file overriding cost parameters.
    #[arg(long, global = true)]
    pub params: Option<PathBuf>,
    /// Write a readable dump of tiles and switch programs.
    #[arg(long, global = true)]
    pub dump_placement: Option<PathBuf>,
    /// Write the per-cycle activity trace as CSV.
    #[arg(long, global = true)]
    pub trace: Option<PathBuf>,
    /// Alphabet size for inputs that do not declare one (default 256).
    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..=256))]
    pub alphabet: Option<u16>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Rcb16,
    Fcb16,
    Mode32,
}

impl From<ModeArg> for TileMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Rcb16 => TileMode::Rcb16,
            ModeArg::Fcb16 => TileMode::Fcb16,
            ModeArg::Mode32 => TileMode::Mode32,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    StartOfData,
    AllInput,
}

impl From<StartArg> for StartKind {
    fn from(s: StartArg) -> Self {
        match s {
            StartArg::StartOfData => StartKind::StartOfData,
            StartArg::AllInput => StartKind::AllInput,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VersionArg {
    E,
    T,
}

impl From<VersionArg> for Version {
    fn from(v: VersionArg) -> Self {
        match v {
            VersionArg::E => Version::E,
            VersionArg::T => Version::T,
        }
    }
}

#[derive(Debug, Args)]
pub struct NfaArgs {
    /// NFA as `.json`, or a regex list with one pattern per line.
    pub nfa: PathBuf,
    /// Start kind given to regex patterns.
    #[arg(long, value_enum, default_value_t = StartArg::AllInput)]
    pub start: StartArg,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DataArgs {
    /// Input file; every byte is one symbol.
    pub input: Option<PathBuf>,
    /// Inline input text.
    #[arg(long)]
    pub text: Option<String>,
    /// Inline input as hex bytes.
    #[arg(long)]
    pub hex: Option<String>,
}

impl DataArgs {
    fn load(&self) -> Result<(Vec<u8>, Option<&Path>)> {
        if let Some(p) = &self.input {
            return Ok((std::fs::read(p).map_err(Error::io(p))?, Some(p)));
        }
        if let Some(t) = &self.text {
            return Ok((t.as_bytes().to_vec(), None));
        }
        let h = self.hex.as_deref().unwrap_or_default();
        let bytes = hex::decode(h).map_err(|e| Error::input(format!("--hex: {e}")))?;
        Ok((bytes, None))
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Choose an encoding, compile CAM entries and map them onto tiles.
    Compile {
        #[command(flatten)]
        nfa: NfaArgs,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        #[arg(long, value_enum)]
        force_mode: Option<ModeArg>,
    },
    /// Run a compiled placement over an input.
    Sim {
        placement: PathBuf,
        #[command(flatten)]
        data: DataArgs,
        #[arg(long = "version", value_enum, default_value_t = VersionArg::E)]
        version: VersionArg,
        /// Write reports here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Energy, power, area and throughput of a traced run.
    Cost {
        #[arg(required_unless_present = "dump_default_config")]
        placement: Option<PathBuf>,
        #[arg(required_unless_present = "dump_default_config")]
        trace_file: Option<PathBuf>,
        /// Print the default cost parameters as TOML and exit.
        #[arg(long)]
        dump_default_config: bool,
    },
    /// Reports of the reference interpreter.
    Oracle {
        #[command(flatten)]
        nfa: NfaArgs,
        #[command(flatten)]
        data: DataArgs,
    },
    /// Random cases through compile, map and both simulators, checked
    /// against the interpreter.
    Fuzz {
        #[arg(long, default_value_t = 100)]
        cases: u64,
        #[arg(long, default_value_t = 256)]
        max_input: usize,
        /// Where the shrunk counterexample is written.
        #[arg(long, default_value = "cama-counterexample.json")]
        counterexample: PathBuf,
        /// Corrupt each placement to check that divergences are caught.
        #[arg(long)]
        inject_fault: bool,
        /// Continue after the first divergence.
        #[arg(long)]
        keep_going: bool,
    },
    /// Check both simulators against the interpreter in every mode.
    Compare {
        #[command(flatten)]
        nfa: NfaArgs,
        #[command(flatten)]
        data: DataArgs,
        /// Check only this mode.
        #[arg(long, value_enum)]
        force_mode: Option<ModeArg>,
    },
}

fn alphabet(cli: &Cli) -> Option<usize> {
    cli.alphabet.map(usize::from)
}

fn emit(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes()).map_err(Error::io("<stdout>"))
}

/// Key/value rows in the chosen format.
fn render_kv(
    format: Format,
    manifest: &RunManifest,
    doc: &impl Serialize,
    rows: &[(&str, String)],
) -> String {
    match format {
        Format::Json => to_json(doc),
        Format::Csv => {
            let mut s = format!("# manifest: {}\nkey,value\n", manifest.to_line());
            for (k, v) in rows {
                s.push_str(&format!("{k},{v}\n"));
            }
            s
        }
        Format::Table => {
            let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            let mut s = format!("# manifest: {}\n", manifest.to_line());
            for (k, v) in rows {
                s.push_str(&format!("{k:<w$}  {v}\n"));
            }
            s
        }
    }
}

pub fn run(cli: Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Compile {
            nfa,
            out_dir,
            force_mode,
        } => cmd_compile(&cli, nfa, out_dir, *force_mode, out),
        Command::Sim {
            placement,
            data,
            version,
            out: dest,
        } => cmd_sim(
            &cli,
            placement,
            data,
            (*version).into(),
            dest.as_deref(),
            out,
        ),
        Command::Cost {
            dump_default_config: true,
            ..
        } => emit(out, &default_toml()),
        Command::Cost {
            placement,
            trace_file,
            ..
        } => cmd_cost(
            &cli,
            placement.as_deref().expect("required by clap"),
            trace_file.as_deref().expect("required by clap"),
            out,
        ),
        Command::Oracle { nfa, data } => cmd_oracle(&cli, nfa, data, out),
        Command::Fuzz {
            cases,
            max_input,
            counterexample,
            inject_fault,
            keep_going,
        } => {
            let cfg = FuzzConfig {
                seed: cli.seed.unwrap_or(0),
                cases: *cases,
                max_input: *max_input,
                fault: inject_fault.then_some(Fault::DropLocalEdge),
                stop_early: !keep_going,
            };
            cmd_fuzz(&cli, &cfg, counterexample, out)
        }
        Command::Compare {
            nfa,
            data,
            force_mode,
        } => cmd_compare(&cli, nfa, data, *force_mode, out),
    }
}

fn load(cli: &Cli, a: &NfaArgs) -> Result<(HomogeneousNfa, RunManifest)> {
    let (nfa, bytes) = load_nfa(&a.nfa, alphabet(cli), a.start.into())?;
    let manifest = RunManifest {
        seed: cli.seed,
        ..RunManifest::default()
    }
    .with_input("nfa", Some(&a.nfa), &bytes);
    Ok((nfa, manifest))
}

#[derive(Serialize)]
struct CompileStats {
    manifest: RunManifest,
    scheme: String,
    code_len: usize,
    prefix_len: usize,
    suffix_len: usize,
    alphabet: usize,
    avg_class_size: f64,
    states: usize,
    edges: usize,
    components: usize,
    entries: usize,
    rcb_tiles: usize,
    fcb_tiles: usize,
    mode32_tiles: usize,
    arrays: usize,
    global_routes: usize,
}

fn cmd_compile(
    cli: &Cli,
    a: &NfaArgs,
    out_dir: &Path,
    force: Option<ModeArg>,
    out: &mut dyn Write,
) -> Result<()> {
    let (nfa, mut manifest) = load(cli, a)?;
    let c: Compiled = pipeline::compile(&nfa, force.map(Into::into))?;
    manifest.scheme = Some(c.scheme);
    manifest.mode_stats = Some(c.placement.stats);

    std::fs::create_dir_all(out_dir).map_err(Error::io(out_dir))?;
    write_file(
        &out_dir.join("codebook.json"),
        &to_json(&CodebookArtifact::new(manifest.clone(), &c)),
    )?;
    write_file(
        &out_dir.join("placement.json"),
        &to_json(&PlacementArtifact::new(
            manifest.clone(),
            c.placement.clone(),
        )),
    )?;
    if let Some(p) = &cli.dump_placement {
        write_file(p, &placement_dump(&manifest, &c.placement))?;
    }

    let st = &c.placement.stats;
    let doc = CompileStats {
        manifest: manifest.clone(),
        scheme: format!("{:?}", c.scheme.kind),
        code_len: c.scheme.code_len,
        prefix_len: c.scheme.prefix_len,
        suffix_len: c.scheme.suffix_len,
        alphabet: nfa.alphabet_size(),
        avg_class_size: c.stats.avg_class_size.to_f64(),
        states: nfa.len(),
        edges: nfa.edge_count(),
        components: connected_components(&nfa).len(),
        entries: c.compiled.total_entries(),
        rcb_tiles: st.rcb_tiles,
        fcb_tiles: st.fcb_tiles,
        mode32_tiles: st.mode32_tiles,
        arrays: st.arrays,
        global_routes: st.global_routes,
    };
    let rows = [
        ("scheme", doc.scheme.clone()),
        ("code_len", doc.code_len.to_string()),
        ("prefix_len", doc.prefix_len.to_string()),
        ("suffix_len", doc.suffix_len.to_string()),
        ("alphabet", doc.alphabet.to_string()),
        ("avg_class_size", format!("{:.4}", doc.avg_class_size)),
        ("states", doc.states.to_string()),
        ("edges", doc.edges.to_string()),
        ("components", doc.components.to_string()),
        ("entries", doc.entries.to_string()),
        ("rcb_tiles", doc.rcb_tiles.to_string()),
        ("fcb_tiles", doc.fcb_tiles.to_string()),
        ("mode32_tiles", doc.mode32_tiles.to_string()),
        ("arrays", doc.arrays.to_string()),
        ("global_routes", doc.global_routes.to_string()),
    ];
    emit(out, &render_kv(cli.format, &manifest, &doc, &rows))
}

fn cmd_sim(
    cli: &Cli,
    path: &Path,
    data: &DataArgs,
    version: Version,
    dest: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let (art, bytes) = read_placement(path)?;
    let (input, input_path) = data.load()?;
    let p = &art.placement;
    let manifest = RunManifest {
        scheme: Some(p.scheme),
        mode_stats: Some(p.stats),
        seed: cli.seed,
        ..RunManifest::default()
    }
    .with_input("placement", Some(path), &bytes)
    .with_input("input", input_path, &input);
    let (reports, trace) = sim::run(p, &input, version).map_err(|e| match e {
        SimError::SymbolOutOfRange { .. } => {
            Error::input(format!("input does not fit the placement: {e}"))
        }
    })?;
    if let Some(t) = &cli.trace {
        write_file(
            t,
            &write_trace(&trace, p.tiles.len(), &art.placement_sha256, &manifest),
        )?;
    }
    let text = render_reports(cli.format, &manifest, &reports);
    match dest {
        Some(d) => write_file(d, &text),
        None => emit(out, &text),
    }
}

#[derive(Serialize)]
struct CostDoc<'a> {
    manifest: &'a RunManifest,
    params: &'a CostParams,
    report: &'a CostReport,
}

fn cmd_cost(cli: &Cli, placement: &Path, trace: &Path, out: &mut dyn Write) -> Result<()> {
    let (art, pbytes) = read_placement(placement)?;
    let tbytes = std::fs::read(trace).map_err(Error::io(trace))?;
    let text = std::str::from_utf8(&tbytes).map_err(|_| Error::input("trace: not UTF-8"))?;
    let tf = read_trace(text)?;
    if tf.placement_sha256 != art.placement_sha256 {
        return Err(Error::input(format!(
            "stale trace: produced on placement {} but {} is {}",
            tf.placement_sha256,
            placement.display(),
            art.placement_sha256
        )));
    }
    let (params, params_sha256) = load_params(cli.params.as_deref())?;
    let p = &art.placement;
    let r = cost_report(&tf.trace, p, &params).map_err(|e| Error::input(e.to_string()))?;
    let manifest = RunManifest {
        scheme: Some(p.scheme),
        mode_stats: Some(p.stats),
        seed: cli.seed,
        params_sha256,
        ..RunManifest::default()
    }
    .with_input("placement", Some(placement), &pbytes)
    .with_input("trace", Some(trace), &tbytes);
    let rows = [
        ("version", format!("{:?}", r.version).to_lowercase()),
        ("symbols", r.symbols.to_string()),
        ("total_energy_j", format!("{:.6e}", r.total_energy_j)),
        (
            "energy_per_symbol_nj",
            format!("{:.6}", r.energy_per_symbol_nj),
        ),
        (
            "state_matching_pj",
            format!("{:.3}", r.energy_pj.state_matching),
        ),
        (
            "interconnect_pj",
            format!("{:.3}", r.energy_pj.interconnect),
        ),
        ("encoder_pj", format!("{:.3}", r.energy_pj.encoder)),
        (
            "share_state_matching",
            format!("{:.4}", r.breakdown.state_matching),
        ),
        (
            "share_interconnect",
            format!("{:.4}", r.breakdown.interconnect),
        ),
        ("share_encoder", format!("{:.4}", r.breakdown.encoder)),
        ("dynamic_power_w", format!("{:.6e}", r.power.dynamic_w)),
        ("leakage_power_w", format!("{:.6e}", r.power.leakage_w)),
        ("total_power_w", format!("{:.6e}", r.power.total_w)),
        ("area_um2", format!("{:.3}", r.area_um2)),
        ("throughput_gbps", format!("{:.2}", r.throughput_gbps)),
        (
            "compute_density_gbps_per_mm2",
            format!("{:.3}", r.compute_density_gbps_per_mm2),
        ),
    ];
    let doc = CostDoc {
        manifest: &manifest,
        params: &params,
        report: &r,
    };
    emit(out, &render_kv(cli.format, &manifest, &doc, &rows))
}

fn cmd_oracle(cli: &Cli, a: &NfaArgs, data: &DataArgs, out: &mut dyn Write) -> Result<()> {
    let (nfa, manifest) = load(cli, a)?;
    let (input, input_path) = data.load()?;
    let manifest = manifest.with_input("input", input_path, &input);
    let reports = interpret(&nfa, &input).map_err(|e| Error::input(e.to_string()))?;
    emit(out, &render_reports(cli.format, &manifest, &reports))
}

#[derive(Serialize)]
struct CompareRow {
    mode: String,
    status: String,
    reports: usize,
}

fn cmd_compare(
    cli: &Cli,
    a: &NfaArgs,
    data: &DataArgs,
    force: Option<ModeArg>,
    out: &mut dyn Write,
) -> Result<()> {
    let (nfa, manifest) = load(cli, a)?;
    let (input, input_path) = data.load()?;
    let manifest = manifest.with_input("input", input_path, &input);
    let modes: Vec<Option<TileMode>> = match force {
        Some(m) => vec![Some(m.into())],
        None => fuzz::MODES.to_vec(),
    };
    let mut rows = Vec::new();
    let mut failure = None;
    for mode in modes {
        let name = mode.map_or_else(|| "auto".to_string(), |m| format!("{m:?}").to_lowercase());
        let c = match pipeline::compile(&nfa, mode) {
            Ok(c) => c,
            // a forced mode may legitimately not fit; the chosen mode must
            Err(Error::Map(e)) if mode.is_some() && force.is_none() => {
                rows.push(CompareRow {
                    mode: name,
                    status: format!("unmappable: {e}"),
                    reports: 0,
                });
                continue;
            }
            Err(e) => return Err(e),
        };
        match run_oracle_compare(&nfa, &c.placement, &input) {
            Ok(n) => rows.push(CompareRow {
                mode: name,
                status: "agree".into(),
                reports: n,
            }),
            Err(CompareError::Divergence(d)) => {
                failure.get_or_insert_with(|| format!("{name}: {d}"));
                rows.push(CompareRow {
                    mode: name,
                    status: format!("diverged: {d}"),
                    reports: d.actual_total,
                });
            }
            Err(e) => return Err(Error::input(e.to_string())),
        }
    }
    let kv: Vec<(&str, String)> = rows
        .iter()
        .map(|r| {
            (
                r.mode.as_str(),
                format!("{} ({} reports)", r.status, r.reports),
            )
        })
        .collect();
    #[derive(Serialize)]
    struct Doc<'a> {
        manifest: &'a RunManifest,
        modes: &'a [CompareRow],
    }
    emit(
        out,
        &render_kv(
            cli.format,
            &manifest,
            &Doc {
                manifest: &manifest,
                modes: &rows,
            },
            &kv,
        ),
    )?;
    match failure {
        Some(f) => Err(Error::Divergence(f)),
        None => Ok(()),
    }
}

fn cmd_fuzz(cli: &Cli, cfg: &FuzzConfig, cx_path: &Path, out: &mut dyn Write) -> Result<()> {
    let s = fuzz::fuzz(cfg);
    let manifest = RunManifest {
        seed: Some(cfg.seed),
        ..RunManifest::default()
    };
    if let Some(cx) = &s.counterexample {
        #[derive(Serialize)]
        struct Doc<'a> {
            manifest: &'a RunManifest,
            counterexample: &'a fuzz::Counterexample,
        }
        write_file(
            cx_path,
            &to_json(&Doc {
                manifest: &manifest,
                counterexample: cx,
            }),
        )?;
    }
    let rows = [
        ("seed", s.seed.to_string()),
        ("cases", s.cases.to_string()),
        ("passed", s.passed.to_string()),
        ("skipped", s.skipped.to_string()),
        ("diverged", s.diverged.to_string()),
        ("reports", s.reports.to_string()),
    ];
    #[derive(Serialize)]
    struct Doc<'a> {
        manifest: &'a RunManifest,
        summary: &'a fuzz::FuzzSummary,
    }
    emit(
        out,
        &render_kv(
            cli.format,
            &manifest,
            &Doc {
                manifest: &manifest,
                summary: &s,
            },
            &rows,
        ),
    )?;
    match &s.counterexample {
        Some(cx) => Err(Error::Divergence(format!(
            "case {} diverged ({}); shrunk counterexample written to {}",
            cx.original.index,
            cx.detail,
            cx_path.display()
        ))),
        None => Ok(()),
    }
}
