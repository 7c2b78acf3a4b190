// SPDX-License-Identifier: Apache-2.0
//! Energy, power, area and throughput from 28nm block models.
//!
//! Energies are in pJ, delays in ps, areas in µm², leakage in µA, frequencies
//! in GHz. Report fields carry SI units where named so.

use crate::mapper::Placement;
use crate::sim::{ActivityTrace, CycleTrace, Version};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BlockModel {
    pub energy_pj: f64,
    pub delay_ps: f64,
    pub area_um2: f64,
    pub leakage_ua: f64,
}

impl BlockModel {
    pub const fn new(energy_pj: f64, delay_ps: f64, area_um2: f64, leakage_ua: f64) -> Self {
        BlockModel {
            energy_pj,
            delay_ps,
            area_um2,
            leakage_ua,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostParams {
    pub sram6t_256x256: BlockModel,
    pub sram6t_16x256: BlockModel,
    /// One RRCB.
    pub sram8t_128x128: BlockModel,
    /// One global switch.
    pub sram8t_256x256: BlockModel,
    /// One CAM sub-array.
    pub cam8t_16x256: BlockModel,
    pub freq_e_ghz: f64,
    pub freq_t_ghz: f64,
    pub cam_e_min_pj: f64,
    pub cam_e_max_pj: f64,
    /// Share of a local-switch access that does not scale with active rows.
    pub periphery_fraction: f64,
    pub supply_v: f64,
    pub encoder_energy_pj: f64,
    /// Encoder block size relative to a 6T 16×256 array (256×32 bits).
    pub encoder_scale: f64,
    /// Informational; frequencies already include it.
    pub global_wire_delay_ps: f64,
    pub bits_per_cycle: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        CostParams {
            sram6t_256x256: BlockModel::new(19.45, 416.0, 14877.0, 532.0),
            sram6t_16x256: BlockModel::new(15.3, 317.0, 3659.0, 247.0),
            sram8t_128x128: BlockModel::new(8.67, 292.0, 5655.0, 243.0),
            sram8t_256x256: BlockModel::new(17.9, 394.0, 18153.0, 584.0),
            cam8t_16x256: BlockModel::new(16.78, 325.0, 3919.0, 299.0),
            freq_e_ghz: 1.21,
            freq_t_ghz: 2.14,
            cam_e_min_pj: 2.67,
            cam_e_max_pj: 16.78,
            periphery_fraction: 0.8,
            supply_v: 0.9,
            encoder_energy_pj: 2.4,
            encoder_scale: 32.0 / 256.0,
            global_wire_delay_ps: 99.0,
            bits_per_cycle: 8.0,
        }
    }
}

/// Stage delays and frequencies of other designs, kept for reference only.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReferenceDesign {
    pub name: &'static str,
    pub state_match_ps: Option<f64>,
    pub local_switch_ps: Option<f64>,
    pub global_switch_ps: Option<f64>,
    pub freq_max_ghz: f64,
    pub freq_operated_ghz: f64,
}

pub const REFERENCE_DESIGNS: [ReferenceDesign; 6] = [
    ReferenceDesign {
        name: "CAMA-E",
        state_match_ps: Some(325.0),
        local_switch_ps: Some(292.0),
        global_switch_ps: Some(420.1),
        freq_max_ghz: 1.34,
        freq_operated_ghz: 1.21,
    },
    ReferenceDesign {
        name: "CAMA-T",
        state_match_ps: Some(325.0),
        local_switch_ps: Some(292.0),
        global_switch_ps: Some(420.1),
        freq_max_ghz: 2.38,
        freq_operated_ghz: 2.14,
    },
    ReferenceDesign {
        name: "2-stride Impala",
        state_match_ps: Some(317.0),
        local_switch_ps: Some(394.0),
        global_switch_ps: Some(442.69),
        freq_max_ghz: 2.26,
        freq_operated_ghz: 2.03,
    },
    ReferenceDesign {
        name: "eAP",
        state_match_ps: Some(394.0),
        local_switch_ps: Some(394.0),
        global_switch_ps: Some(515.0),
        freq_max_ghz: 1.94,
        freq_operated_ghz: 1.75,
    },
    ReferenceDesign {
        name: "CA",
        state_match_ps: Some(416.0),
        local_switch_ps: Some(394.0),
        global_switch_ps: Some(493.0),
        freq_max_ghz: 2.03,
        freq_operated_ghz: 1.82,
    },
    ReferenceDesign {
        name: "AP",
        state_match_ps: None,
        local_switch_ps: None,
        global_switch_ps: None,
        freq_max_ghz: 0.133,
        freq_operated_ghz: 0.133,
    },
];

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CostError {
    #[error("trace has {trace} tiles per cycle but the placement has {placement}")]
    Mismatch { trace: usize, placement: usize },
    #[error("parameter {0} must be strictly positive")]
    NonPositive(&'static str),
}

impl CostParams {
    pub fn validate(&self) -> Result<(), CostError> {
        let blocks = [
            ("sram6t_256x256", &self.sram6t_256x256),
            ("sram6t_16x256", &self.sram6t_16x256),
            ("sram8t_128x128", &self.sram8t_128x128),
            ("sram8t_256x256", &self.sram8t_256x256),
            ("cam8t_16x256", &self.cam8t_16x256),
        ];
        for (name, b) in blocks {
            if !(b.energy_pj > 0.0 && b.delay_ps > 0.0 && b.area_um2 > 0.0 && b.leakage_ua > 0.0) {
                return Err(CostError::NonPositive(name));
            }
        }
        let scalars = [
            ("freq_e_ghz", self.freq_e_ghz),
            ("freq_t_ghz", self.freq_t_ghz),
            ("cam_e_min_pj", self.cam_e_min_pj),
            ("cam_e_max_pj", self.cam_e_max_pj),
            ("periphery_fraction", self.periphery_fraction),
            ("supply_v", self.supply_v),
            ("encoder_energy_pj", self.encoder_energy_pj),
            ("encoder_scale", self.encoder_scale),
            ("global_wire_delay_ps", self.global_wire_delay_ps),
            ("bits_per_cycle", self.bits_per_cycle),
        ];
        for (name, v) in scalars {
            // NaN fails too
            if v.partial_cmp(&0.0) != Some(core::cmp::Ordering::Greater) {
                return Err(CostError::NonPositive(name));
            }
        }
        Ok(())
    }

    pub fn freq_ghz(&self, v: Version) -> f64 {
        match v {
            Version::E => self.freq_e_ghz,
            Version::T => self.freq_t_ghz,
        }
    }

    /// CAM sub-array access energy with `enabled` precharged entries, linear
    /// between the two endpoints.
    pub fn cam_energy_pj(&self, enabled: usize) -> f64 {
        self.cam_e_min_pj + (self.cam_e_max_pj - self.cam_e_min_pj) * enabled as f64 / 256.0
    }

    /// Local switch access energy with `rows` of 384 source rows active.
    pub fn local_switch_pj(&self, rows: usize) -> f64 {
        let pf = self.periphery_fraction;
        self.sram8t_128x128.energy_pj * (pf + (1.0 - pf) * rows as f64 / 384.0)
    }
}

/// Energy of one cycle split by component, in pJ.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EnergyParts {
    pub state_matching: f64,
    pub interconnect: f64,
    pub encoder: f64,
}

impl EnergyParts {
    pub fn total(&self) -> f64 {
        self.state_matching + self.interconnect + self.encoder
    }

    fn add(&mut self, o: &EnergyParts) {
        self.state_matching += o.state_matching;
        self.interconnect += o.interconnect;
        self.encoder += o.encoder;
    }
}

/// Dynamic energy of one trace row. A sub-array with no precharged entry
/// draws nothing; otherwise CAMA-E pays the interpolated energy and CAMA-T
/// the full-array energy.
pub fn energy_parts_of_cycle(
    cycle: &CycleTrace,
    version: Version,
    params: &CostParams,
) -> EnergyParts {
    let mut e = EnergyParts::default();
    for t in &cycle.tiles {
        for s in 0..2 {
            let n = t.enabled[s] as usize;
            if n > 0 {
                e.state_matching += match version {
                    Version::E => params.cam_energy_pj(n),
                    Version::T => params.cam_e_max_pj,
                };
            }
            if t.switch_accessed[s] {
                e.interconnect += params.local_switch_pj(t.active_rows[s] as usize);
            }
        }
    }
    e.interconnect += cycle.global_accesses as f64 * params.sram8t_256x256.energy_pj;
    if cycle.encoder {
        e.encoder += params.encoder_energy_pj;
    }
    e
}

/// Dynamic energy of one trace row in joules.
pub fn energy_of_cycle(
    cycle: &CycleTrace,
    placement: &Placement,
    version: Version,
    params: &CostParams,
) -> Result<f64, CostError> {
    check(cycle, placement)?;
    Ok(energy_parts_of_cycle(cycle, version, params).total() * 1e-12)
}

fn check(cycle: &CycleTrace, placement: &Placement) -> Result<(), CostError> {
    if cycle.tiles.len() != placement.tiles.len() {
        return Err(CostError::Mismatch {
            trace: cycle.tiles.len(),
            placement: placement.tiles.len(),
        });
    }
    Ok(())
}

/// Total energy of a run split by component, in pJ.
pub fn energy_parts(
    trace: &ActivityTrace,
    placement: &Placement,
    params: &CostParams,
) -> Result<EnergyParts, CostError> {
    let mut sum = EnergyParts::default();
    for c in &trace.cycles {
        check(c, placement)?;
        sum.add(&energy_parts_of_cycle(c, trace.version, params));
    }
    Ok(sum)
}

pub fn encoder_area_um2(params: &CostParams) -> f64 {
    params.sram6t_16x256.area_um2 * params.encoder_scale
}

pub fn tile_area_um2(params: &CostParams) -> f64 {
    2.0 * params.cam8t_16x256.area_um2 + 2.0 * params.sram8t_128x128.area_um2
}

/// Instantiated tiles, one global switch per used array, and the encoder.
pub fn area_of(placement: &Placement, params: &CostParams) -> f64 {
    placement.tiles.len() as f64 * tile_area_um2(params)
        + placement.globals.len() as f64 * params.sram8t_256x256.area_um2
        + encoder_area_um2(params)
}

/// Leakage current of the instantiated blocks in µA.
pub fn leakage_ua(placement: &Placement, params: &CostParams) -> f64 {
    placement.tiles.len() as f64
        * (2.0 * params.cam8t_16x256.leakage_ua + 2.0 * params.sram8t_128x128.leakage_ua)
        + placement.globals.len() as f64 * params.sram8t_256x256.leakage_ua
        + params.sram6t_16x256.leakage_ua * params.encoder_scale
}

/// One symbol per cycle.
pub fn throughput_of(version: Version, params: &CostParams) -> f64 {
    params.freq_ghz(version) * params.bits_per_cycle
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Power {
    pub dynamic_w: f64,
    pub leakage_w: f64,
    pub total_w: f64,
}

/// Average power. Dynamic power uses the symbol count as the cycle basis, so
/// it is intensive in input length; leakage is current times supply.
pub fn power_of(
    trace: &ActivityTrace,
    placement: &Placement,
    version: Version,
    params: &CostParams,
) -> Result<Power, CostError> {
    let mut energy_pj = 0.0;
    for c in &trace.cycles {
        check(c, placement)?;
        energy_pj += energy_parts_of_cycle(c, version, params).total();
    }
    let dynamic_w = if trace.symbols == 0 {
        0.0
    } else {
        energy_pj * 1e-12 * params.freq_ghz(version) * 1e9 / trace.symbols as f64
    };
    let leakage_w = leakage_ua(placement, params) * 1e-6 * params.supply_v;
    Ok(Power {
        dynamic_w,
        leakage_w,
        total_w: dynamic_w + leakage_w,
    })
}

/// Energy shares. All zero for a run with no dynamic energy.
pub fn breakdown(parts: &EnergyParts) -> EnergyParts {
    let total = parts.total();
    if total <= 0.0 {
        return EnergyParts::default();
    }
    EnergyParts {
        state_matching: parts.state_matching / total,
        interconnect: parts.interconnect / total,
        encoder: parts.encoder / total,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CostReport {
    pub version: Version,
    pub symbols: u64,
    pub total_energy_j: f64,
    pub energy_per_symbol_nj: f64,
    pub energy_pj: EnergyParts,
    pub power: Power,
    pub area_um2: f64,
    pub throughput_gbps: f64,
    pub compute_density_gbps_per_mm2: f64,
    pub breakdown: EnergyParts,
}

pub fn cost_report(
    trace: &ActivityTrace,
    placement: &Placement,
    params: &CostParams,
) -> Result<CostReport, CostError> {
    params.validate()?;
    let parts = energy_parts(trace, placement, params)?;
    let total_j = parts.total() * 1e-12;
    let area = area_of(placement, params);
    let tput = throughput_of(trace.version, params);
    Ok(CostReport {
        version: trace.version,
        symbols: trace.symbols as u64,
        total_energy_j: total_j,
        energy_per_symbol_nj: if trace.symbols == 0 {
            0.0
        } else {
            total_j * 1e9 / trace.symbols as f64
        },
        energy_pj: parts,
        power: power_of(trace, placement, trace.version, params)?,
        area_um2: area,
        throughput_gbps: tput,
        compute_density_gbps_per_mm2: tput / (area * 1e-6),
        breakdown: breakdown(&parts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::TileCycle;
    use alloc::vec;

    #[test]
    fn cam_endpoints() {
        let p = CostParams::default();
        assert_eq!(p.cam_energy_pj(0), 2.67);
        assert_eq!(p.cam_energy_pj(256), 16.78);
        assert!((p.cam_energy_pj(128) - 9.725).abs() < 1e-12);
    }

    #[test]
    fn throughputs() {
        let p = CostParams::default();
        assert!((throughput_of(Version::T, &p) - 17.12).abs() < 1e-9);
        assert!((throughput_of(Version::E, &p) - 9.68).abs() < 1e-9);
    }

    #[test]
    fn local_switch_scaling() {
        let p = CostParams::default();
        assert!((p.local_switch_pj(0) - 8.67 * 0.8).abs() < 1e-12);
        assert!((p.local_switch_pj(384) - 8.67).abs() < 1e-12);
    }

    #[test]
    fn selective_precharge_dominates() {
        let p = CostParams::default();
        let row = CycleTrace {
            tiles: vec![TileCycle {
                enabled: [40, 0],
                matches: 3,
                active_rows: [5, 0],
                switch_accessed: [true, false],
                global_sends: 0,
            }],
            encoder: true,
            reports: 0,
            global_accesses: 0,
        };
        let e = energy_parts_of_cycle(&row, Version::E, &p).total();
        let t = energy_parts_of_cycle(&row, Version::T, &p).total();
        assert!(e < t);
    }

    #[test]
    fn defaults_validate() {
        assert!(CostParams::default().validate().is_ok());
        let p = CostParams {
            supply_v: 0.0,
            ..CostParams::default()
        };
        assert_eq!(p.validate(), Err(CostError::NonPositive("supply_v")));
    }
}
