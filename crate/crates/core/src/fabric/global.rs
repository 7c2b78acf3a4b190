// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;

use super::{FabricConfig, FabricError};

/// One array's global switch. Slot `tile · ports + port` on either side; a
/// send slot's row is a mask over receive slots.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GlobalProgram {
    pub ports_out: usize,
    pub ports_in: usize,
    pub rows: Vec<u128>,
}

impl GlobalProgram {
    pub fn new(cfg: &FabricConfig) -> Self {
        assert!(cfg.tiles_per_array * cfg.global_ports_in <= 128);
        GlobalProgram {
            ports_out: cfg.global_ports_out,
            ports_in: cfg.global_ports_in,
            rows: alloc::vec![0; cfg.tiles_per_array * cfg.global_ports_out],
        }
    }

    pub fn tiles(&self) -> usize {
        self.rows.len() / self.ports_out
    }

    pub fn connect(
        &mut self,
        src_tile: usize,
        src_port: usize,
        dst_tile: usize,
        dst_port: usize,
    ) -> Result<(), FabricError> {
        if src_port >= self.ports_out {
            return Err(FabricError::PortOverflow {
                tile: src_tile,
                dir: "send",
                needed: src_port + 1,
                max: self.ports_out,
            });
        }
        if dst_port >= self.ports_in {
            return Err(FabricError::PortOverflow {
                tile: dst_tile,
                dir: "receive",
                needed: dst_port + 1,
                max: self.ports_in,
            });
        }
        self.rows[src_tile * self.ports_out + src_port] |=
            1 << (dst_tile * self.ports_in + dst_port);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Programmed `((src_tile, src_port), (dst_tile, dst_port))` pairs.
    pub fn pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for (s, &row) in self.rows.iter().enumerate() {
            let mut r = row;
            while r != 0 {
                let d = r.trailing_zeros() as usize;
                out.push((
                    (s / self.ports_out, s % self.ports_out),
                    (d / self.ports_in, d % self.ports_in),
                ));
                r &= r - 1;
            }
        }
        out
    }
}

/// Routes per-tile send-port bits to per-tile receive-port bits.
pub fn route_global(program: &GlobalProgram, exported: &[u16]) -> Vec<u16> {
    let mut recv: u128 = 0;
    for (t, &bits) in exported.iter().enumerate() {
        let mut b = bits;
        while b != 0 {
            let p = b.trailing_zeros() as usize;
            if p < program.ports_out {
                recv |= program.rows[t * program.ports_out + p];
            }
            b &= b - 1;
        }
    }
    (0..program.tiles())
        .map(|t| ((recv >> (t * program.ports_in)) & ((1u128 << program.ports_in) - 1)) as u16)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_cross_tile_edge() {
        let mut g = GlobalProgram::new(&FabricConfig::default());
        g.connect(0, 0, 1, 0).unwrap();
        assert_eq!(route_global(&g, &[1, 0]), [0, 1, 0, 0, 0, 0, 0, 0]);
        assert_eq!(route_global(&g, &[0]), [0; 8]);
        assert_eq!(g.pairs(), [((0, 0), (1, 0))]);
    }

    #[test]
    fn port_budget() {
        let mut g = GlobalProgram::new(&FabricConfig::default());
        assert!(matches!(
            g.connect(0, 16, 1, 0),
            Err(FabricError::PortOverflow { needed: 17, .. })
        ));
        assert!(g.connect(7, 15, 7, 15).is_ok());
        assert_eq!(
            route_global(&g, &[0, 0, 0, 0, 0, 0, 0, 1 << 15])[7],
            1 << 15
        );
    }
}
