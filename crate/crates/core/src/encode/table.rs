// SPDX-License-Identifier: Apache-2.0
use alloc::vec::Vec;

use super::{Code, Codebook, EncodeError};

/// The hardware symbol-to-code lookup: one 32-bit row per symbol, of which
/// the low `width` bits are driven onto the search lines.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EncoderTable {
    pub rows: Vec<u32>,
    pub width: usize,
}

impl EncoderTable {
    pub fn from_codebook(cb: &Codebook) -> Self {
        EncoderTable {
            rows: cb.codes.iter().map(Code::padded).collect(),
            width: cb.scheme.code_len,
        }
    }

    pub fn lookup(&self, symbol: u8) -> Result<Code, EncodeError> {
        self.rows
            .get(symbol as usize)
            .map(|&r| Code::new(r, self.width))
            .ok_or(EncodeError::UnknownSymbol {
                symbol: symbol as usize,
                alphabet: self.rows.len(),
            })
    }

    pub fn alphabet_size(&self) -> usize {
        self.rows.len()
    }
}

pub fn build_encoder_table(codebook: &Codebook) -> EncoderTable {
    EncoderTable::from_codebook(codebook)
}
