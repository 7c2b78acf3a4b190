// SPDX-License-Identifier: Apache-2.0
//! Run manifests. A manifest holds everything an output depends on and
//! nothing else (no clocks, no absolute paths), so equal manifests imply
//! byte-identical artifacts.

use std::path::Path;

use cama_core::encode::Scheme;
use cama_core::mapper::MappingStats;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputHash {
    pub role: String,
    /// File name without directories; `-` for inline input.
    pub name: String,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub tool_version: String,
    pub inputs: Vec<InputHash>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode_stats: Option<MappingStats>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params_sha256: Option<String>,
}

impl Default for RunManifest {
    fn default() -> Self {
        RunManifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            inputs: Vec::new(),
            scheme: None,
            mode_stats: None,
            seed: None,
            params_sha256: None,
        }
    }
}

impl RunManifest {
    pub fn with_input(mut self, role: &str, path: Option<&Path>, bytes: &[u8]) -> Self {
        let name = path
            .and_then(|p| p.file_name())
            .map_or_else(|| "-".to_string(), |n| n.to_string_lossy().into_owned());
        self.inputs.push(InputHash {
            role: role.to_string(),
            name,
            sha256: sha256_hex(bytes),
        });
        self
    }

    /// Single-line JSON for comment headers.
    pub fn to_line(&self) -> String {
        serde_json::to_string(self).expect("manifest serializes")
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
