// SPDX-License-Identifier: Apache-2.0
//! Cost parameters as TOML. A file may set any subset of fields; the rest
//! keep their defaults.

use std::path::Path;

use cama_core::cost::CostParams;

use crate::error::{Error, Result};
use crate::manifest::sha256_hex;

pub fn default_toml() -> String {
    toml::to_string_pretty(&CostParams::default()).expect("params serialize")
}

pub fn parse_params(text: &str) -> Result<CostParams> {
    // Merge over the defaults so partial files are accepted.
    let mut base: toml::Table = toml::from_str(&default_toml()).expect("defaults parse");
    let over: toml::Table =
        toml::from_str(text).map_err(|e| Error::input(format!("params: {e}")))?;
    merge(&mut base, over)?;
    let p: CostParams = base
        .try_into()
        .map_err(|e: toml::de::Error| Error::input(format!("params: {e}")))?;
    p.validate()
        .map_err(|e| Error::input(format!("params: {e}")))?;
    Ok(p)
}

fn merge(base: &mut toml::Table, over: toml::Table) -> Result<()> {
    for (k, v) in over {
        match (base.get_mut(&k), v) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o)?,
            (Some(slot), v) => *slot = v,
            (None, _) => return Err(Error::input(format!("params: unknown key `{k}`"))),
        }
    }
    Ok(())
}

/// Parameters and the digest recorded in manifests (`None` for defaults).
pub fn load_params(path: Option<&Path>) -> Result<(CostParams, Option<String>)> {
    match path {
        None => Ok((CostParams::default(), None)),
        Some(p) => {
            let bytes = std::fs::read(p).map_err(Error::io(p))?;
            let text =
                std::str::from_utf8(&bytes).map_err(|_| Error::input("params: not UTF-8"))?;
            Ok((parse_params(text)?, Some(sha256_hex(&bytes))))
        }
    }
}
