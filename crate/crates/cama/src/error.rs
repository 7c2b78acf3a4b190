// SPDX-License-Identifier: Apache-2.0
use std::path::PathBuf;

use cama_core::encode::EncodeError;
use cama_core::mapper::MapError;

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const INPUT: i32 = 2;
    pub const INFEASIBLE: i32 = 3;
    pub const DIVERGENCE: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    /// Malformed or inconsistent input: schema, syntax, stale artifacts.
    #[error("{0}")]
    Input(String),
    #[error("infeasible mapping: {0}")]
    Map(#[from] MapError),
    #[error("infeasible encoding: {0}")]
    Encode(EncodeError),
    #[error("{0}")]
    Divergence(String),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Self {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } | Error::Input(_) => exit::INPUT,
            Error::Map(_) | Error::Encode(_) => exit::INFEASIBLE,
            Error::Divergence(_) => exit::DIVERGENCE,
        }
    }
}

impl From<EncodeError> for Error {
    fn from(e: EncodeError) -> Self {
        match e {
            EncodeError::Unmappable { .. } => Error::Encode(e),
            other => Error::Input(other.to_string()),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
