// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("state does not fit in dimension {dim}: truncated trace {trace:.6} < 0.999")]
    Truncation { dim: usize, trace: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("bin edges must be strictly increasing with at least two entries")]
    EdgeOrder,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("process reconstruction needs at least two distinct probe amplitudes")]
    InsufficientProbes,

    #[error("no tensor element of block ({k},{l}) exceeds the magnitude floor")]
    EmptyMap { k: usize, l: usize },

    #[error("diagonal block must be at least 2x2")]
    DegenerateBlock,

    #[error("{path}:{line}: {msg}")]
    Parse { path: String, line: usize, msg: String },

    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}
