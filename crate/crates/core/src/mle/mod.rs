// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Iterative maximum-likelihood reconstruction.
//!
//! Both estimators maximize a multinomial log-likelihood over binned homodyne
//! counts. States use the `R rho R` fixed point; processes use the
//! trace-preserving Choi-matrix iteration `E <- L^{-1/2} R E R L^{-1/2}`.
//! Every accepted iterate has a log-likelihood no lower than its predecessor:
//! when a full step would decrease it, the step is shortened toward the
//! current iterate.

mod config;
mod counts;
mod likelihood;
mod process;
mod state;

pub use config::MleConfig;
pub use counts::{bin_dataset, BinnedCounts};
pub use likelihood::{log_likelihood, process_log_likelihood, PROBABILITY_FLOOR};
pub use process::{process_mle, process_mle_with, Probe, ProcessModel, ProcessOptions, FIT_MARGIN};
pub use state::state_mle;

/// Result of an iterative reconstruction.
#[derive(Debug, Clone)]
pub struct MleOutcome<T> {
    pub estimate: T,
    pub iterations: usize,
    /// `false` when `max_iter` was reached before the relative tolerance.
    pub converged: bool,
    pub log_likelihood: f64,
    /// Log-likelihood of the starting point followed by every accepted iterate.
    pub history: Vec<f64>,
}

/// Smallest step fraction tried before declaring a stall.
const MIN_STEP: f64 = 1.0 / 1024.0;
