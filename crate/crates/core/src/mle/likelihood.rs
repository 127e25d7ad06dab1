// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use super::{BinnedCounts, Probe};
use crate::fock::{DensityMatrix, ProcessTensor};
use crate::homodyne::HomodynePovm;
use crate::linalg::CMatrix;

/// Outcome probabilities below this are floored before taking logarithms.
pub const PROBABILITY_FLOOR: f64 = 1e-300;

/// Relative frequencies `f_j = n_j / N` over in-range counts.
pub(crate) fn frequencies(counts: &BinnedCounts, total: u64) -> Vec<f64> {
    let t = total as f64;
    counts.flat().into_iter().map(|c| c as f64 / t).collect()
}

/// `sum_j f_j ln p_j` skipping empty outcomes.
pub(crate) fn weighted_log(freqs: &[f64], probs: &[f64]) -> f64 {
    freqs
        .iter()
        .zip(probs)
        .filter(|(f, _)| **f > 0.0)
        .map(|(f, p)| f * p.max(PROBABILITY_FLOOR).ln())
        .sum()
}

pub(crate) fn matrix_log_likelihood(rho: &CMatrix, freqs: &[f64], povm: &HomodynePovm) -> f64 {
    weighted_log(freqs, &povm.probabilities(rho))
}

/// `sum_j f_j ln Tr(Pi_j rho)` with relative frequencies `f_j`.
pub fn log_likelihood(rho: &DensityMatrix, counts: &BinnedCounts, povm: &HomodynePovm) -> f64 {
    let freqs = frequencies(counts, counts.total().max(1));
    matrix_log_likelihood(rho.matrix(), &freqs, povm)
}

/// `sum_ij f_ij ln Tr(Pi_j E(rho_i))`, frequencies normalized over all probes.
pub fn process_log_likelihood(tensor: &ProcessTensor, probes: &[Probe], povm: &HomodynePovm) -> f64 {
    let total: u64 = probes.iter().map(|p| p.counts.total()).sum::<u64>().max(1);
    probes
        .iter()
        .map(|probe| {
            let out = tensor.apply(&probe.state).expect("probe dimension checked by caller");
            matrix_log_likelihood(out.matrix(), &frequencies(&probe.counts, total), povm)
        })
        .sum()
}
