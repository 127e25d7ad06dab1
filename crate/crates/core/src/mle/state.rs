// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::likelihood::{frequencies, matrix_log_likelihood, PROBABILITY_FLOOR};
use super::{BinnedCounts, MleConfig, MleOutcome, MIN_STEP};
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::homodyne::HomodynePovm;
use crate::linalg::{self, CMatrix};

/// `R(rho) = sum_j (f_j / p_j) Pi_j`, skipping outcomes with `f_j = 0`.
pub(crate) fn r_operator(freqs: &[f64], probs: &[f64], povm: &HomodynePovm) -> CMatrix {
    let weights: Vec<f64> = freqs
        .iter()
        .zip(probs)
        .map(|(f, p)| if *f > 0.0 { f / p.max(PROBABILITY_FLOOR) } else { 0.0 })
        .collect();
    povm.weighted_sum(&weights)
}

/// Reconstructs a density matrix from binned homodyne counts.
///
/// Starts from the maximally mixed state and iterates
/// `rho <- (1-d) rho + d N[R rho R]` until the relative log-likelihood gain
/// falls below `cfg.rel_tol`. A non-converged run still returns its best
/// iterate with `converged = false`.
pub fn state_mle(counts: &BinnedCounts, povm: &HomodynePovm, cfg: &MleConfig) -> Result<MleOutcome<DensityMatrix>> {
    cfg.validate()?;
    if cfg.dim != povm.dim() {
        return Err(Error::DimensionMismatch { expected: povm.dim(), got: cfg.dim });
    }
    if counts.phase_sections() != povm.phase_sections() || counts.bins() != povm.bins() {
        return Err(Error::InvalidArgument("counts are not aligned with the POVM".into()));
    }
    let total = counts.total();
    if total == 0 {
        return Err(Error::InvalidArgument("state reconstruction needs at least one count".into()));
    }
    let freqs = frequencies(counts, total);

    let mut rho = DensityMatrix::maximally_mixed(cfg.dim).into_matrix();
    let mut probs = povm.probabilities(&rho);
    let mut ll = matrix_log_likelihood(&rho, &freqs, povm);
    let mut history = vec![ll];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let r = r_operator(&freqs, &probs, povm);
        let rrr = linalg::hermitize(&(&r * &rho * &r));
        let update = &rrr / Complex64::new(linalg::trace(&rrr).re, 0.0);

        let mut step = cfg.dilution;
        let accepted = loop {
            let candidate = if step >= 1.0 {
                update.clone()
            } else {
                &rho * Complex64::new(1.0 - step, 0.0) + &update * Complex64::new(step, 0.0)
            };
            let cand_probs = povm.probabilities(&candidate);
            let cand_ll = super::likelihood::weighted_log(&freqs, &cand_probs);
            if cand_ll >= ll {
                break Some((candidate, cand_probs, cand_ll));
            }
            step *= 0.5;
            if step < MIN_STEP * cfg.dilution {
                break None;
            }
        };
        let Some((candidate, cand_probs, cand_ll)) = accepted else {
            // no ascent left at this resolution
            converged = true;
            break;
        };
        let gain = (cand_ll - ll) / ll.abs().max(f64::MIN_POSITIVE);
        rho = candidate;
        probs = cand_probs;
        ll = cand_ll;
        history.push(ll);
        if gain < cfg.rel_tol {
            converged = true;
            break;
        }
    }

    let rho = linalg::hermitize(&rho);
    let tr = linalg::trace(&rho).re;
    let estimate = DensityMatrix::new(rho / Complex64::new(tr, 0.0))?;
    Ok(MleOutcome { estimate, iterations, converged, log_likelihood: ll, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homodyne::{build_povm, uniform_edges};

    #[test]
    fn empty_counts_rejected() {
        let povm = build_povm(2, &uniform_edges(-5.0, 5.0, 10), 3).unwrap();
        let counts = BinnedCounts { counts: vec![vec![0; 10]; 2], dropped: 0 };
        let cfg = MleConfig { dim: 3, ..MleConfig::state_default() };
        assert!(state_mle(&counts, &povm, &cfg).is_err());
    }

    #[test]
    fn exact_vacuum_frequencies_recover_vacuum() {
        let povm = build_povm(4, &uniform_edges(-5.0, 5.0, 40), 4).unwrap();
        let probs = povm.probabilities(DensityMatrix::vacuum(4).matrix());
        let counts = BinnedCounts {
            counts: probs.chunks(40).map(|row| row.iter().map(|p| (p * 1e9).round() as u64).collect()).collect(),
            dropped: 0,
        };
        let cfg = MleConfig { dim: 4, ..MleConfig::state_default() };
        let out = state_mle(&counts, &povm, &cfg).unwrap();
        assert!(out.estimate.get(0, 0).re > 0.999, "{:?}", out.estimate.populations());
        assert!(out.history.windows(2).all(|w| w[1] >= w[0] - 1e-12));
    }
}
