// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::likelihood::{frequencies, weighted_log};
use super::state::r_operator;
use super::{BinnedCounts, MleConfig, MleOutcome, MIN_STEP};
use crate::error::{Error, Result};
use crate::fock::process::enforce_trace_preservation;
use crate::fock::{coherent_density, DensityMatrix, ProcessTensor};
use crate::homodyne::{build_povm, HomodynePovm};
use crate::linalg::{self, CMatrix};

/// Extra Fock levels carried during the fit and dropped afterwards.
///
/// The probes have a little population above any practical truncation. In a
/// fit at exactly `D_rec` levels that tail has nowhere to go but the highest
/// input column, which it visibly distorts.
pub const FIT_MARGIN: usize = 2;

/// How the probe data is tied to the channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProcessModel {
    /// The channel commutes with phase rotations, so only elements with
    /// `k - l == m - n` are kept. Real-amplitude probes then determine the
    /// whole tensor, since rotating the local oscillator is as good as
    /// rotating the probe.
    #[default]
    PhaseCovariant,
    /// Any CPTP map. With a few real probe amplitudes most of the tensor is
    /// then fixed by positivity and the starting point rather than the data.
    General,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ProcessOptions {
    pub model: ProcessModel,
    pub margin: usize,
}

impl Default for ProcessOptions {
    fn default() -> Self {
        ProcessOptions { model: ProcessModel::default(), margin: FIT_MARGIN }
    }
}

/// One coherent probe: its amplitude, the truncated input state and the
/// homodyne counts measured on the channel output.
#[derive(Debug, Clone)]
pub struct Probe {
    pub alpha: Complex64,
    pub state: DensityMatrix,
    pub counts: BinnedCounts,
}

impl Probe {
    pub fn coherent(alpha: Complex64, counts: BinnedCounts, dim: usize) -> Result<Self> {
        Ok(Probe { alpha, state: coherent_density(alpha, dim)?, counts })
    }
}

/// Working data of the Choi-space iteration.
struct Problem<'a> {
    dim: usize,
    povm: &'a HomodynePovm,
    inputs: Vec<CMatrix>,
    freqs: Vec<Vec<f64>>,
}

impl Problem<'_> {
    fn outputs(&self, choi: &CMatrix) -> Vec<CMatrix> {
        let d = self.dim;
        self.inputs
            .iter()
            .map(|rho| {
                let mut out = CMatrix::zeros(d, d);
                for k in 0..d {
                    for l in k..d {
                        let mut acc = Complex64::new(0.0, 0.0);
                        for m in 0..d {
                            for n in 0..d {
                                acc += choi[(k * d + m, l * d + n)] * rho[(m, n)];
                            }
                        }
                        out[(k, l)] = acc;
                        out[(l, k)] = acc.conj();
                    }
                }
                out
            })
            .collect()
    }

    /// Outcome probabilities per probe and the total log-likelihood.
    fn evaluate(&self, choi: &CMatrix) -> (Vec<Vec<f64>>, f64) {
        let probs: Vec<Vec<f64>> = self.outputs(choi).iter().map(|s| self.povm.probabilities(s)).collect();
        let ll = self.freqs.iter().zip(&probs).map(|(f, p)| weighted_log(f, p)).sum();
        (probs, ll)
    }

    /// `R = sum_i S_i (x) rho_i^T` with `S_i = sum_j (f_ij / p_ij) Pi_j`, Choi ordering.
    fn r_operator(&self, probs: &[Vec<f64>]) -> CMatrix {
        let d = self.dim;
        let mut r = CMatrix::zeros(d * d, d * d);
        for ((rho, f), p) in self.inputs.iter().zip(&self.freqs).zip(probs) {
            let s = r_operator(f, p, self.povm);
            for k in 0..d {
                for l in 0..d {
                    let skl = s[(k, l)];
                    for m in 0..d {
                        for n in 0..d {
                            r[(k * d + m, l * d + n)] += skl * rho[(n, m)];
                        }
                    }
                }
            }
        }
        r
    }
}

/// Zeroes Choi elements that break phase covariance. This is the phase twirl
/// of the map, so positivity and trace preservation survive.
fn mask_covariant(dim: usize, c: &mut CMatrix) {
    let d = dim;
    for k in 0..d {
        for m in 0..d {
            for l in 0..d {
                for n in 0..d {
                    if k + n != l + m {
                        c[(k * d + m, l * d + n)] = Complex64::new(0.0, 0.0);
                    }
                }
            }
        }
    }
}

fn starting_choi(dim: usize) -> CMatrix {
    let identity = ProcessTensor::identity(dim).choi().clone();
    let mixed = CMatrix::identity(dim * dim, dim * dim) / Complex64::new(dim as f64, 0.0);
    (identity + mixed) * Complex64::new(0.5, 0.0)
}

/// Reconstructs a process tensor from coherent-probe homodyne data.
///
/// Maximizes `sum_ij f_ij ln Tr[E (Pi_j (x) rho_i^T)]` over Choi matrices `E`
/// with `Tr_out E = I`, starting from an even mixture of the identity channel
/// and the completely depolarizing channel. Uses [`ProcessOptions::default`];
/// see [`process_mle_with`].
pub fn process_mle(probes: &[(Complex64, BinnedCounts)], povm: &HomodynePovm, cfg: &MleConfig) -> Result<MleOutcome<ProcessTensor>> {
    process_mle_with(probes, povm, cfg, ProcessOptions::default())
}

/// [`process_mle`] with an explicit channel model and fit margin.
///
/// The fit runs at `cfg.dim + margin` levels; the returned tensor is its
/// leading `cfg.dim` block, renormalized to be trace preserving. The reported
/// log-likelihood and history belong to the wider fit.
pub fn process_mle_with(
    probes: &[(Complex64, BinnedCounts)],
    povm: &HomodynePovm,
    cfg: &MleConfig,
    opts: ProcessOptions,
) -> Result<MleOutcome<ProcessTensor>> {
    cfg.validate()?;
    if cfg.dim != povm.dim() {
        return Err(Error::DimensionMismatch { expected: povm.dim(), got: cfg.dim });
    }
    if probes.len() < 2 || probes.iter().all(|(a, _)| *a == probes[0].0) {
        return Err(Error::InsufficientProbes);
    }
    let fit_dim = cfg.dim + opts.margin;
    let wide;
    let fit_povm = if opts.margin == 0 {
        povm
    } else {
        wide = build_povm(povm.phase_sections(), povm.x_edges(), fit_dim)?;
        &wide
    };
    let probes: Vec<Probe> = probes
        .iter()
        .map(|(alpha, counts)| {
            if counts.phase_sections() != povm.phase_sections() || counts.bins() != povm.bins() {
                return Err(Error::InvalidArgument("counts are not aligned with the POVM".into()));
            }
            // the probe must fit the reported dimension, not just the wider one
            coherent_density(*alpha, cfg.dim)?;
            Probe::coherent(*alpha, counts.clone(), fit_dim)
        })
        .collect::<Result<_>>()?;
    let total: u64 = probes.iter().map(|p| p.counts.total()).sum();
    if total == 0 {
        return Err(Error::InvalidArgument("process reconstruction needs at least one count".into()));
    }
    let problem = Problem {
        dim: fit_dim,
        povm: fit_povm,
        inputs: probes.iter().map(|p| p.state.matrix().clone()).collect(),
        freqs: probes.iter().map(|p| frequencies(&p.counts, total)).collect(),
    };

    let mut choi = starting_choi(fit_dim);
    let (mut probs, mut ll) = problem.evaluate(&choi);
    let mut history = vec![ll];
    let mut converged = false;
    let mut iterations = 0;

    while iterations < cfg.max_iter {
        iterations += 1;
        let mut r = problem.r_operator(&probs);
        if opts.model == ProcessModel::PhaseCovariant {
            mask_covariant(fit_dim, &mut r);
        }
        let update = enforce_trace_preservation(fit_dim, &linalg::hermitize(&(&r * &choi * &r)));

        // both end points are trace preserving, so every mixture is too
        let mut step = cfg.dilution;
        let accepted = loop {
            let candidate = &choi + (&update - &choi) * Complex64::new(step, 0.0);
            let (cand_probs, cand_ll) = problem.evaluate(&candidate);
            if cand_ll >= ll {
                break Some((candidate, cand_probs, cand_ll));
            }
            step *= 0.5;
            if step < MIN_STEP * cfg.dilution {
                break None;
            }
        };
        let Some((candidate, cand_probs, cand_ll)) = accepted else {
            converged = true;
            break;
        };
        let gain = (cand_ll - ll) / ll.abs().max(f64::MIN_POSITIVE);
        choi = candidate;
        probs = cand_probs;
        ll = cand_ll;
        history.push(ll);
        if gain < cfg.rel_tol {
            converged = true;
            break;
        }
    }

    let estimate = ProcessTensor::from_choi(fit_dim, choi)?.truncated(cfg.dim)?;
    Ok(MleOutcome { estimate, iterations, converged, log_likelihood: ll, history })
}
