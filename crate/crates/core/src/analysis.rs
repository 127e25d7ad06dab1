// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Physical read-out of a process tensor: photon-number transfer, phase
//! structure, loss-model fits, fidelities and output prediction.

use std::f64::consts::{PI, TAU};
use std::fmt::Write as _;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{loss_channel_tensor, wigner, ChannelModel, DensityMatrix, ProcessTensor, WignerGrid};
use crate::linalg;
use crate::special::binomial_pmf;

/// Elements smaller than this carry no usable phase.
pub const MAG_FLOOR: f64 = 0.02;

/// Coherence blocks `(k, l)` used for the global phase fit.
pub const PHASE_BLOCKS: [(usize, usize); 3] = [(0, 1), (0, 2), (0, 3)];

/// `M[k][m] = Re eps[k][k][m][m]`: probability of `k` output photons given `m` input photons.
pub fn diagonal_block(t: &ProcessTensor) -> DMatrix<f64> {
    let d = t.dim();
    DMatrix::from_fn(d, d, |k, m| t.get(k, k, m, m).re)
}

fn loss_residual(diag: &DMatrix<f64>, eta: f64) -> f64 {
    let d = diag.nrows();
    let mut acc = 0.0;
    for m in 0..d {
        for k in 0..d {
            let r = diag[(k, m)] - binomial_pmf(m, k, eta);
            acc += r * r;
        }
    }
    acc
}

/// Least-squares transmissivity of a pure-loss model for a diagonal block.
///
/// A coarse scan brackets the minimum, then golden-section search refines it.
pub fn fit_transmissivity(diag: &DMatrix<f64>) -> Result<f64> {
    if diag.nrows() < 2 || diag.ncols() != diag.nrows() {
        return Err(Error::DegenerateBlock);
    }
    const SCAN: usize = 200;
    let f = |eta: f64| loss_residual(diag, eta);
    let best = (0..=SCAN).map(|i| i as f64 / SCAN as f64).map(|e| (e, f(e))).fold((0.0, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
    let step = 1.0 / SCAN as f64;
    let (mut lo, mut hi) = ((best.0 - step).max(0.0), (best.0 + step).min(1.0));

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > 1e-12 {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    let mid = 0.5 * (lo + hi);
    // the minimum may sit on the boundary
    let candidates = [mid, 0.0, 1.0];
    Ok(candidates.into_iter().fold(mid, |a, b| if f(b) < f(a) { b } else { a }))
}

/// Principal-branch phases of block `(k, l)`: every `(m, n)` with `m - n = k - l`
/// and `|eps[k][l][m][n]| >= mag_floor`.
pub fn phase_map(t: &ProcessTensor, k: usize, l: usize, mag_floor: f64) -> Result<Vec<(usize, usize, f64)>> {
    if k == l {
        return Err(Error::InvalidArgument("phase_map needs k != l".into()));
    }
    let d = t.dim();
    if k >= d || l >= d {
        return Err(Error::EmptyMap { k, l });
    }
    let mut out = Vec::new();
    for m in 0..d {
        let n = m as i64 - k as i64 + l as i64;
        if n < 0 || n >= d as i64 {
            continue;
        }
        let e = t.get(k, l, m, n as usize);
        if e.norm() >= mag_floor {
            out.push((m, n as usize, e.arg()));
        }
    }
    if out.is_empty() {
        return Err(Error::EmptyMap { k, l });
    }
    Ok(out)
}

/// Vector average of unit phasors.
pub fn circular_mean(phases: impl IntoIterator<Item = f64>) -> f64 {
    phases.into_iter().map(|p| Complex64::from_polar(1.0, p)).sum::<Complex64>().arg()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseFit {
    /// Global phase, wrapped into `(-pi, pi]`.
    pub phi_hat: f64,
    /// `(k, l, mean phase)` per block, unwrapped.
    pub per_block_means: Vec<(usize, usize, f64)>,
    /// RMS deviation of the block means from `(l - k) phi_hat`.
    pub residual: f64,
}

/// Fits `theta_kl = (l - k) phi` through the origin to block phases.
///
/// Blocks are taken in the given order and unwrapped so consecutive phases
/// differ by at most `pi`.
pub fn fit_phase_law(block_means: &[(usize, usize, f64)]) -> PhaseFit {
    let mut unwrapped: Vec<(usize, usize, f64)> = Vec::with_capacity(block_means.len());
    for &(k, l, theta) in block_means {
        let mut th = theta;
        if let Some(&(_, _, prev)) = unwrapped.last() {
            while th - prev > PI {
                th -= TAU;
            }
            while th - prev <= -PI {
                th += TAU;
            }
        }
        unwrapped.push((k, l, th));
    }
    let lever = |k: usize, l: usize| l as f64 - k as f64;
    let num: f64 = unwrapped.iter().map(|&(k, l, th)| lever(k, l) * th).sum();
    let den: f64 = unwrapped.iter().map(|&(k, l, _)| lever(k, l).powi(2)).sum();
    let slope = num / den;
    let residual = (unwrapped.iter().map(|&(k, l, th)| (th - lever(k, l) * slope).powi(2)).sum::<f64>() / unwrapped.len() as f64).sqrt();
    let mut phi_hat = slope.rem_euclid(TAU);
    if phi_hat > PI {
        phi_hat -= TAU;
    }
    PhaseFit { phi_hat, per_block_means: unwrapped, residual }
}

/// Global phase of a tensor from the circular-mean phases of blocks (0,1), (0,2), (0,3).
pub fn fit_global_phase(t: &ProcessTensor) -> Result<PhaseFit> {
    let means = PHASE_BLOCKS
        .iter()
        .map(|&(k, l)| {
            let map = phase_map(t, k, l, MAG_FLOOR)?;
            Ok((k, l, circular_mean(map.iter().map(|e| e.2))))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(fit_phase_law(&means))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessFidelity {
    /// Uhlmann fidelity of the unit-trace Choi matrices.
    pub full: f64,
    /// Classical overlap `(sum_km sqrt(p_km q_km))^2` of the column-normalized
    /// diagonal blocks with uniform weight `1/dim` per input photon number.
    pub diagonal: f64,
}

fn column_distribution(diag: &DMatrix<f64>) -> DMatrix<f64> {
    let d = diag.nrows();
    let mut out = diag.map(|v| v.max(0.0));
    for m in 0..d {
        let s: f64 = out.column(m).sum();
        if s > 0.0 {
            out.column_mut(m).scale_mut(1.0 / (s * d as f64));
        }
    }
    out
}

pub fn process_fidelity(a: &ProcessTensor, b: &ProcessTensor) -> Result<ProcessFidelity> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    let full = linalg::uhlmann_fidelity(&a.normalized_choi(), &b.normalized_choi());
    let p = column_distribution(&diagonal_block(a));
    let q = column_distribution(&diagonal_block(b));
    let overlap: f64 = p.iter().zip(q.iter()).map(|(x, y)| (x * y).sqrt()).sum();
    Ok(ProcessFidelity { full, diagonal: (overlap * overlap).min(1.0) })
}

/// Output state of `rho_in` under the channel `t`.
pub fn predict_output(t: &ProcessTensor, rho_in: &DensityMatrix) -> Result<DensityMatrix> {
    t.apply(rho_in)
}

/// [`predict_output`] together with the output Wigner function on a grid.
pub fn predict_output_with_wigner(t: &ProcessTensor, rho_in: &DensityMatrix, x_axis: &[f64], y_axis: &[f64]) -> Result<(DensityMatrix, WignerGrid)> {
    let out = predict_output(t, rho_in)?;
    let grid = wigner(&out, x_axis, y_axis)?;
    Ok((out, grid))
}

/// Everything derived from one reconstructed tensor.
#[derive(Debug, Clone)]
pub struct AnalysisReport {
    pub diagonal: DMatrix<f64>,
    pub eta_hat: f64,
    pub phase_maps: Vec<((usize, usize), Vec<(usize, usize, f64)>)>,
    pub phase_fit: Option<PhaseFit>,
    /// Describes what the fidelity was computed against.
    pub reference: String,
    pub fidelity: ProcessFidelity,
}

/// Runs the full analysis. Without a reference tensor the fidelity is taken
/// against the loss model fitted to `t` itself.
pub fn analyze(t: &ProcessTensor, reference: Option<&ProcessTensor>) -> Result<AnalysisReport> {
    let diagonal = diagonal_block(t);
    let eta_hat = fit_transmissivity(&diagonal)?;
    let phase_maps = PHASE_BLOCKS
        .iter()
        .filter_map(|&(k, l)| phase_map(t, k, l, MAG_FLOOR).ok().map(|m| ((k, l), m)))
        .collect();
    let phase_fit = fit_global_phase(t).ok();
    let (reference_name, fidelity) = match reference {
        Some(r) => ("reference-file".to_string(), process_fidelity(t, r)?),
        None => {
            let phi = phase_fit.as_ref().map_or(0.0, |f| f.phi_hat);
            let model = ChannelModel::new(eta_hat, phi)?;
            let fitted = loss_channel_tensor(&model, t.dim())?;
            (format!("fitted-loss-model eta={eta_hat:.10} phi={:.10}", model.phi()), process_fidelity(t, &fitted)?)
        }
    };
    Ok(AnalysisReport { diagonal, eta_hat, phase_maps, phase_fit, reference: reference_name, fidelity })
}

impl AnalysisReport {
    /// Plain-text report with `[diagonal]`, `[phases]`, `[fits]` and `[fidelity]` sections.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let d = self.diagonal.nrows();
        s.push_str("[diagonal]\n# k,m,value\n");
        for m in 0..d {
            for k in 0..d {
                let _ = writeln!(s, "{k},{m},{:.12e}", self.diagonal[(k, m)]);
            }
        }
        s.push_str("\n[phases]\n# k,l,m,n,phase\n");
        for ((k, l), entries) in &self.phase_maps {
            for (m, n, ph) in entries {
                let _ = writeln!(s, "{k},{l},{m},{n},{ph:.12e}");
            }
        }
        s.push_str("\n[fits]\n");
        let _ = writeln!(s, "eta_hat={:.12e}", self.eta_hat);
        match &self.phase_fit {
            Some(fit) => {
                let _ = writeln!(s, "phi_hat={:.12e}", fit.phi_hat);
                let _ = writeln!(s, "phase_residual={:.12e}", fit.residual);
                for (k, l, th) in &fit.per_block_means {
                    let _ = writeln!(s, "block_mean_{k}{l}={th:.12e}");
                }
            }
            None => s.push_str("phi_hat=nan\n"),
        }
        s.push_str("\n[fidelity]\n");
        let _ = writeln!(s, "reference={}", self.reference);
        let _ = writeln!(s, "diagonal={:.12e}", self.fidelity.diagonal);
        let _ = writeln!(s, "full={:.12e}", self.fidelity.full);
        s
    }
}
