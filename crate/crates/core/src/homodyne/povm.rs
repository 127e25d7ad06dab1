// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::quadrature::integrate_vec;
use super::section_center;
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::linalg::{self, CMatrix};
use crate::special::hermite_functions;

const INTEGRAL_TOL: f64 = 1e-10;

/// Binned quadrature measurement over `P` uniformly scheduled phase sections.
///
/// `operator(p, b)[m][n] = e^{i(m-n) theta_p} int_{bin b} psi_m psi_n dx / P`,
/// so the `P x B` operators together form a single (sub-normalized) POVM.
#[derive(Debug, Clone)]
pub struct HomodynePovm {
    phase_sections: usize,
    /// Local-oscillator phase of each section.
    phases: Vec<f64>,
    /// Weight of each section in the overall POVM, `1/P`.
    scale: f64,
    x_edges: Vec<f64>,
    dim: usize,
    /// Real symmetric bin overlaps, one `dim x dim` block per bin.
    overlaps: Vec<Vec<f64>>,
    operators: Vec<CMatrix>,
}

/// `bins` equal-width bins covering `[min, max]`.
pub fn uniform_edges(min: f64, max: f64, bins: usize) -> Vec<f64> {
    (0..=bins).map(|i| min + (max - min) * i as f64 / bins as f64).collect()
}

pub fn build_povm(phase_sections: usize, x_edges: &[f64], dim: usize) -> Result<HomodynePovm> {
    if x_edges.len() < 2 || x_edges.windows(2).any(|w| !(w[1] > w[0])) || x_edges.iter().any(|v| !v.is_finite()) {
        return Err(Error::EdgeOrder);
    }
    if phase_sections == 0 || dim == 0 {
        return Err(Error::InvalidArgument("phase_sections and dim must be positive".into()));
    }
    let bins = x_edges.len() - 1;
    let d = dim;
    let overlaps: Vec<Vec<f64>> = x_edges
        .windows(2)
        .map(|w| {
            let mut psi = vec![0.0; d];
            let upper = integrate_vec(
                |x, out| {
                    hermite_functions(d, x, &mut psi);
                    let mut idx = 0;
                    for m in 0..d {
                        for n in m..d {
                            out[idx] = psi[m] * psi[n];
                            idx += 1;
                        }
                    }
                },
                d * (d + 1) / 2,
                w[0],
                w[1],
                INTEGRAL_TOL,
            );
            let mut full = vec![0.0; d * d];
            let mut idx = 0;
            for m in 0..d {
                for n in m..d {
                    full[m * d + n] = upper[idx];
                    full[n * d + m] = upper[idx];
                    idx += 1;
                }
            }
            full
        })
        .collect();

    let scale = 1.0 / phase_sections as f64;
    let operators = assemble(&overlaps, (0..phase_sections).map(|p| section_center(p, phase_sections)), d, scale, bins);
    let phases = (0..phase_sections).map(|p| section_center(p, phase_sections)).collect();
    Ok(HomodynePovm { phase_sections, phases, scale, x_edges: x_edges.to_vec(), dim, overlaps, operators })
}

fn assemble(overlaps: &[Vec<f64>], phases: impl Iterator<Item = f64>, d: usize, scale: f64, bins: usize) -> Vec<CMatrix> {
    let mut operators = Vec::with_capacity(bins);
    for theta in phases {
        let rot: Vec<Complex64> = (0..d).map(|m| Complex64::from_polar(1.0, m as f64 * theta)).collect();
        for ov in overlaps {
            let op = CMatrix::from_fn(d, d, |m, n| rot[m] * rot[n].conj() * (ov[m * d + n] * scale));
            operators.push(linalg::hermitize(&op));
        }
    }
    operators
}

impl HomodynePovm {
    /// Local-oscillator phase of each section.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn phase_sections(&self) -> usize {
        self.phase_sections
    }

    pub fn bins(&self) -> usize {
        self.x_edges.len() - 1
    }

    pub fn x_edges(&self) -> &[f64] {
        &self.x_edges
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of outcomes `P * B`; outcome `j = p * B + b`.
    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operator(&self, p: usize, b: usize) -> &CMatrix {
        &self.operators[p * self.bins() + b]
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    /// `int_{bin b} psi_m psi_n dx`.
    pub fn overlap(&self, b: usize, m: usize, n: usize) -> f64 {
        self.overlaps[b][m * self.dim + n]
    }

    /// Bin index of `x`, `None` outside the edges. The last edge is inclusive.
    pub fn bin_of(&self, x: f64) -> Option<usize> {
        let e = &self.x_edges;
        if !(x >= e[0] && x <= e[e.len() - 1]) {
            return None;
        }
        let idx = e.partition_point(|&edge| edge <= x);
        Some(idx.saturating_sub(1).min(self.bins() - 1))
    }

    /// Outcome probabilities `Tr(Pi_j rho)` for all `j`, `rho` Hermitian.
    pub fn probabilities(&self, rho: &CMatrix) -> Vec<f64> {
        let d = self.dim;
        let bins = self.bins();
        let scale = self.scale;
        let mut out = Vec::with_capacity(self.len());
        let mut rotated = vec![0.0; d * d];
        for (p, &theta) in self.phases.iter().enumerate() {
            debug_assert_eq!(out.len(), p * bins);
            // Re(e^{i(m-n) theta} rho_nm), symmetric in (m, n)
            for m in 0..d {
                for n in 0..d {
                    rotated[m * d + n] = (Complex64::from_polar(1.0, (m as f64 - n as f64) * theta) * rho[(n, m)]).re;
                }
            }
            for b in 0..bins {
                let ov = &self.overlaps[b];
                let dot: f64 = ov.iter().zip(&rotated).map(|(o, r)| o * r).sum();
                out.push(dot * scale);
            }
        }
        out
    }

    /// `sum_j weights[j] Pi_j` for real weights indexed like [`Self::operators`].
    pub fn weighted_sum(&self, weights: &[f64]) -> CMatrix {
        debug_assert_eq!(weights.len(), self.len());
        let d = self.dim;
        let bins = self.bins();
        let scale = self.scale;
        let mut out = CMatrix::zeros(d, d);
        let mut acc = vec![0.0; d * d];
        for (p, &theta) in self.phases.iter().enumerate() {
            acc.iter_mut().for_each(|v| *v = 0.0);
            for b in 0..bins {
                let w = weights[p * bins + b];
                if w == 0.0 {
                    continue;
                }
                for (a, o) in acc.iter_mut().zip(&self.overlaps[b]) {
                    *a += w * o;
                }
            }
            for m in 0..d {
                for n in 0..d {
                    out[(m, n)] += Complex64::from_polar(acc[m * d + n] * scale, (m as f64 - n as f64) * theta);
                }
            }
        }
        linalg::hermitize(&out)
    }

    /// Largest eigenvalue of `I - P sum_b Pi_{p,b}` over sections, restricted to `n <= dim-2`.
    pub fn completeness_deficit(&self) -> f64 {
        let keep = self.dim.saturating_sub(1).max(1);
        let mut worst: f64 = 0.0;
        for p in 0..self.phase_sections {
            let mut sum = CMatrix::zeros(keep, keep);
            for b in 0..self.bins() {
                sum += self.operator(p, b).view((0, 0), (keep, keep));
            }
            let deficit = CMatrix::identity(keep, keep) - sum * Complex64::new(1.0 / self.scale, 0.0);
            let (vals, _) = linalg::eigh(&deficit);
            worst = vals.into_iter().fold(worst, f64::max);
        }
        worst
    }

    /// Minimum eigenvalue over all operators.
    pub fn min_eigenvalue(&self) -> f64 {
        self.operators.iter().map(linalg::min_eigenvalue).fold(f64::INFINITY, f64::min)
    }

    pub fn check_state(&self, rho: &DensityMatrix) -> Result<()> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rho.dim() });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_wide_bin_is_identity() {
        let povm = build_povm(1, &[-8.0, 8.0], 5).unwrap();
        let diff = povm.operator(0, 0) - CMatrix::identity(5, 5);
        assert!(diff.iter().all(|z| z.norm() < 1e-6));
    }

    #[test]
    fn vacuum_probabilities_sum_per_section() {
        let povm = build_povm(4, &uniform_edges(-5.0, 5.0, 50), 5).unwrap();
        let v = DensityMatrix::vacuum(5);
        let probs = povm.probabilities(v.matrix());
        for p in 0..4 {
            let s: f64 = probs[p * 50..(p + 1) * 50].iter().sum();
            assert!((s - 0.25).abs() < 1e-6);
        }
    }

    #[test]
    fn fast_paths_match_operators() {
        let povm = build_povm(3, &uniform_edges(-3.0, 3.0, 7), 4).unwrap();
        let rho = crate::fock::coherent_density(Complex64::new(0.3, 0.5), 4).unwrap();
        let fast = povm.probabilities(rho.matrix());
        for (j, op) in povm.operators().iter().enumerate() {
            assert!((fast[j] - linalg::trace_product(op, rho.matrix()).re).abs() < 1e-15);
        }
        let w: Vec<f64> = (0..povm.len()).map(|j| (j as f64 * 0.37).sin().abs()).collect();
        let mut direct = CMatrix::zeros(4, 4);
        for (op, wj) in povm.operators().iter().zip(&w) {
            direct += op * Complex64::new(*wj, 0.0);
        }
        assert!((povm.weighted_sum(&w) - direct).norm() < 1e-14);
    }

    #[test]
    fn edges_must_increase() {
        assert!(matches!(build_povm(2, &[0.0, 0.0], 3), Err(Error::EdgeOrder)));
        assert!(matches!(build_povm(2, &[1.0], 3), Err(Error::EdgeOrder)));
        assert!(matches!(build_povm(2, &[1.0, 0.5], 3), Err(Error::EdgeOrder)));
    }

    #[test]
    fn operators_are_psd_and_nearly_complete() {
        let povm = build_povm(20, &uniform_edges(-5.0, 5.0, 100), 7).unwrap();
        assert!(povm.min_eigenvalue() >= -1e-10);
        assert!(povm.completeness_deficit() <= 1e-3);
    }

    #[test]
    fn bin_lookup() {
        let povm = build_povm(1, &[-1.0, 0.0, 1.0], 2).unwrap();
        assert_eq!(povm.bin_of(-1.0), Some(0));
        assert_eq!(povm.bin_of(0.0), Some(1));
        assert_eq!(povm.bin_of(1.0), Some(1));
        assert_eq!(povm.bin_of(1.5), None);
        assert_eq!(povm.bin_of(f64::NAN), None);
    }
}
