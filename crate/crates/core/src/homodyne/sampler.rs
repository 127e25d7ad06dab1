// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use super::pdf::pdf_with_wavefunctions;
use super::section_center;
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;
use crate::special::hermite_functions;

/// Half-width of the tabulated quadrature range; samples are confined to it.
pub const TABLE_RANGE: f64 = 6.0;
pub const TABLE_STEP: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSample {
    /// Local-oscillator phase in `[0, 2pi)`.
    pub theta: f64,
    pub x: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureDataset {
    pub samples: Vec<QuadratureSample>,
    /// Amplitude of the probe coherent state that produced the data.
    pub probe_alpha: Complex64,
    pub seed: u64,
}

impl QuadratureDataset {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        for (i, s) in self.samples.iter().enumerate() {
            if !(0.0..std::f64::consts::TAU).contains(&s.theta) || !s.x.is_finite() {
                return Err(Error::InvalidArgument(format!("sample {i} out of range: {s:?}")));
            }
        }
        Ok(())
    }
}

/// Draws `n_samples` homodyne outcomes from `rho` using RNG stream 0 of `seed`.
pub fn sample_dataset(rho: &DensityMatrix, phase_sections: usize, n_samples: usize, seed: u64) -> Result<QuadratureDataset> {
    sample_dataset_stream(rho, phase_sections, n_samples, seed, 0)
}

/// Draws `n_samples` outcomes; sample `i` is measured at the center of section
/// `floor(i P / n)` and its `x` comes from inverse-CDF lookup on a trapezoidal
/// CDF tabulated every [`TABLE_STEP`] over `[-TABLE_RANGE, TABLE_RANGE]`.
///
/// The generator is ChaCha20 seeded with `seed` (via `seed_from_u64`) on word
/// stream `stream`; one uniform `f64` is consumed per sample, in order.
pub fn sample_dataset_stream(
    rho: &DensityMatrix,
    phase_sections: usize,
    n_samples: usize,
    seed: u64,
    stream: u64,
) -> Result<QuadratureDataset> {
    if phase_sections == 0 || n_samples == 0 {
        return Err(Error::InvalidArgument("phase_sections and n_samples must be at least 1".into()));
    }
    rho.validate()?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);

    let grid = Grid::new(rho.dim());
    let mut samples = Vec::with_capacity(n_samples);
    let mut section = usize::MAX;
    let mut cdf = Vec::new();
    let mut theta = 0.0;
    for i in 0..n_samples {
        let p = ((i as u128 * phase_sections as u128) / n_samples as u128) as usize;
        if p != section {
            section = p;
            theta = section_center(p, phase_sections);
            cdf = grid.cdf(rho, theta);
        }
        let u: f64 = rng.random();
        samples.push(QuadratureSample { theta, x: grid.invert(&cdf, u) });
    }
    Ok(QuadratureDataset { samples, probe_alpha: Complex64::new(0.0, 0.0), seed })
}

struct Grid {
    xs: Vec<f64>,
    /// Hermite functions at every node, node-major.
    psi: Vec<f64>,
    dim: usize,
}

impl Grid {
    fn new(dim: usize) -> Self {
        let n = (2.0 * TABLE_RANGE / TABLE_STEP).round() as usize + 1;
        let xs: Vec<f64> = (0..n).map(|i| -TABLE_RANGE + i as f64 * TABLE_STEP).collect();
        let mut psi = vec![0.0; n * dim];
        for (i, &x) in xs.iter().enumerate() {
            hermite_functions(dim, x, &mut psi[i * dim..(i + 1) * dim]);
        }
        Grid { xs, psi, dim }
    }

    /// Normalized cumulative distribution at the nodes.
    fn cdf(&self, rho: &DensityMatrix, theta: f64) -> Vec<f64> {
        let d = self.dim;
        let pdf: Vec<f64> = (0..self.xs.len()).map(|i| pdf_with_wavefunctions(rho, theta, &self.psi[i * d..(i + 1) * d])).collect();
        let mut cdf = Vec::with_capacity(pdf.len());
        let mut acc = 0.0;
        cdf.push(0.0);
        for w in pdf.windows(2) {
            acc += 0.5 * (w[0] + w[1]) * TABLE_STEP;
            cdf.push(acc);
        }
        let total = acc;
        cdf.iter_mut().for_each(|c| *c /= total);
        cdf
    }

    fn invert(&self, cdf: &[f64], u: f64) -> f64 {
        // first node with cdf > u, so cdf[j-1] <= u < cdf[j]
        let j = cdf.partition_point(|&c| c <= u).clamp(1, cdf.len() - 1);
        let (c0, c1) = (cdf[j - 1], cdf[j]);
        let frac = if c1 > c0 { (u - c0) / (c1 - c0) } else { 0.5 };
        self.xs[j - 1] + frac * TABLE_STEP
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_samples_rejected() {
        let v = DensityMatrix::vacuum(3);
        assert!(sample_dataset(&v, 20, 0, 1).is_err());
        assert!(sample_dataset(&v, 0, 10, 1).is_err());
    }

    #[test]
    fn sections_are_contiguous_and_balanced() {
        let v = DensityMatrix::vacuum(3);
        let ds = sample_dataset(&v, 4, 10, 7).unwrap();
        let sections: Vec<usize> = ds.samples.iter().map(|s| crate::homodyne::section_of(s.theta, 4)).collect();
        assert_eq!(sections, vec![0, 0, 0, 1, 1, 2, 2, 2, 3, 3]);
    }

    #[test]
    fn deterministic_given_seed() {
        let rho = crate::fock::coherent_density(Complex64::new(0.5, 0.2), 8).unwrap();
        let a = sample_dataset(&rho, 5, 500, 42).unwrap();
        let b = sample_dataset(&rho, 5, 500, 42).unwrap();
        let c = sample_dataset(&rho, 5, 500, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, sample_dataset_stream(&rho, 5, 500, 42, 1).unwrap());
    }
}
