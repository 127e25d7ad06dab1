// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};

/// Eigenvalue slack accepted when validating positivity.
pub const PSD_SLACK: f64 = 1e-9;
/// Allowed deviation of the trace from one.
pub const TRACE_SLACK: f64 = 1e-6;

/// A density matrix in the Fock basis `|0>, ..., |dim-1>`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a matrix. The input is Hermitized first, so tiny
    /// rounding asymmetries are accepted.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let rho = Self::from_matrix_unchecked(matrix)?;
        rho.validate()?;
        Ok(rho)
    }

    /// Wraps a square matrix after Hermitizing it, without positivity or
    /// trace checks. Used for channel outputs that may lose trace to truncation.
    pub fn from_matrix_unchecked(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidArgument(format!(
                "density matrix must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix: linalg::hermitize(&matrix) })
    }

    /// Pure state from (not necessarily normalized) Fock amplitudes.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|c| c.norm_sqr()).sum();
        if amplitudes.is_empty() || norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidArgument("pure state needs a nonzero amplitude vector".into()));
        }
        let d = amplitudes.len();
        let m = CMatrix::from_fn(d, d, |i, j| amplitudes[i] * amplitudes[j].conj() / norm);
        Self::new(m)
    }

    pub fn vacuum(dim: usize) -> Self {
        Self::fock(0, dim).expect("vacuum fits any dimension")
    }

    pub fn fock(n: usize, dim: usize) -> Result<Self> {
        if n >= dim {
            return Err(Error::InvalidArgument(format!("Fock state |{n}> needs dim > {n}, got {dim}")));
        }
        let mut m = CMatrix::zeros(dim, dim);
        m[(n, n)] = Complex64::new(1.0, 0.0);
        Ok(Self { matrix: m })
    }

    /// Normalized two-level superposition `c0|0> + c1|1>`.
    pub fn superposition(c0: Complex64, c1: Complex64, dim: usize) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidArgument("superposition needs dim >= 2".into()));
        }
        let mut amps = vec![ZERO; dim];
        amps[0] = c0;
        amps[1] = c1;
        Self::pure(&amps)
    }

    /// Maximally mixed state `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        let m = CMatrix::identity(dim, dim) * Complex64::new(1.0 / dim as f64, 0.0);
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.matrix[(m, n)]
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.matrix).re
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::min_eigenvalue(&self.matrix)
    }

    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > TRACE_SLACK {
            return Err(Error::InvalidArgument(format!("trace {tr} is not within {TRACE_SLACK} of 1")));
        }
        let lam = self.min_eigenvalue();
        if lam < -PSD_SLACK {
            return Err(Error::InvalidArgument(format!("matrix is not positive semidefinite (min eigenvalue {lam:e})")));
        }
        Ok(())
    }

    /// Photon-number distribution `rho_nn`.
    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|c| c.re).collect()
    }

    pub fn mean_photon_number(&self) -> f64 {
        self.populations().iter().enumerate().map(|(n, p)| n as f64 * p).sum()
    }

    /// `<a> = Tr(rho a)`; its real and imaginary parts are the Wigner-function centroid.
    pub fn mean_amplitude(&self) -> Complex64 {
        (1..self.dim()).map(|m| self.matrix[(m, m - 1)] * (m as f64).sqrt()).sum()
    }

    /// `exp(i phi n) rho exp(-i phi n)`.
    pub fn rotated(&self, phi: f64) -> Self {
        let d = self.dim();
        let m = CMatrix::from_fn(d, d, |i, j| self.matrix[(i, j)] * Complex64::from_polar(1.0, (i as f64 - j as f64) * phi));
        Self { matrix: linalg::hermitize(&m) }
    }

    /// Embeds into a larger space (zero padding) or truncates and renormalizes
    /// into a smaller one.
    pub fn resized(&self, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        let keep = dim.min(self.dim());
        let mut m = CMatrix::zeros(dim, dim);
        m.view_mut((0, 0), (keep, keep)).copy_from(&self.matrix.view((0, 0), (keep, keep)));
        let tr = linalg::trace(&m).re;
        if tr <= 0.0 {
            return Err(Error::Truncation { dim, trace: tr });
        }
        Self::from_matrix_unchecked(m / Complex64::new(tr, 0.0))
    }
}

/// Unnormalized truncated coherent-state amplitudes `exp(-|a|^2/2) a^m / sqrt(m!)`.
pub fn coherent_amplitudes(alpha: Complex64, dim: usize) -> Vec<Complex64> {
    let mut c = Vec::with_capacity(dim);
    let mut cur = Complex64::new((-alpha.norm_sqr() / 2.0).exp(), 0.0);
    for m in 0..dim {
        if m > 0 {
            cur = cur * alpha / (m as f64).sqrt();
        }
        c.push(cur);
    }
    c
}

/// Density matrix of the coherent state `|alpha>`, renormalized after truncation.
///
/// Fails with [`Error::Truncation`] when `|alpha|^2 > dim/4` or when the
/// truncated series keeps less than 0.999 of the norm.
pub fn coherent_density(alpha: Complex64, dim: usize) -> Result<DensityMatrix> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let c = coherent_amplitudes(alpha, dim);
    let trace: f64 = c.iter().map(|z| z.norm_sqr()).sum();
    if trace < 0.999 || alpha.norm_sqr() > dim as f64 / 4.0 {
        return Err(Error::Truncation { dim, trace });
    }
    DensityMatrix::pure(&c)
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`.
pub fn state_fidelity(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), got: b.dim() });
    }
    Ok(linalg::uhlmann_fidelity(a.matrix(), b.matrix()))
}
