// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};

/// A single-mode channel as the rank-4 tensor `eps[k][l][m][n] = <k| E(|m><n|) |l>`.
///
/// Stored as its Choi matrix `C[(k,m),(l,n)]` (output index major), which is
/// positive semidefinite exactly when the channel is completely positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ProcessTensor {
    dim: usize,
    choi: CMatrix,
}

/// Measured deviations from the three tensor invariants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantReport {
    /// Largest `|eps[k][l][m][n] - conj(eps[l][k][n][m])|`.
    pub hermiticity_error: f64,
    /// Largest `|sum_k eps[k][k][m][n] - delta_mn|`.
    pub tp_residual: f64,
    pub min_choi_eigenvalue: f64,
}

impl InvariantReport {
    pub fn holds(&self, tp_tol: f64) -> bool {
        self.hermiticity_error == 0.0 && self.tp_residual <= tp_tol && self.min_choi_eigenvalue >= -1e-6
    }
}

impl ProcessTensor {
    pub fn from_choi(dim: usize, choi: CMatrix) -> Result<Self> {
        let d2 = dim * dim;
        if dim == 0 || choi.nrows() != d2 || choi.ncols() != d2 {
            return Err(Error::DimensionMismatch { expected: d2, got: choi.nrows() });
        }
        Ok(Self { dim, choi: linalg::hermitize(&choi) })
    }

    /// Builds the tensor elementwise from `f(k, l, m, n)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize, usize, usize) -> Complex64) -> Result<Self> {
        let d2 = dim * dim;
        let choi = CMatrix::from_fn(d2, d2, |r, c| f(r / dim, c / dim, r % dim, c % dim));
        Self::from_choi(dim, choi)
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_fn(dim, |k, l, m, n| if k == m && l == n { Complex64::new(1.0, 0.0) } else { ZERO })
            .expect("identity dims are consistent")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    #[inline]
    pub fn get(&self, k: usize, l: usize, m: usize, n: usize) -> Complex64 {
        self.choi[(k * self.dim + m, l * self.dim + n)]
    }

    /// `rho_out[k][l] = sum_mn eps[k][l][m][n] rho[m][n]`.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: rho.dim() });
        }
        let d = self.dim;
        let r = rho.matrix();
        let mut out = CMatrix::zeros(d, d);
        for k in 0..d {
            for l in k..d {
                let mut acc = ZERO;
                for m in 0..d {
                    for n in 0..d {
                        acc += self.choi[(k * d + m, l * d + n)] * r[(m, n)];
                    }
                }
                out[(k, l)] = acc;
                out[(l, k)] = acc.conj();
            }
        }
        DensityMatrix::from_matrix_unchecked(out)
    }

    /// Sequential composition: `self` first, then `after`.
    pub fn then(&self, after: &ProcessTensor) -> Result<ProcessTensor> {
        if after.dim != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: after.dim });
        }
        let d = self.dim;
        Self::from_fn(d, |k, l, m, n| {
            let mut acc = ZERO;
            for p in 0..d {
                for q in 0..d {
                    acc += after.get(k, l, p, q) * self.get(p, q, m, n);
                }
            }
            acc
        })
    }

    /// `sum_k eps[k][k][m][n]` as a matrix over the input indices.
    pub fn output_trace(&self) -> CMatrix {
        let d = self.dim;
        CMatrix::from_fn(d, d, |m, n| (0..d).map(|k| self.get(k, k, m, n)).sum())
    }

    pub fn invariants(&self) -> InvariantReport {
        let d = self.dim;
        let mut herm: f64 = 0.0;
        for k in 0..d {
            for l in 0..d {
                for m in 0..d {
                    for n in 0..d {
                        herm = herm.max((self.get(k, l, m, n) - self.get(l, k, n, m).conj()).norm());
                    }
                }
            }
        }
        let tr = self.output_trace();
        let tp = CMatrix::identity(d, d);
        let tp_residual = (tr - tp).iter().map(|z| z.norm()).fold(0.0, f64::max);
        InvariantReport {
            hermiticity_error: herm,
            tp_residual,
            min_choi_eigenvalue: linalg::min_eigenvalue(&self.choi),
        }
    }

    pub fn validate(&self, tp_tol: f64) -> Result<()> {
        let rep = self.invariants();
        if rep.holds(tp_tol) {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("process tensor violates its invariants: {rep:?}")))
        }
    }

    /// Choi matrix scaled to unit trace (`C / dim` for a trace-preserving map).
    pub fn normalized_choi(&self) -> CMatrix {
        let tr = linalg::trace(&self.choi).re;
        &self.choi / Complex64::new(tr, 0.0)
    }

    /// The leading `dim` levels, rescaled on the input side so that the
    /// result is again trace preserving.
    pub fn truncated(&self, dim: usize) -> Result<Self> {
        if dim == 0 || dim > self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: dim });
        }
        let choi = Self::from_fn(dim, |k, l, m, n| self.get(k, l, m, n))?.choi;
        Self::from_choi(dim, enforce_trace_preservation(dim, &choi))
    }

    /// Number of nonzero elements.
    pub fn nonzero_count(&self) -> usize {
        self.choi.iter().filter(|z| **z != ZERO).count()
    }
}

/// Eigenvalue floor, relative to the largest, when inverting `Tr_out K`.
const TRACE_FLOOR: f64 = 1e-13;

/// `(I (x) L^{-1/2}) K (I (x) L^{-1/2})` with `L = Tr_out K`, which makes a
/// positive Choi matrix trace preserving.
pub(crate) fn enforce_trace_preservation(dim: usize, k: &CMatrix) -> CMatrix {
    let d = dim;
    let lambda = linalg::hermitize(&CMatrix::from_fn(d, d, |m, n| (0..d).map(|o| k[(o * d + m, o * d + n)]).sum()));
    let floor = linalg::eigh(&lambda).0.into_iter().fold(0.0, f64::max) * TRACE_FLOOR;
    let inv_sqrt = linalg::hermitian_map(&lambda, |v| 1.0 / v.max(floor).sqrt());
    let x = CMatrix::identity(d, d).kronecker(&inv_sqrt);
    linalg::hermitize(&(&x * k * &x))
}
