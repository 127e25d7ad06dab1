// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Dense complex Hermitian helpers on top of nalgebra.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

pub type CMatrix = DMatrix<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Eigen-decomposition of a Hermitian matrix, eigenvalues unsorted.
pub fn eigh(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = SymmetricEigen::new(m.clone());
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

pub fn min_eigenvalue(m: &CMatrix) -> f64 {
    let (vals, _) = eigh(m);
    vals.into_iter().fold(f64::INFINITY, f64::min)
}

/// `V f(D) V^dag` for a Hermitian `m = V D V^dag`.
pub fn hermitian_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let (vals, vecs) = eigh(m);
    let mut scaled = vecs.clone();
    for (j, &v) in vals.iter().enumerate() {
        let s = f(v);
        scaled.column_mut(j).scale_mut(s);
    }
    hermitize(&(scaled * vecs.adjoint()))
}

/// Square root of the PSD part of a Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_map(m, |v| v.max(0.0).sqrt())
}

/// `(m + m^dag) / 2`, exactly Hermitian in floating point.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    let n = m.nrows();
    let mut out = m.clone();
    for i in 0..n {
        out[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in i + 1..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    out
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

/// `Tr(a b)` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> Complex64 {
    let n = a.nrows();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}

/// Uhlmann fidelity `(Tr sqrt(sqrt(a) b sqrt(a)))^2`, clamped into [0, 1].
pub fn uhlmann_fidelity(a: &CMatrix, b: &CMatrix) -> f64 {
    let sa = psd_sqrt(a);
    let inner = hermitize(&(&sa * b * &sa));
    let (vals, _) = eigh(&inner);
    let root: f64 = vals.iter().map(|v| v.max(0.0).sqrt()).sum();
    (root * root).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn random_hermitian(n: usize, seed: u64) -> CMatrix {
        let mut s = seed;
        let mut next = || {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let a = CMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
        hermitize(&(&a * a.adjoint()))
    }

    #[test]
    fn sqrt_squares_back() {
        let m = random_hermitian(6, 3);
        let s = psd_sqrt(&m);
        assert!((&s * &s - &m).norm() < 1e-12);
    }

    #[test]
    fn hermitize_is_exact() {
        let a = CMatrix::from_fn(4, 4, |i, j| Complex64::new(i as f64 * 0.3 + j as f64, 0.1 * (i as f64 - 2.0 * j as f64)));
        let h = hermitize(&a);
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn fidelity_of_commuting_states() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE * 0.5, ONE * 0.5]));
        let b = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE * 0.9, ONE * 0.1]));
        let expected = ((0.45f64).sqrt() + (0.05f64).sqrt()).powi(2);
        assert!((uhlmann_fidelity(&a, &b) - expected).abs() < 1e-12);
    }
}
