// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use num_complex::Complex64;

use crate::fock::DensityMatrix;
use crate::special::hermite_functions;

/// Probability density of outcome `x` at phase `theta`:
/// `p(x|theta) = sum_mn rho_mn e^{i(n-m) theta} psi_m(x) psi_n(x)`.
pub fn quadrature_pdf(rho: &DensityMatrix, theta: f64, x: f64) -> f64 {
    let mut psi = vec![0.0; rho.dim()];
    hermite_functions(rho.dim(), x, &mut psi);
    pdf_with_wavefunctions(rho, theta, &psi)
}

pub(crate) fn pdf_with_wavefunctions(rho: &DensityMatrix, theta: f64, psi: &[f64]) -> f64 {
    let d = rho.dim();
    let mut acc = 0.0;
    for m in 0..d {
        acc += rho.get(m, m).re * psi[m] * psi[m];
        for n in m + 1..d {
            let phase = Complex64::from_polar(1.0, (n - m) as f64 * theta);
            acc += 2.0 * (rho.get(m, n) * phase).re * psi[m] * psi[n];
        }
    }
    debug_assert!(acc > -1e-9, "negative density {acc}");
    acc.max(0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_density;
    use std::f64::consts::PI;

    #[test]
    fn vacuum_is_gaussian_with_quarter_variance() {
        let v = DensityMatrix::vacuum(3);
        for &x in &[-1.0, -0.2, 0.0, 0.7] {
            let g = (2.0 / PI).sqrt() * (-2.0 * x * x as f64).exp();
            assert!((quadrature_pdf(&v, 1.3, x) - g).abs() < 1e-14);
        }
    }

    #[test]
    fn coherent_mean_follows_cosine() {
        // completing the square: Gaussian centered at |a| cos(theta - arg a)
        let alpha = Complex64::from_polar(0.9, 0.4);
        let rho = coherent_density(alpha, 15).unwrap();
        for &theta in &[0.0, 1.0, 2.5, 4.0] {
            let mu = alpha.norm() * (theta - alpha.arg()).cos();
            for &x in &[-0.5, 0.1, 0.9] {
                let g = (2.0 / PI).sqrt() * (-2.0 * (x - mu) * (x - mu)).exp();
                // D = 15 truncation leaves ~|c_15| pointwise error
                assert!((quadrature_pdf(&rho, theta, x) - g).abs() < 2e-6, "theta={theta} x={x}");
            }
        }
    }

    #[test]
    fn single_photon_has_node() {
        let one = DensityMatrix::fock(1, 4).unwrap();
        assert_eq!(quadrature_pdf(&one, 0.0, 0.0), 0.0);
    }
}
