// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Wigner functions in the `X = (a + a^dag)/2`, `Y = (a - a^dag)/(2i)` convention.
//!
//! With this scaling a coherent state `|alpha>` has its Wigner peak at
//! `(Re alpha, Im alpha)`, the vacuum peak is `2/pi`, and the function
//! integrates to `Tr rho` over the plane.

use std::f64::consts::{FRAC_2_PI, PI};

use num_complex::Complex64;

use super::DensityMatrix;
use crate::error::{Error, Result};
use crate::special::{hermite_functions, laguerre, ln_factorial};

/// `|W| <= 2/pi` for every physical state.
pub const WIGNER_BOUND: f64 = FRAC_2_PI;

#[derive(Debug, Clone, PartialEq)]
pub struct WignerGrid {
    pub x_axis: Vec<f64>,
    pub y_axis: Vec<f64>,
    /// `values[i][j] = W(x_axis[i], y_axis[j])`
    pub values: Vec<Vec<f64>>,
}

impl WignerGrid {
    /// Trapezoidal integral over the grid.
    pub fn integral(&self) -> f64 {
        let wx = trapezoid_weights(&self.x_axis);
        let wy = trapezoid_weights(&self.y_axis);
        let mut acc = 0.0;
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                acc += wx[i] * wy[j] * v;
            }
        }
        acc
    }

    /// First moments `(<X>, <Y>)` of the gridded function.
    pub fn centroid(&self) -> (f64, f64) {
        let wx = trapezoid_weights(&self.x_axis);
        let wy = trapezoid_weights(&self.y_axis);
        let (mut total, mut mx, mut my) = (0.0, 0.0, 0.0);
        for (i, row) in self.values.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                let w = wx[i] * wy[j] * v;
                total += w;
                mx += w * self.x_axis[i];
                my += w * self.y_axis[j];
            }
        }
        (mx / total, my / total)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().flatten().copied().fold(f64::INFINITY, f64::min)
    }
}

fn trapezoid_weights(axis: &[f64]) -> Vec<f64> {
    let n = axis.len();
    let mut w = vec![0.0; n];
    for i in 0..n.saturating_sub(1) {
        let h = 0.5 * (axis[i + 1] - axis[i]);
        w[i] += h;
        w[i + 1] += h;
    }
    w
}

fn check_axis(axis: &[f64], name: &str) -> Result<()> {
    if axis.is_empty() || axis.windows(2).any(|w| !(w[1] > w[0])) || axis.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("{name} must be nonempty, finite and strictly increasing")));
    }
    Ok(())
}

/// Evaluates `W` on the tensor grid `x_axis x y_axis` (Laguerre series).
pub fn wigner(rho: &DensityMatrix, x_axis: &[f64], y_axis: &[f64]) -> Result<WignerGrid> {
    check_axis(x_axis, "x_axis")?;
    check_axis(y_axis, "y_axis")?;
    let values = x_axis
        .iter()
        .map(|&x| y_axis.iter().map(|&y| wigner_point(rho, x, y)).collect())
        .collect();
    Ok(WignerGrid { x_axis: x_axis.to_vec(), y_axis: y_axis.to_vec(), values })
}

/// `W(x, y)` from the Fock-basis series
/// `W_{|m><n|}(b) = (2/pi) (-1)^n sqrt(n!/m!) (2 conj b)^(m-n) e^{-2|b|^2} L_n^(m-n)(4|b|^2)`, `m >= n`,
/// with `b = x + iy`.
pub fn wigner_point(rho: &DensityMatrix, x: f64, y: f64) -> f64 {
    let d = rho.dim();
    let beta_conj = Complex64::new(x, -y);
    let r2 = x * x + y * y;
    let gauss = (-2.0 * r2).exp();
    let arg = 4.0 * r2;
    let two_b = beta_conj * 2.0;
    let mut acc = 0.0;
    for n in 0..d {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        // m = n term
        acc += rho.get(n, n).re * sign * laguerre(n, 0.0, arg);
        let mut power = Complex64::new(1.0, 0.0);
        for m in n + 1..d {
            let diff = m - n;
            power *= two_b;
            let norm = (0.5 * (ln_factorial(n) - ln_factorial(m))).exp();
            let term = power * (sign * norm * laguerre(n, diff as f64, arg));
            acc += 2.0 * (rho.get(m, n) * term).re;
        }
    }
    FRAC_2_PI * gauss * acc
}

/// `W(x, y)` by direct quadrature of
/// `(1/pi) int <x + u/2| rho |x - u/2> e^{-2iuy} du`, the position-space
/// definition rescaled to vacuum variance 1/4.
pub fn wigner_point_kernel(rho: &DensityMatrix, x: f64, y: f64) -> f64 {
    const HALF_SPAN: f64 = 16.0;
    const STEP: f64 = 0.005;
    let d = rho.dim();
    let steps = (2.0 * HALF_SPAN / STEP).round() as usize;
    let mut plus = vec![0.0; d];
    let mut minus = vec![0.0; d];
    let mut acc = 0.0;
    for s in 0..=steps {
        let u = -HALF_SPAN + s as f64 * STEP;
        hermite_functions(d, x + 0.5 * u, &mut plus);
        hermite_functions(d, x - 0.5 * u, &mut minus);
        let mut kernel = Complex64::new(0.0, 0.0);
        for m in 0..d {
            if plus[m] == 0.0 {
                continue;
            }
            for n in 0..d {
                kernel += rho.get(m, n) * (plus[m] * minus[n]);
            }
        }
        let w = if s == 0 || s == steps { 0.5 } else { 1.0 };
        acc += w * (kernel * Complex64::from_polar(1.0, -2.0 * u * y)).re;
    }
    acc * STEP / PI
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::coherent_density;

    #[test]
    fn vacuum_peak() {
        let v = DensityMatrix::vacuum(4);
        assert!((wigner_point(&v, 0.0, 0.0) - 2.0 / PI).abs() < 1e-15);
        assert!((wigner_point_kernel(&v, 0.0, 0.0) - 2.0 / PI).abs() < 1e-10);
        // rotational symmetry
        let a = wigner_point(&v, 0.3, 0.4);
        let b = wigner_point(&v, 0.5, 0.0);
        assert!((a - b).abs() < 1e-15);
    }

    #[test]
    fn coherent_state_is_displaced_gaussian() {
        let alpha = Complex64::from_polar(0.8250, 0.7);
        let rho = coherent_density(alpha, 15).unwrap();
        for &(x, y) in &[(0.0, 0.0), (0.6, 0.5), (-0.4, 1.1)] {
            let expected = 2.0 / PI * (-2.0 * ((x - alpha.re).powi(2) + (y - alpha.im).powi(2))).exp();
            assert!((wigner_point(&rho, x, y) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn fock_one_is_negative_at_origin() {
        let one = DensityMatrix::fock(1, 3).unwrap();
        assert!((wigner_point(&one, 0.0, 0.0) + 2.0 / PI).abs() < 1e-15);
    }

    #[test]
    fn axes_must_increase() {
        let v = DensityMatrix::vacuum(2);
        assert!(wigner(&v, &[0.0, 0.0], &[0.0]).is_err());
        assert!(wigner(&v, &[], &[0.0]).is_err());
    }
}
