// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Special functions used across the crate: log-space combinatorics,
//! oscillator eigenfunctions and associated Laguerre polynomials.

/// `ln(n!)`, exact summation for small `n` and Stirling series beyond.
pub fn ln_factorial(n: usize) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 170 {
        return (2..=n).map(|i| (i as f64).ln()).sum();
    }
    let x = n as f64 + 1.0;
    // Stirling series for ln Γ(x)
    (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
}

pub fn ln_binomial(n: usize, k: usize) -> f64 {
    debug_assert!(k <= n);
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    ln_binomial(n, k).exp().round()
}

/// Binomial probability `C(n,k) p^k (1-p)^(n-k)`, exact at the endpoints `p = 0, 1`.
pub fn binomial_pmf(n: usize, k: usize, p: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let mut v = binomial(n, k);
    if k > 0 {
        v *= p.powi(k as i32);
    }
    if n > k {
        v *= (1.0 - p).powi((n - k) as i32);
    }
    v
}

/// Oscillator eigenfunctions `psi_0(x) .. psi_{count-1}(x)` for the quadrature
/// `X = (a + a^dag)/2` (vacuum variance 1/4).
///
/// Evaluated with the normalized three-term recurrence on Hermite functions,
/// which stays finite where `H_n(x)` and `exp(-x^2)` individually overflow.
pub fn hermite_functions(count: usize, x: f64, out: &mut [f64]) {
    debug_assert!(out.len() >= count);
    if count == 0 {
        return;
    }
    let u = std::f64::consts::SQRT_2 * x;
    let c0 = (2.0 / std::f64::consts::PI).powf(0.25);
    out[0] = c0 * (-x * x).exp();
    if count == 1 {
        return;
    }
    out[1] = std::f64::consts::SQRT_2 * u * out[0];
    for n in 1..count - 1 {
        let nf = n as f64;
        out[n + 1] = (2.0 / (nf + 1.0)).sqrt() * u * out[n] - (nf / (nf + 1.0)).sqrt() * out[n - 1];
    }
}

/// Single eigenfunction `psi_n(x)`.
pub fn quadrature_wavefunction(n: usize, x: f64) -> f64 {
    let mut buf = vec![0.0; n + 1];
    hermite_functions(n + 1, x, &mut buf);
    buf[n]
}

/// Generalized Laguerre polynomial `L_n^(alpha)(x)` by upward recurrence.
pub fn laguerre(n: usize, alpha: f64, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}
