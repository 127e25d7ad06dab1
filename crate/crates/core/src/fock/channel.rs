// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::ProcessTensor;
use crate::error::{Error, Result};
use crate::linalg::ZERO;
use crate::special::ln_binomial;

/// Beam-splitter loss with transmissivity `eta` followed by a constant phase `phi`.
/// The environment port is vacuum and traced out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelModel {
    eta: f64,
    phi: f64,
}

impl ChannelModel {
    pub fn new(eta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eta) || !phi.is_finite() {
            return Err(Error::InvalidArgument(format!("channel needs eta in [0,1] and finite phi, got eta={eta}, phi={phi}")));
        }
        let mut phi = phi.rem_euclid(TAU);
        if phi >= TAU {
            phi = 0.0;
        }
        Ok(Self { eta, phi })
    }

    pub fn identity() -> Self {
        Self { eta: 1.0, phi: 0.0 }
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }
}

/// Analytic process tensor of a [`ChannelModel`].
///
/// `eps[k][l][m][n] = sqrt(C(m,k) C(n,l)) eta^((k+l)/2) (1-eta)^(m-k) e^{i(l-k)phi}`
/// when `m-k = n-l >= 0`, zero otherwise. Exactly trace preserving at any
/// truncation because loss never raises the photon number.
pub fn loss_channel_tensor(model: &ChannelModel, dim: usize) -> Result<ProcessTensor> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    let eta = model.eta;
    let sqrt_eta = eta.sqrt();
    let phi = model.phi;
    ProcessTensor::from_fn(dim, |k, l, m, n| {
        if k > m || l > n || m - k != n - l {
            return ZERO;
        }
        let lost = m - k;
        let transmitted = sqrt_eta.powi((k + l) as i32) * (1.0 - eta).powi(lost as i32);
        if transmitted == 0.0 {
            return ZERO;
        }
        let comb = (0.5 * (ln_binomial(m, k) + ln_binomial(n, l))).exp();
        Complex64::from_polar(comb * transmitted, (l as f64 - k as f64) * phi)
    })
}
