// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Balanced homodyne detection: quadrature statistics, binned measurement
//! operators and synthetic data.
//!
//! The measured observable at local-oscillator phase `theta` is
//! `X_theta = (a e^{-i theta} + a^dag e^{i theta}) / 2`, whose eigenvectors are
//! `|x_theta> = e^{i theta n} |x>` with `<n|x> = psi_n(x)`.

mod pdf;
mod povm;
pub mod quadrature;
mod sampler;

pub use pdf::quadrature_pdf;
pub use povm::{build_povm, uniform_edges, HomodynePovm};
pub use sampler::{sample_dataset, sample_dataset_stream, QuadratureDataset, QuadratureSample, TABLE_RANGE, TABLE_STEP};

pub use crate::special::{hermite_functions, quadrature_wavefunction};

use std::f64::consts::TAU;

/// Center phase of section `p` out of `sections` uniform sections on `[0, 2pi)`.
pub fn section_center(p: usize, sections: usize) -> f64 {
    (p as f64 + 0.5) * TAU / sections as f64
}

/// Section index of a phase in `[0, 2pi)`.
pub fn section_of(theta: f64, sections: usize) -> usize {
    let t = theta.rem_euclid(TAU);
    ((t / TAU * sections as f64).floor() as usize).min(sections - 1)
}
