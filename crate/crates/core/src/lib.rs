// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Coherent-state quantum process tomography with simulated homodyne data.
//!
//! The crate is organized bottom-up:
//!
//! * [`fock`]: density matrices, process tensors, the lossy phase channel,
//!   Wigner functions and fidelities in a truncated Fock basis.
//! * [`homodyne`]: quadrature wavefunctions, measurement statistics, binned
//!   measurement operators and a deterministic data sampler.
//! * [`mle`]: iterative maximum-likelihood reconstruction of states and of
//!   processes probed with coherent states.
//! * [`analysis`]: photon-number transfer, phase extraction, model fits and
//!   output-state prediction from a reconstructed tensor.
//! * [`io`]: plain-text file formats for all of the above.
//! * [`experiment`]: simulated end-to-end runs tying the pieces together.

pub mod analysis;
pub mod error;
pub mod experiment;
pub mod fock;
pub mod homodyne;
pub mod io;
pub mod linalg;
pub mod mle;
pub mod special;

pub use error::{Error, Result};
pub use num_complex::Complex64;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fock.md")]
    mod fock {}
    #[doc = include_str!("../../../book/src/homodyne.md")]
    mod homodyne {}
    #[doc = include_str!("../../../book/src/reconstruction.md")]
    mod reconstruction {}
    #[doc = include_str!("../../../book/src/analysis.md")]
    mod analysis {}
    #[doc = include_str!("../../../book/src/files.md")]
    mod files {}
}
