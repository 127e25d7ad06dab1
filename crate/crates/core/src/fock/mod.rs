// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! Truncated Fock-space states and processes.

mod channel;
pub(crate) mod process;
mod state;
mod wigner;

pub use channel::{loss_channel_tensor, ChannelModel};
pub use process::{InvariantReport, ProcessTensor};
pub use state::{coherent_amplitudes, coherent_density, state_fidelity, DensityMatrix};
pub use wigner::{wigner, wigner_point, wigner_point_kernel, WignerGrid, WIGNER_BOUND};
