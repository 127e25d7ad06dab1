// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

//! End-to-end runs: simulate probe data through a channel, write it to disk,
//! and reconstruct the channel from a manifest.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::{coherent_density, loss_channel_tensor, ChannelModel};
use crate::homodyne::{sample_dataset_stream, HomodynePovm, QuadratureDataset};
use crate::io::{self, Manifest, ManifestEntry, OutputGuard};
use crate::mle::{bin_dataset, process_mle, BinnedCounts, MleConfig, MleOutcome};
use crate::fock::ProcessTensor;

/// Fock levels used when simulating channel outputs. Large enough that the
/// brightest default probe loses less than 1e-9 of its population.
pub const SIMULATION_DIM: usize = 16;

/// Spacing of the default probe amplitudes.
pub const PROBE_STEP: f64 = 0.1375;
pub const PROBE_COUNT: usize = 9;

/// `0, 0.1375, ..., 1.1` (real).
pub fn default_probe_alphas() -> Vec<Complex64> {
    (0..PROBE_COUNT).map(|i| Complex64::new(i as f64 * PROBE_STEP, 0.0)).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub channel: ChannelModel,
    pub probe_alphas: Vec<Complex64>,
    pub n_samples: usize,
    pub phase_sections: usize,
    pub mle: MleConfig,
    pub seed: u64,
    pub output_dir: PathBuf,
}

impl ExperimentSpec {
    /// Nine real probes up to 1.1, 5e5 samples each, 20 phase sections,
    /// through a channel with `eta = 0.62`, `phi = 0.92`.
    pub fn protocol(output_dir: impl Into<PathBuf>) -> Self {
        ExperimentSpec {
            channel: ChannelModel::new(0.62, 0.92).expect("valid channel"),
            probe_alphas: default_probe_alphas(),
            n_samples: 500_000,
            phase_sections: 20,
            mle: MleConfig::process_default(),
            seed: 2024,
            output_dir: output_dir.into(),
        }
    }

    /// `for_process` additionally requires two distinct probes.
    pub fn validate(&self, for_process: bool) -> Result<()> {
        if self.probe_alphas.is_empty() || self.n_samples == 0 || self.phase_sections == 0 {
            return Err(Error::InvalidArgument("need at least one probe, one sample and one phase section".into()));
        }
        if for_process && self.probe_alphas.iter().all(|a| *a == self.probe_alphas[0]) {
            return Err(Error::InsufficientProbes);
        }
        for a in &self.probe_alphas {
            coherent_density(*a, SIMULATION_DIM)?;
        }
        self.mle.validate()
    }
}

/// Samples every probe through the experiment's channel. Probe `i` uses RNG stream
/// `i` of the experiment seed, so the result does not depend on thread scheduling.
pub fn simulate_probes(spec: &ExperimentSpec) -> Result<Vec<QuadratureDataset>> {
    spec.validate(false)?;
    let channel = loss_channel_tensor(&spec.channel, SIMULATION_DIM)?;
    spec.probe_alphas
        .par_iter()
        .enumerate()
        .map(|(i, &alpha)| {
            let out = channel.apply(&coherent_density(alpha, SIMULATION_DIM)?)?;
            let mut ds = sample_dataset_stream(&out, spec.phase_sections, spec.n_samples, spec.seed, i as u64)?;
            ds.probe_alpha = alpha;
            Ok(ds)
        })
        .collect()
}

pub fn probe_file_name(i: usize) -> String {
    format!("probe_{i}.csv")
}

pub const MANIFEST_NAME: &str = "manifest.csv";

/// Simulates the experiment and writes `probe_<i>.csv` files plus `manifest.csv`
/// into `output_dir`. Returns the manifest path. Nothing is left behind on
/// failure.
pub fn write_simulation(spec: &ExperimentSpec) -> Result<PathBuf> {
    let datasets = simulate_probes(spec)?;
    let dir = &spec.output_dir;
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut guard = OutputGuard::new();
    let mut manifest = Manifest {
        notes: vec![
            format!("eta={} phi={}", spec.channel.eta(), spec.channel.phi()),
            format!("n_samples={} phase_sections={} seed={}", spec.n_samples, spec.phase_sections, spec.seed),
            "probe i uses rng stream i".to_string(),
        ],
        entries: Vec::new(),
    };
    for (i, ds) in datasets.iter().enumerate() {
        let name = probe_file_name(i);
        io::write_dataset(guard.track(dir.join(&name)), ds)?;
        manifest.entries.push(ManifestEntry { alpha: ds.probe_alpha, path: PathBuf::from(name) });
    }
    let manifest_path = guard.track(dir.join(MANIFEST_NAME));
    io::write_manifest(&manifest_path, &manifest)?;
    guard.commit();
    Ok(manifest_path)
}

/// Reads and bins every dataset listed in a manifest.
pub fn load_probes(manifest_path: &Path, povm: &HomodynePovm) -> Result<Vec<(Complex64, BinnedCounts)>> {
    let manifest = io::read_manifest(manifest_path)?;
    manifest
        .resolved(manifest_path)
        .par_iter()
        .map(|(alpha, path)| {
            let ds = io::read_dataset(path)?;
            Ok((*alpha, bin_dataset(&ds, povm)))
        })
        .collect()
}

/// Process reconstruction from the datasets listed in a manifest.
pub fn reconstruct_from_manifest(manifest_path: &Path, povm: &HomodynePovm, cfg: &MleConfig) -> Result<MleOutcome<ProcessTensor>> {
    let probes = load_probes(manifest_path, povm)?;
    process_mle(&probes, povm, cfg)
}
