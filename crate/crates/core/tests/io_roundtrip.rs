// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use std::fs;
use std::path::PathBuf;

use csqpt::fock::{coherent_density, loss_channel_tensor, ChannelModel, DensityMatrix, ProcessTensor};
use csqpt::homodyne::{sample_dataset, QuadratureDataset, QuadratureSample};
use csqpt::io::{read_dataset, read_density, read_manifest, read_tensor, write_dataset, write_density, write_manifest, write_tensor, Manifest, ManifestEntry};
use csqpt::linalg::CMatrix;
use csqpt::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_choi(seed: u64, d: usize) -> ProcessTensor {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = CMatrix::from_fn(d * d, d * d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1e3..1e3)));
    ProcessTensor::from_choi(d, &a * a.adjoint()).unwrap()
}

#[test]
fn loss_tensor_file_lists_nonzero_elements_only() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    let t = loss_channel_tensor(&ChannelModel::new(0.62, 0.92).unwrap(), 5).unwrap();
    write_tensor(&p, &t).unwrap();
    let text = fs::read_to_string(&p).unwrap();
    assert!(text.starts_with("# process-tensor dim=5\n"));
    assert_eq!(text.lines().count() - 1, t.nonzero_count());
    assert_eq!(read_tensor(&p).unwrap(), t);
}

#[test]
fn missing_and_malformed_files() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let e = read_tensor(&missing).unwrap_err();
    assert!(matches!(e, Error::Io { .. }) && e.to_string().contains("nope.csv"));

    let p = dir.path().join("bad.csv");
    fs::write(&p, "# process-tensor dim=2\n0,0,0,0,1,0\n0,0,2,0,1,0\n").unwrap();
    assert!(matches!(read_tensor(&p), Err(Error::Parse { line: 3, .. })));
    fs::write(&p, "# density-matrix dim=2\n0,0,0.5,0\n1,1,0.5\n").unwrap();
    assert!(matches!(read_density(&p), Err(Error::Parse { line: 3, .. })));
    fs::write(&p, "# density-matrix dim=2\n0,0,2,0\n").unwrap();
    assert!(read_density(&p).is_err());
    fs::write(&p, "# manifest\n0,0\n").unwrap();
    assert!(matches!(read_manifest(&p), Err(Error::Parse { line: 2, .. })));
    fs::write(&p, "# quadrature-dataset alpha_re=0 alpha_im=0 seed=x\n0,0\n").unwrap();
    assert!(matches!(read_dataset(&p), Err(Error::Parse { line: 1, .. })));
}

#[test]
fn dataset_files_are_byte_identical_for_the_same_seed() {
    let dir = tempfile::tempdir().unwrap();
    let rho = coherent_density(Complex64::new(0.55, 0.0), 10).unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    write_dataset(&a, &sample_dataset(&rho, 20, 5000, 9).unwrap()).unwrap();
    write_dataset(&b, &sample_dataset(&rho, 20, 5000, 9).unwrap()).unwrap();
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn manifest_paths_resolve_next_to_the_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("m.csv");
    let m = Manifest {
        entries: vec![
            ManifestEntry { alpha: Complex64::new(0.1375, 0.0), path: PathBuf::from("probe_1.csv") },
            ManifestEntry { alpha: Complex64::new(-0.5, 0.25), path: PathBuf::from("sub dir/x.csv") },
        ],
        notes: vec!["eta=0.62 phi=0.92".into()],
    };
    write_manifest(&p, &m).unwrap();
    let back = read_manifest(&p).unwrap();
    assert_eq!(back, m);
    assert_eq!(back.resolved(&p)[1].1, dir.path().join("sub dir/x.csv"));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn tensor_round_trip_is_exact(seed in any::<u64>(), d in 1usize..6) {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("t.csv");
        let t = random_choi(seed, d);
        write_tensor(&p, &t).unwrap();
        prop_assert_eq!(read_tensor(&p).unwrap(), t);
    }

    #[test]
    fn density_round_trip_is_exact(seed in any::<u64>(), d in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
        let m = &a * a.adjoint();
        let tr = m.trace();
        let rho = DensityMatrix::new(m / tr).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.csv");
        write_density(&p, &rho).unwrap();
        prop_assert_eq!(read_density(&p).unwrap(), rho);
    }

    #[test]
    fn dataset_round_trip_is_exact(
        xs in proptest::collection::vec((0.0f64..std::f64::consts::TAU, -1e6f64..1e6), 1..200),
        re in -2.0f64..2.0, im in -2.0f64..2.0, seed in any::<u64>(),
    ) {
        let ds = QuadratureDataset {
            samples: xs.into_iter().map(|(theta, x)| QuadratureSample { theta, x }).collect(),
            probe_alpha: Complex64::new(re, im),
            seed,
        };
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("d.csv");
        write_dataset(&p, &ds).unwrap();
        prop_assert_eq!(read_dataset(&p).unwrap(), ds);
    }
}
