// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use csqpt::analysis::{diagonal_block, fit_global_phase, fit_phase_law, fit_transmissivity, phase_map, predict_output, MAG_FLOOR, PHASE_BLOCKS};
use csqpt::fock::{loss_channel_tensor, ChannelModel, DensityMatrix, ProcessTensor};
use csqpt::linalg::CMatrix;
use csqpt::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn loss(eta: f64, phi: f64, dim: usize) -> ProcessTensor {
    loss_channel_tensor(&ChannelModel::new(eta, phi).unwrap(), dim).unwrap()
}

fn random_matrix(rng: &mut impl Rng, d: usize) -> CMatrix {
    CMatrix::from_fn(d, d, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
}

/// Random CPTP map from Kraus operators `A_j S^{-1/2}`, `S = sum_j A_j^dag A_j`.
fn random_channel(rng: &mut impl Rng, d: usize, rank: usize) -> ProcessTensor {
    let a: Vec<CMatrix> = (0..rank).map(|_| random_matrix(rng, d)).collect();
    let s = a.iter().fold(CMatrix::zeros(d, d), |acc, k| acc + k.adjoint() * k);
    let eig = s.symmetric_eigen();
    let inv_sqrt = &eig.eigenvectors
        * CMatrix::from_diagonal(&eig.eigenvalues.map(|v| Complex64::new(1.0 / v.sqrt(), 0.0)))
        * eig.eigenvectors.adjoint();
    let kraus: Vec<CMatrix> = a.iter().map(|k| k * &inv_sqrt).collect();
    // eps[k][l][m][n] = sum_j K_j[k][m] conj(K_j[l][n])
    ProcessTensor::from_fn(d, |k, l, m, n| kraus.iter().map(|kj| kj[(k, m)] * kj[(l, n)].conj()).sum()).unwrap()
}

#[test]
fn transmissivity_grid_round_trip() {
    for i in 1..=9 {
        let eta = i as f64 / 10.0;
        let got = fit_transmissivity(&diagonal_block(&loss(eta, 0.4, 7))).unwrap();
        assert!((got - eta).abs() <= 1e-6, "eta {eta}: {got}");
    }
}

#[test]
fn global_phase_grid_round_trip() {
    for phi in [0.3, 0.92, 2.0] {
        let fit = fit_global_phase(&loss(0.62, phi, 7)).unwrap();
        assert!((fit.phi_hat - phi).abs() <= 1e-9, "phi {phi}: {}", fit.phi_hat);
        assert!(fit.residual < 1e-9);
    }
}

#[test]
fn least_squares_on_reported_block_means() {
    let fit = fit_phase_law(&[(0, 1, 0.92), (0, 2, 1.8182), (0, 3, 2.7849)]);
    assert!((fit.phi_hat - 12.9111 / 14.0).abs() < 1e-12);
}

#[test]
fn analytic_phase_maps_have_no_spread() {
    let t = loss(0.62, 0.92, 7);
    for (k, l) in PHASE_BLOCKS {
        let entries = phase_map(&t, k, l, MAG_FLOOR).unwrap();
        assert!(!entries.is_empty());
        let expected = (l - k) as f64 * 0.92;
        for (m, n, ph) in entries {
            assert!((ph - expected).abs() < 1e-12, "({k},{l},{m},{n}): {ph}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn prediction_is_a_state_for_any_channel(d in 1usize..7, rank in 1usize..4, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t = random_channel(&mut rng, d, rank);
        prop_assert!(t.invariants().holds(1e-9));
        let a = random_matrix(&mut rng, d);
        let m = &a * a.adjoint();
        let tr = m.trace();
        let rho = DensityMatrix::new(m / tr).unwrap();
        let out = predict_output(&t, &rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() <= 1e-9);
        prop_assert!(out.min_eigenvalue() >= -1e-6);
    }

    #[test]
    fn transmissivity_fit_inverts_the_model(eta in 0.0f64..=1.0, dim in 2usize..9) {
        let got = fit_transmissivity(&diagonal_block(&loss(eta, 1.0, dim))).unwrap();
        prop_assert!((got - eta).abs() <= 1e-6);
    }
}
