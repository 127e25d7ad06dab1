// Copyright 2026 The csqpt Authors
// SPDX-License-Identifier: Apache-2.0

use csqpt::fock::{coherent_density, loss_channel_tensor, wigner, wigner_point, wigner_point_kernel, ChannelModel, DensityMatrix, WIGNER_BOUND};
use csqpt::linalg::CMatrix;
use csqpt::{Complex64, Error};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_state(rng: &mut impl Rng, dim: usize) -> DensityMatrix {
    let a = CMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    let m = &a * a.adjoint();
    let tr = m.trace();
    DensityMatrix::new(m / tr).unwrap()
}

fn binom(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Beam-splitter Kraus operators followed by the phase rotation `e^{-i phi n}`.
fn kraus_evolve(rho: &DensityMatrix, eta: f64, phi: f64) -> CMatrix {
    let d = rho.dim();
    let phase = CMatrix::from_fn(d, d, |i, j| if i == j { Complex64::from_polar(1.0, -phi * i as f64) } else { Complex64::new(0.0, 0.0) });
    let mut out = CMatrix::zeros(d, d);
    for j in 0..d {
        let mut k = CMatrix::zeros(d, d);
        for n in j..d {
            k[(n - j, n)] = Complex64::new((binom(n, j) * (1.0 - eta).powi(j as i32) * eta.powi((n - j) as i32)).sqrt(), 0.0);
        }
        let k = &phase * k;
        out += &k * rho.matrix() * k.adjoint();
    }
    out
}

fn max_dev(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn loss_tensor_matches_kraus_oracle_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let t = loss_channel_tensor(&ChannelModel::new(0.62, 0.92).unwrap(), 8).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_state(&mut rng, 8);
        worst = worst.max(max_dev(t.apply(&rho).unwrap().matrix(), &kraus_evolve(&rho, 0.62, 0.92)));
    }
    assert!(worst <= 1e-10, "max deviation {worst}");
}

#[test]
fn single_photon_through_loss() {
    let t = loss_channel_tensor(&ChannelModel::new(0.62, 0.92).unwrap(), 4).unwrap();
    let out = t.apply(&DensityMatrix::fock(1, 4).unwrap()).unwrap();
    let p = out.populations();
    assert!((p[0] - 0.38).abs() < 1e-12 && (p[1] - 0.62).abs() < 1e-12);
}

#[test]
fn coherent_output_is_attenuated_and_rotated() {
    let t = loss_channel_tensor(&ChannelModel::new(0.62, 0.92).unwrap(), 14).unwrap();
    let alpha = Complex64::new(0.825, 0.0);
    let out = t.apply(&coherent_density(alpha, 14).unwrap()).unwrap();
    let expected = coherent_density(alpha * 0.62f64.sqrt() * Complex64::from_polar(1.0, -0.92), 14).unwrap();
    // the two sides renormalize different truncation tails
    assert!(max_dev(out.matrix(), expected.matrix()) < 1e-7);
    // Wigner center sits at sqrt(eta) |alpha|, turned by 0.92 rad
    let axis: Vec<f64> = (0..321).map(|i| -4.0 + i as f64 * 0.025).collect();
    let (cx, cy) = wigner(&out, &axis, &axis).unwrap().centroid();
    assert!((cx.hypot(cy) - 0.62f64.sqrt() * 0.825).abs() < 1e-4);
    assert!((cy.atan2(cx).abs() - 0.92).abs() < 1e-4);
}

#[test]
fn wigner_centers_of_probe_states() {
    let axis: Vec<f64> = (0..321).map(|i| -4.0 + i as f64 * 0.025).collect();
    for a in [0.275, 0.825, 1.1] {
        let rho = coherent_density(Complex64::new(a, 0.0), 15).unwrap();
        let (cx, cy) = wigner(&rho, &axis, &axis).unwrap().centroid();
        assert!((cx.hypot(cy) - a).abs() < 1e-4, "center {cx},{cy} for {a}");
    }
}

#[test]
fn coherent_density_refuses_states_that_do_not_fit() {
    assert!(matches!(coherent_density(Complex64::new(2.0, 0.0), 6), Err(Error::Truncation { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn loss_tensor_invariants(eta in 0.0f64..=1.0, phi in -10.0f64..10.0, dim in 1usize..9) {
        let t = loss_channel_tensor(&ChannelModel::new(eta, phi).unwrap(), dim).unwrap();
        let rep = t.invariants();
        prop_assert_eq!(rep.hermiticity_error, 0.0);
        prop_assert!(rep.tp_residual <= 1e-12);
        prop_assert!(rep.min_choi_eigenvalue >= -1e-6);
        for k in 0..dim { for l in 0..dim { for m in 0..dim { for n in 0..dim {
            if k as i64 - l as i64 != m as i64 - n as i64 {
                prop_assert_eq!(t.get(k, l, m, n), Complex64::new(0.0, 0.0));
            }
        }}}}
    }

    #[test]
    fn kraus_oracle_any_parameters(eta in 0.0f64..=1.0, phi in 0.0f64..6.28, dim in 1usize..9, seed in any::<u64>()) {
        let rho = random_state(&mut ChaCha8Rng::seed_from_u64(seed), dim);
        let t = loss_channel_tensor(&ChannelModel::new(eta, phi).unwrap(), dim).unwrap();
        prop_assert!(max_dev(t.apply(&rho).unwrap().matrix(), &kraus_evolve(&rho, eta, phi)) <= 1e-10);
    }

    #[test]
    fn loss_channels_compose(e1 in 0.0f64..=1.0, p1 in 0.0f64..6.28, e2 in 0.0f64..=1.0, p2 in 0.0f64..6.28, dim in 1usize..9, seed in any::<u64>()) {
        let rho = random_state(&mut ChaCha8Rng::seed_from_u64(seed), dim);
        let a = loss_channel_tensor(&ChannelModel::new(e1, p1).unwrap(), dim).unwrap();
        let b = loss_channel_tensor(&ChannelModel::new(e2, p2).unwrap(), dim).unwrap();
        let ab = loss_channel_tensor(&ChannelModel::new(e1 * e2, p1 + p2).unwrap(), dim).unwrap();
        let two_steps = b.apply(&a.apply(&rho).unwrap()).unwrap();
        prop_assert!(max_dev(two_steps.matrix(), ab.apply(&rho).unwrap().matrix()) <= 1e-10);
        prop_assert!(max_dev(a.then(&b).unwrap().choi(), ab.choi()) <= 1e-10);
    }

    // Mean photon number of the renormalized truncated state against the
    // Poisson series summed directly. It equals |alpha|^2 once the dropped
    // tail is negligible; a tail of up to 1e-3 is accepted by
    // coherent_density and shifts the mean by more than 1e-6.
    #[test]
    fn coherent_mean_photon_number(re in -1.5f64..1.5, im in -1.5f64..1.5, dim in 2usize..20) {
        let alpha = Complex64::new(re, im);
        let nbar = alpha.norm_sqr();
        if let Ok(rho) = coherent_density(alpha, dim) {
            let mut p = (-nbar).exp();
            let (mut mass, mut first) = (0.0, 0.0);
            for n in 0..dim {
                mass += p;
                first += n as f64 * p;
                p *= nbar / (n + 1) as f64;
            }
            prop_assert!((rho.mean_photon_number() - first / mass).abs() <= 1e-12);
            if 1.0 - mass < 1e-9 {
                prop_assert!((rho.mean_photon_number() - nbar).abs() <= 1e-6);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn wigner_integrates_to_trace(dim in 1usize..=10, seed in any::<u64>()) {
        let rho = random_state(&mut ChaCha8Rng::seed_from_u64(seed), dim);
        let axis: Vec<f64> = (0..=200).map(|i| -5.0 + i as f64 * 0.05).collect();
        let w = wigner(&rho, &axis, &axis).unwrap();
        prop_assert!((w.integral() - rho.trace()).abs() <= 0.02 * rho.trace());
    }

    #[test]
    fn wigner_is_bounded_and_routes_agree(dim in 1usize..=10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_state(&mut rng, dim);
        for _ in 0..64 {
            let (x, y) = (rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            let w = wigner_point(&rho, x, y);
            prop_assert!(w.abs() <= WIGNER_BOUND + 1e-9);
            prop_assert!((w - wigner_point_kernel(&rho, x, y)).abs() <= 1e-8);
        }
    }
}
