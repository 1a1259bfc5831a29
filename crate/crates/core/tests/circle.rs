use std::f64::consts::PI;

use proptest::prelude::*;
use weldlab_core::circle::*;
use weldlab_core::fixtures;
use weldlab_core::grunsky::grunsky_matrix_coeff;
use weldlab_core::linalg::{self, CMat};
use weldlab_core::welding::weld;
use weldlab_core::{CircleHomeo, Complex64};

const GRID: usize = 512;

fn sine(a: f64) -> CircleHomeo {
    CircleHomeo::new(vec![0.0], vec![0.0, a], GRID).unwrap()
}

fn max_lift_gap(a: &CircleHomeo, b: &CircleHomeo) -> f64 {
    (0..200).map(|k| (a.lift(k as f64 * 0.0314) - b.lift(k as f64 * 0.0314)).abs()).fold(0.0, f64::max)
}

#[test]
fn non_monotone_lift_rejected() {
    assert!(CircleHomeo::new(vec![0.0], vec![0.0, 1.5], GRID).is_err());
}

#[test]
fn rotations_compose_and_invert() {
    let r = compose(&CircleHomeo::rotation(0.4, GRID), &CircleHomeo::rotation(-1.1, GRID)).unwrap();
    assert!((r.rotation_angle().unwrap() + 0.7).abs() < 1e-15);
    let inv = invert(&CircleHomeo::rotation(0.4, GRID)).unwrap();
    assert!((inv.rotation_angle().unwrap() + 0.4).abs() < 1e-15);
    assert!(invert(&CircleHomeo::identity(GRID)).unwrap().is_rotation());
}

#[test]
fn compose_with_identity_and_inverse() {
    let phi = CircleHomeo::new(vec![0.1, 0.05], vec![0.0, 0.2, 0.03], GRID).unwrap();
    let same = compose(&phi, &CircleHomeo::identity(GRID)).unwrap();
    assert!(max_lift_gap(&same, &phi) < 1e-12);
    let id = compose(&phi, &invert(&phi).unwrap()).unwrap();
    assert!(max_lift_gap(&id, &CircleHomeo::identity(GRID)) < 1e-8);
    let back = invert(&invert(&phi).unwrap()).unwrap();
    assert!(max_lift_gap(&back, &phi) < 1e-8);
}

#[test]
fn qs_ratio_examples() {
    let g = QsGrid::default();
    assert!((qs_ratio(&CircleHomeo::identity(GRID), &g).unwrap() - 1.0).abs() < 1e-12);
    assert!((qs_ratio(&CircleHomeo::rotation(1.0, GRID), &g).unwrap() - 1.0).abs() < 1e-12);
    let phi = sine(0.3);
    let coarse = qs_ratio(&phi, &g).unwrap();
    let fine = qs_ratio(&phi, &QsGrid { n_alpha: 1024, n_beta: 256, ..g }).unwrap();
    assert!(coarse > 1.0 && coarse.is_finite());
    assert!((fine - coarse).abs() / fine < 0.01);
}

#[test]
fn identity_and_rotation_matrices() {
    let id = comp_operator_matrix(&CircleHomeo::identity(GRID), 6).unwrap();
    assert_eq!(id.entries, CMat::identity(12, 12));
    let alpha = 0.7;
    let rot = comp_operator_matrix(&CircleHomeo::rotation(alpha, GRID), 6).unwrap();
    for (i, &n) in rot.row_basis.modes.iter().enumerate() {
        let want = Complex64::from_polar(1.0, n as f64 * alpha);
        assert!((rot.entries[(i, i)] - want).norm() < 1e-15);
    }
    let bd = block_decompose(&rot).unwrap();
    assert!(bd.b.iter().all(|z| z.norm() == 0.0));
    let bd = block_decompose(&id).unwrap();
    assert_eq!(bd.a, CMat::identity(6, 6));
}

/// Rotation matrix by quadrature of the sampled lift, bypassing the closed form.
#[test]
fn rotation_matrix_by_quadrature() {
    let near = CircleHomeo::new(vec![0.7, 0.0], vec![0.0, 1e-300], GRID).unwrap();
    let m = comp_operator_matrix(&near, 4).unwrap();
    let exact = comp_operator_matrix(&CircleHomeo::rotation(0.7, GRID), 4).unwrap();
    assert!(linalg::frobenius(&(&m.entries - &exact.entries)) < 1e-13);
}

/// `MᵀJM = J` with `J` the pairing `i Σ sign(n) x_{-n} y_n` in the `u_n` basis.
/// The truncation is taken large and the identity checked on leading modes.
#[test]
fn composition_matrix_is_symplectic() {
    let phi = CircleHomeo::new(vec![0.0, 0.04], vec![0.0, 0.15, 0.02], GRID).unwrap();
    let n = 48;
    let m = comp_operator_matrix(&phi, n).unwrap();
    let modes = &m.row_basis.modes;
    let mut j = CMat::zeros(2 * n, 2 * n);
    for (a, &k) in modes.iter().enumerate() {
        let b = modes.iter().position(|&l| l == -k).unwrap();
        j[(b, a)] = Complex64::new(0.0, k.signum() as f64);
    }
    let lhs = m.entries.transpose() * &j * &m.entries;
    let lead: Vec<usize> = (0..2 * n).filter(|&i| modes[i].unsigned_abs() <= 8).collect();
    let mut worst: f64 = 0.0;
    for &r in &lead {
        for &c in &lead {
            worst = worst.max((lhs[(r, c)] - j[(r, c)]).norm());
        }
    }
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn blocks_reassemble_and_reject_bad_structure() {
    let m = comp_operator_matrix(&sine(0.2), 8).unwrap();
    let bd = block_decompose(&m).unwrap();
    assert!(linalg::frobenius(&(bd.assemble() - &m.entries)) < 1e-14);
    let mut bad = m.clone();
    bad.entries[(0, 9)] += Complex64::new(0.1, 0.0);
    assert!(block_decompose(&bad).is_err());
}

#[test]
fn b_bar_a_inverse_is_grunsky_of_welded_map() {
    let phi = CircleHomeo::new(vec![0.0, 0.05], vec![0.0, 0.12], GRID).unwrap();
    let w = weld(&phi, 48, 1e-10).unwrap();
    let gr = grunsky_matrix_coeff(&w.f, 10).unwrap();
    let ba = block_decompose(&comp_operator_matrix(&phi, 40).unwrap()).unwrap().grunsky().unwrap();
    let ba = ba.entries.view((0, 0), (10, 10)).into_owned();
    assert!(linalg::frobenius(&(ba - &gr.entries)) < 1e-8);
}

#[test]
fn blocks_of_mobius_welding_have_vanishing_grunsky() {
    let (_, _, h) = fixtures::mobius_welding(0.3, 64, GRID).unwrap();
    let gr = block_decompose(&comp_operator_matrix(&h, 24).unwrap()).unwrap().grunsky().unwrap();
    let lead = gr.entries.view((0, 0), (8, 8)).into_owned();
    assert!(linalg::frobenius(&lead) < 1e-10);
}

#[test]
fn beurling_ahlfors_of_isometries_is_conformal() {
    for phi in [CircleHomeo::identity(GRID), CircleHomeo::rotation(2.0, GRID)] {
        for z in [Complex64::new(1.5, 0.2), Complex64::new(-0.3, 3.0)] {
            assert!(beurling_ahlfors_mu(&phi, z).unwrap().norm() < 1e-8);
        }
    }
}

#[test]
fn beurling_ahlfors_mu_is_bounded_and_decays() {
    let phi = sine(0.2);
    let theta = 0.9;
    let mus: Vec<f64> = [4.0, 2.0, 1.5, 1.2, 1.05]
        .iter()
        .map(|&r| beurling_ahlfors_mu(&phi, Complex64::from_polar(r, theta)).unwrap().norm())
        .collect();
    assert!(mus.iter().all(|&m| m < 1.0));
    // The Beltrami coefficient of an extension of an analytic map vanishes
    // on the circle.
    assert!(mus[4] < mus[2]);
}

#[test]
fn wp_energy_examples() {
    assert!(wp_energy_estimate(&CircleHomeo::identity(GRID), 16, 32).unwrap().fine < 1e-8);
    let r = wp_energy_estimate(&sine(0.2), 24, 64).unwrap();
    assert!(r.fine > 0.0 && r.fine.is_finite());
    assert!(r.relative_change < 0.05, "{r:?}");
}

/// Triangle-wave lift: a corner in φ′ at θ = 0 and θ = π. Each truncation is
/// analytic, so the energy grows along the truncation order.
#[test]
fn corner_energy_grows_with_truncation() {
    let m = 2048;
    let p: Vec<f64> = weldlab_core::spectral::grid(m)
        .into_iter()
        .map(|t| 0.3 * (PI / 2.0 - (t - PI).abs()))
        .collect();
    let energies: Vec<f64> = [4, 8, 16, 32]
        .iter()
        .map(|&k| {
            let phi = CircleHomeo::from_lift_samples(&p, k, GRID).unwrap();
            wp_energy_estimate(&phi, 32, 128).unwrap().fine
        })
        .collect();
    assert!(energies.windows(2).all(|w| w[1] > w[0]), "{energies:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn inverse_round_trip(a in -0.3f64..0.3, b in -0.1f64..0.1, c in -3.0f64..3.0) {
        let phi = CircleHomeo::new(vec![c, b], vec![0.0, a], GRID).unwrap();
        let id = compose(&invert(&phi).unwrap(), &phi).unwrap();
        prop_assert!(max_lift_gap(&id, &CircleHomeo::identity(GRID)) < 1e-8);
    }

    #[test]
    fn block_structure_holds(a in -0.3f64..0.3, b in -0.1f64..0.1) {
        let phi = CircleHomeo::new(vec![0.0, b], vec![0.0, a], GRID).unwrap();
        prop_assert!(block_decompose(&comp_operator_matrix(&phi, 6).unwrap()).is_ok());
    }
}
