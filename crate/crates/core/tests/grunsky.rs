use proptest::prelude::*;
use weldlab_core::circle::{block_decompose, comp_operator_matrix};
use weldlab_core::fixtures;
use weldlab_core::grunsky::*;
use weldlab_core::linalg::{self, CMat};
use weldlab_core::operator::hs_norm;
use weldlab_core::sewing::{Puncture, RiggedSphere};
use weldlab_core::spectral;
use weldlab_core::{CircleHomeo, Complex64, Error, OperatorMatrix, PowerSeriesMap, SurfaceModel};

fn cx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn quad() -> PowerSeriesMap {
    PowerSeriesMap::from_real(&[1.0, 0.2]).unwrap()
}

fn max_entry(m: &OperatorMatrix) -> f64 {
    m.entries.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[test]
fn identity_has_zero_grunsky_both_routes() {
    let id = PowerSeriesMap::identity();
    assert_eq!(max_entry(&grunsky_matrix_coeff(&id, 8).unwrap()), 0.0);
    assert!(max_entry(&grunsky_matrix_proj(&id, 8).unwrap()) < 1e-12);
}

#[test]
fn mobius_has_zero_grunsky() {
    let f = fixtures::mobius(0.3, 64);
    assert!(max_entry(&grunsky_matrix_coeff(&f, 16).unwrap()) < 1e-12);
    assert!(max_entry(&grunsky_matrix_proj(&f, 16).unwrap()) < 1e-6);
}

/// `log(1 + t(z + w))`: the zw coefficient is `−t²`, the `z²w` coefficient `t³`.
#[test]
fn quadratic_entries_from_log_series() {
    let t: f64 = 0.2;
    let gr = grunsky_matrix_coeff(&quad(), 4).unwrap();
    assert!((gr.entries[(0, 0)] - cx(t * t)).norm() < 1e-10);
    let want = -(2.0f64).sqrt() * t.powi(3);
    assert!((gr.entries[(1, 0)] - cx(want)).norm() < 1e-10);
}

#[test]
fn routes_agree_on_quadratic() {
    let a = grunsky_matrix_coeff(&quad(), 16).unwrap();
    let b = grunsky_matrix_proj(&quad(), 16).unwrap();
    let worst = a.entries.iter().zip(b.entries.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(worst < 1e-6);
}

#[test]
fn graph_check_examples() {
    let g = graph_subspace_check(&PowerSeriesMap::identity(), 8).unwrap();
    assert!(g.id_residual < 1e-12 && g.graph_residual < 1e-12, "{g:?}");
    for f in [fixtures::mobius(0.3, 64), quad()] {
        let g = graph_subspace_check(&f, 16).unwrap();
        assert!(g.id_residual < 1e-6 && g.graph_residual < 1e-6, "{g:?}");
    }
}

#[test]
fn pi_has_index_one() {
    for f in [PowerSeriesMap::identity(), fixtures::mobius(0.3, 64), quad()] {
        let r = pi_report(&f, 16, 1e-6).unwrap();
        assert_eq!((r.dim_kernel, r.dim_cokernel, r.index), (1, 0, 1));
        assert!(r.identity_residual < 1e-6);
    }
}

#[test]
fn pi_flags_ambiguous_rank() {
    let r = pi_report(&quad(), 8, 1e-6).unwrap();
    let smallest_nonzero = r.singular_values.iter().copied().filter(|&s| s > 1e-6).fold(f64::INFINITY, f64::min);
    let err = pi_report(&quad(), 8, smallest_nonzero * 2.0).unwrap_err();
    assert!(matches!(err, Error::AmbiguousRank { .. }), "{err:?}");
}

#[test]
fn hs_norm_examples() {
    let zero = grunsky_matrix_coeff(&PowerSeriesMap::identity(), 8).unwrap();
    assert_eq!(hs_norm(&zero), 0.0);
    let id = comp_operator_matrix(&CircleHomeo::identity(512), 4).unwrap();
    assert!((hs_norm(&id) - 8f64.sqrt()).abs() < 1e-15);
    let (a, b) = (hs_norm(&grunsky_matrix_coeff(&quad(), 16).unwrap()), hs_norm(&grunsky_matrix_coeff(&quad(), 32).unwrap()));
    assert!((a - b).abs() < 0.01 * b);
}

fn blocks(phi: &CircleHomeo, n: usize) -> weldlab_core::BlockDecomposition {
    block_decompose(&comp_operator_matrix(phi, n).unwrap()).unwrap()
}

#[test]
fn shale_cocycle_examples() {
    let r1 = blocks(&CircleHomeo::rotation(0.4, 512), 16);
    let r2 = blocks(&CircleHomeo::rotation(-1.3, 512), 16);
    assert_eq!(shale_cocycle_det(&r1, &r2).unwrap(), cx(1.0));
    let phi = CircleHomeo::new(vec![0.0, 0.05], vec![0.0, 0.15], 512).unwrap();
    let a = blocks(&phi, 16);
    assert!((shale_cocycle_det(&r1, &a).unwrap() - cx(1.0)).norm() < 1e-8);
    let psi = CircleHomeo::new(vec![0.3], vec![0.0, -0.1, 0.04], 512).unwrap();
    let chi = CircleHomeo::new(vec![0.0, 0.0, 0.05], vec![0.0, 0.08], 512).unwrap();
    assert!(cocycle_defect(&a, &blocks(&psi, 16), &blocks(&chi, 16)).unwrap() < 1e-5);
    // A generic pair has a non-trivial cocycle.
    assert!((shale_cocycle_det(&a, &blocks(&psi, 16)).unwrap() - cx(1.0)).norm() > 1e-6);
}

#[test]
fn kahler_potential_examples() {
    assert_eq!(wp_kahler_potential(&PowerSeriesMap::identity(), 8).unwrap(), 0.0);
    assert!(wp_kahler_potential(&fixtures::mobius(0.3, 64), 16).unwrap().abs() < 1e-10);
    let (a, b) = (wp_kahler_potential(&quad(), 16).unwrap(), wp_kahler_potential(&quad(), 32).unwrap());
    assert!(a < 0.0 && (a - b).abs() < 0.01 * b.abs());
    let big = CMat::from_diagonal_element(2, 2, cx(1.0));
    assert!(matches!(kahler_potential_of(&big), Err(Error::InvalidInput(_))));
}

fn sphere(points: &[Complex64], maps: Vec<PowerSeriesMap>) -> RiggedSphere {
    RiggedSphere::new(points.iter().map(|&p| Puncture::Finite(p)).collect(), maps, SurfaceModel::Puncture).unwrap()
}

fn centered(p: Complex64, tail: &[f64]) -> PowerSeriesMap {
    let mut v = vec![p];
    v.extend(tail.iter().map(|&x| cx(x)));
    PowerSeriesMap::plus(v).unwrap()
}

#[test]
fn single_rigging_reduces_to_grunsky() {
    let s = sphere(&[cx(0.0)], vec![quad()]);
    let m = multi_grunsky(&s, 8).unwrap();
    assert!(linalg::frobenius(&(&m.entries - &grunsky_matrix_coeff(&quad(), 8).unwrap().entries)) < 1e-14);
}

/// Off-diagonal block of `log(z − w − d)`: the zw entry is `−1/d²`.
#[test]
fn off_diagonal_blocks_decay_with_separation() {
    let entry = |d: f64| {
        let s = sphere(&[cx(0.0), cx(d)], vec![centered(cx(0.0), &[1.0]), centered(cx(d), &[1.0])]);
        multi_grunsky(&s, 4).unwrap().entries[(0, 4)]
    };
    let (a, b) = (entry(4.0), entry(8.0));
    assert!((a - cx(-1.0 / 16.0)).norm() < 1e-12);
    assert!((b - cx(-1.0 / 64.0)).norm() < 1e-12);
}

/// `h(ζ) = 1/(ζ − q)` with `q` inside a rigging disk is holomorphic on the
/// bordered surface and vanishes at ∞. Its pullbacks `h∘f_i` split into
/// exterior parts `x` and interior parts `y` in the weighted bases; the
/// graph property is `y = Gr x`.
#[test]
fn multi_grunsky_graph_property() {
    let pts = [cx(0.0), Complex64::new(2.5, 0.5)];
    let maps = vec![centered(pts[0], &[1.0, 0.15]), centered(pts[1], &[0.6, -0.05, 0.02])];
    let s = sphere(&pts, maps.clone());
    let n = 24;
    let gr = multi_grunsky(&s, n).unwrap();
    for q in [Complex64::new(0.1, -0.2), Complex64::new(2.4, 0.6)] {
        let m = 512;
        let mut x = linalg::CVec::zeros(2 * n);
        let mut y = linalg::CVec::zeros(2 * n);
        for (i, f) in maps.iter().enumerate() {
            let samples: Vec<Complex64> = spectral::grid(m)
                .into_iter()
                .map(|t| 1.0 / (f.eval(Complex64::from_polar(1.0, t)) - q))
                .collect();
            let spec = spectral::analyze(&samples);
            for k in 1..=n {
                let w = (k as f64).sqrt();
                x[i * n + k - 1] = spectral::mode(&spec, -(k as i64)) * w;
                y[i * n + k - 1] = spectral::mode(&spec, k as i64) * w;
            }
        }
        let r = (&gr.entries * &x - &y).norm() / y.norm();
        assert!(r < 1e-5, "q = {q}: {r:e}");
    }
}

fn small_poly() -> impl Strategy<Value = PowerSeriesMap> {
    (-0.2f64..0.2, -0.2f64..0.2, -0.1f64..0.1, -0.1f64..0.1).prop_map(|(a, b, c, d)| {
        PowerSeriesMap::plus(vec![cx(0.0), cx(1.0), Complex64::new(a, b), Complex64::new(c, d)]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn grunsky_is_symmetric_and_contractive(f in small_poly()) {
        let gr = grunsky_matrix_coeff(&f, 12).unwrap();
        prop_assert!(linalg::frobenius(&(&gr.entries - gr.entries.transpose())) < 1e-14);
        prop_assert!(grunsky_norm(&gr) < 1.0);
    }

    #[test]
    fn routes_agree(f in small_poly()) {
        let a = grunsky_matrix_coeff(&f, 8).unwrap();
        let b = grunsky_matrix_proj(&f, 8).unwrap();
        prop_assert!(linalg::frobenius(&(&a.entries - &b.entries)) < 1e-6);
    }
}
