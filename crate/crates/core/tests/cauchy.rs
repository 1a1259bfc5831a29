use proptest::prelude::*;
use weldlab_core::cauchy::*;
use weldlab_core::fixtures;
use weldlab_core::fourier::{h12_norm, FourierFunction};
use weldlab_core::{Complex64, Error, MapKind, PowerSeriesMap};

fn cx(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn modes(order: usize, m: &[(i64, f64)]) -> BoundaryFunction {
    let m: Vec<(i64, Complex64)> = m.iter().map(|&(k, v)| (k, cx(v))).collect();
    BoundaryFunction::from_fourier(FourierFunction::from_modes(order, &m).unwrap()).unwrap()
}

#[test]
fn residue_examples_on_the_circle() {
    let id = PowerSeriesMap::identity();
    let radii = default_radii(MapKind::DiskPlus);
    let e1 = modes(2, &[(1, 1.0)]);
    let em1 = modes(2, &[(-1, 1.0)]);
    let at = |h: &BoundaryFunction, z: f64| cauchy_transform(&id, h, cx(z), &radii).unwrap();
    assert!((at(&e1, 0.5) - cx(0.5)).norm() < 1e-12);
    assert!(at(&e1, 2.0).norm() < 1e-12);
    assert!((at(&em1, 2.0) - cx(-0.5)).norm() < 1e-12);
}

#[test]
fn points_on_the_curve_are_rejected() {
    let id = PowerSeriesMap::identity();
    let h = modes(2, &[(1, 1.0)]);
    let r = cauchy_transform(&id, &h, Complex64::new(0.0, 1.000001), &default_radii(MapKind::DiskPlus));
    assert!(matches!(r, Err(Error::NearSingularity { .. })), "{r:?}");
}

/// Interior circles `F(γ_r)`, `r ↗ 1`, against exterior circles `G(γ_r)`,
/// `r ↘ 1`, for a curve with both maps known exactly. The data `h(ζ) = ζ̄`
/// is not the trace of a function holomorphic on either side.
#[test]
fn inner_and_outer_limits_agree() {
    let (f, g, _) = fixtures::mobius_welding(0.3, 64, 512).unwrap();
    let h = |z: Complex64| z.conj() + 0.5 * z * z;
    let hf = BoundaryFunction::from_fn(&f, 1024, 200, h).unwrap();
    let hg = BoundaryFunction::from_fn(&g, 1024, 200, h).unwrap();
    for z in [Complex64::new(0.1, 0.2), Complex64::new(3.0, -1.0)] {
        let a = cauchy_transform(&f, &hf, z, &default_radii(MapKind::DiskPlus)).unwrap();
        let b = cauchy_transform(&g, &hg, z, &default_radii(MapKind::DiskMinus)).unwrap();
        assert!((a - b).norm() < 1e-8, "z = {z}: {a} vs {b}");
    }
}

#[test]
fn jump_on_the_circle_is_the_fourier_split() {
    let id = PowerSeriesMap::identity();
    let jd = jump_decompose(&id, &modes(4, &[(1, 1.0), (-2, 2.0)]), 4).unwrap();
    assert!((jd.plus.coeff(1) - cx(1.0)).norm() < 1e-12);
    assert!((jd.minus.coeff(-2) - cx(-2.0)).norm() < 1e-12);
    assert!(jd.reconstruction_error < 1e-10);

    let five = jump_decompose(&id, &modes(2, &[(0, 5.0)]), 2).unwrap();
    assert!((five.plus.coeff(0) - cx(5.0)).norm() < 1e-12);
    assert!((1..=2).all(|k| five.minus.coeff(-k).norm() < 1e-12));
}

/// `h = z` on `Γ` pulled back through `F` is `F(e^{iθ})`, whose interior
/// part in powers of `F⁻¹` is `F` itself.
#[test]
fn holomorphic_data_has_no_exterior_part() {
    let f = PowerSeriesMap::from_real(&[1.0, 0.1]).unwrap();
    let h = BoundaryFunction::from_fn(&f, 256, 8, |z| z).unwrap();
    let jd = jump_decompose(&f, &h, 8).unwrap();
    assert!((1..=8).all(|k| jd.minus.coeff(-k).norm() < 1e-6));
    assert!((jd.plus.coeff(1) - cx(1.0)).norm() < 1e-6);
    assert!((jd.plus.coeff(2) - cx(0.1)).norm() < 1e-6);
    let u = Complex64::new(0.3, -0.4);
    assert!((jd.plus_at_preimage(u) - f.eval(u)).norm() < 1e-6);
}

/// `h(ζ) = 1/ζ` is holomorphic outside with `h(∞) = 0`, so `h₋ = −1/ζ`.
#[test]
fn exterior_data_has_no_interior_part() {
    let f = PowerSeriesMap::from_real(&[1.0, 0.0, 0.1]).unwrap();
    let h = BoundaryFunction::from_fn(&f, 512, 24, |z| 1.0 / z).unwrap();
    let jd = jump_decompose(&f, &h, 24).unwrap();
    assert!((0..=24).all(|k| jd.plus.coeff(k).norm() < 1e-6));
    assert!((jd.minus.coeff(-1) + cx(1.0)).norm() < 1e-6);
    let zeta = Complex64::new(2.0, 1.0);
    assert!((jd.minus_at(zeta) + 1.0 / zeta).norm() < 1e-6);
}

#[test]
fn reconstruction_on_test_curves() {
    let h = FourierFunction::from_modes(6, &[(-3, cx(0.5)), (-1, Complex64::new(0.0, 1.0)), (2, cx(-0.7)), (5, cx(0.2))]).unwrap();
    let b = BoundaryFunction::from_fourier(h.clone()).unwrap();
    for (name, f) in fixtures::test_maps(64) {
        let jd = jump_decompose(&f, &b, 24).unwrap();
        assert!(jd.reconstruction_error < 1e-6, "{name}: {:e}", jd.reconstruction_error);
        let rec = jd.reconstruct(&f, 6).unwrap();
        let err = h12_norm(&rec.sub(&h)).unwrap() / h12_norm(&h).unwrap();
        assert!(err < 1e-6, "{name}: {err:e}");
    }
}

#[test]
fn jump_rejects_exterior_maps() {
    let h = modes(2, &[(1, 1.0)]);
    assert!(matches!(jump_decompose(&PowerSeriesMap::identity_minus(), &h, 2), Err(Error::InvalidInput(_))));
}

#[test]
fn norm_comparison_on_the_circle() {
    let id = PowerSeriesMap::identity();
    let hs = vec![modes(3, &[(1, 1.0), (-2, 0.5)]), modes(3, &[(3, 1.0), (-3, -1.0), (0, 2.0)]), modes(3, &[(0, 4.0)])];
    let nc = norm_comparison(&id, &hs, 0).unwrap();
    assert!(nc.ratios.iter().all(|r| (r - 1.0).abs() < 1e-6), "{:?}", nc.ratios);
    assert_eq!(nc.ratios[2], 1.0);
    assert!((nc.max_ratio - 1.0).abs() < 1e-6);
}

#[test]
fn norm_comparison_on_a_quasicircle_is_stable() {
    let f = PowerSeriesMap::from_real(&[1.0, 0.1]).unwrap();
    let hs: Vec<BoundaryFunction> = (1..=4)
        .flat_map(|k| [modes(4, &[(k, 1.0)]), modes(4, &[(-k, 1.0)])])
        .collect();
    let a = norm_comparison(&f, &hs, 24).unwrap();
    let b = norm_comparison(&f, &hs, 48).unwrap();
    assert!(a.max_ratio.is_finite() && a.max_ratio >= 1.0);
    assert!((a.max_ratio - b.max_ratio).abs() < 1e-6 * b.max_ratio);
}

#[test]
fn curve_samples_reject_non_simple_curves() {
    let figure_eight: Vec<Complex64> = (0..64)
        .map(|k| {
            let t = k as f64 * std::f64::consts::TAU / 64.0;
            Complex64::new(t.sin(), (2.0 * t).sin())
        })
        .collect();
    assert!(CurveSamples::from_points(figure_eight).is_err());
    let cusp = PowerSeriesMap::from_real(&[1.0, 1.0]).unwrap();
    assert!(CurveSamples::from_map(&cusp, 1.0, 256).is_err());
}

#[test]
fn boundary_function_json_is_the_fourier_form() {
    let b = modes(2, &[(1, 1.0), (-1, 0.5)]);
    let v = serde_json::to_value(&b).unwrap();
    assert_eq!(v["N"], 2);
    let back: BoundaryFunction = serde_json::from_value(v).unwrap();
    assert_eq!(back.companion(), b.companion());
}

fn arb_data() -> impl Strategy<Value = FourierFunction> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 9)
        .prop_map(|v| FourierFunction::from_dense(4, v.into_iter().map(|(a, b)| Complex64::new(a, b)).collect()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn jump_is_linear(g in arb_data(), h in arb_data(), a in -2.0f64..2.0, b in -2.0f64..2.0) {
        let f = PowerSeriesMap::from_real(&[1.0, 0.15]).unwrap();
        let comb = g.scale(cx(a)).add(&h.scale(cx(b)));
        let bf = |x: &FourierFunction| BoundaryFunction::from_fourier(x.clone()).unwrap();
        let (jg, jh, jc) = (
            jump_decompose(&f, &bf(&g), 16).unwrap(),
            jump_decompose(&f, &bf(&h), 16).unwrap(),
            jump_decompose(&f, &bf(&comb), 16).unwrap(),
        );
        for k in 0..=16i64 {
            let want = jg.plus.coeff(k) * a + jh.plus.coeff(k) * b;
            prop_assert!((jc.plus.coeff(k) - want).norm() < 1e-9);
        }
        for k in 1..=16i64 {
            let want = jg.minus.coeff(-k) * a + jh.minus.coeff(-k) * b;
            prop_assert!((jc.minus.coeff(-k) - want).norm() < 1e-9);
        }
    }
}
