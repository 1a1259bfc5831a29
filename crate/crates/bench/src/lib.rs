//! Inputs shared by the benchmarks.

use weldlab_core::cauchy::BoundaryFunction;
use weldlab_core::sewing::{Puncture, RiggedSphere};
use weldlab_core::{CircleHomeo, Complex64, FourierFunction, PowerSeriesMap, SurfaceModel};

pub const GRID: usize = 512;

/// A smooth circle diffeomorphism with two active modes.
pub fn homeo() -> CircleHomeo {
    CircleHomeo::new(vec![0.0, 0.03], vec![0.0, 0.1], GRID).expect("valid homeomorphism")
}

pub fn quadratic() -> PowerSeriesMap {
    PowerSeriesMap::from_real(&[1.0, 0.1]).expect("valid map")
}

pub fn boundary_data(order: usize) -> BoundaryFunction {
    let modes: Vec<(i64, Complex64)> = (1..=order as i64)
        .flat_map(|k| [(k, Complex64::new(1.0 / k as f64, 0.0)), (-k, Complex64::new(0.0, 0.5 / k as f64))])
        .collect();
    BoundaryFunction::from_fourier(FourierFunction::from_modes(order, &modes).expect("modes in range")).expect("finite data")
}

fn cap(center: Complex64, coeffs: &[f64]) -> PowerSeriesMap {
    let mut v = vec![center];
    v.extend(coeffs.iter().map(|&x| Complex64::new(x, 0.0)));
    PowerSeriesMap::plus(v).expect("valid rigging")
}

/// Two three-punctured spheres, sewn at puncture 0 of each.
pub fn sphere_pair() -> (RiggedSphere, RiggedSphere) {
    let z = |x: f64| Complex64::new(x, 0.0);
    let a = RiggedSphere::new(
        vec![Puncture::Finite(z(0.0)), Puncture::Finite(z(3.0)), Puncture::Infinity],
        vec![cap(z(0.0), &[1.0, 0.1]), cap(z(3.0), &[0.5]), cap(z(0.0), &[0.1])],
        SurfaceModel::Puncture,
    )
    .expect("valid sphere");
    let b = RiggedSphere::new(
        vec![Puncture::Finite(z(0.0)), Puncture::Finite(z(2.5)), Puncture::Infinity],
        vec![cap(z(0.0), &[1.0, -0.1]), cap(z(2.5), &[0.3]), cap(z(0.0), &[0.2])],
        SurfaceModel::Puncture,
    )
    .expect("valid sphere");
    (a, b)
}
