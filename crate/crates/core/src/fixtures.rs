//! Closed-form maps and welding pairs used by tests, the acceptance suite and
//! the CLI demos.

use num_complex::Complex64;

use crate::circle::CircleHomeo;
use crate::error::Result;
use crate::spectral;
use crate::welding::PowerSeriesMap;

fn cx(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// `z / (1 - a z)` truncated at `order`; its Grunsky operator vanishes.
pub fn mobius(a: f64, order: usize) -> PowerSeriesMap {
    let mut v = vec![cx(0.0)];
    v.extend((1..=order).map(|k| cx(a.powi(k as i32 - 1))));
    PowerSeriesMap::plus(v).expect("a_1 = 1")
}

/// Exact welding triple for `F(z) = z/(1 - a z)`: the image is the circle
/// with center `a/(1-a²)` and radius `1/(1-a²)`, so `G(w) = c + ρ w` and
/// `h = G⁻¹ ∘ F` is a disk automorphism restricted to the circle.
pub fn mobius_welding(a: f64, order: usize, grid: usize) -> Result<(PowerSeriesMap, PowerSeriesMap, CircleHomeo)> {
    let f = mobius(a, order);
    let rho = 1.0 / (1.0 - a * a);
    let center = a * rho;
    let g = PowerSeriesMap::minus(cx(rho), cx(center), &[])?;
    let m = spectral::next_pow2(8 * order.max(8));
    let p: Vec<f64> = spectral::grid(m)
        .into_iter()
        .map(|t| {
            let w = Complex64::from_polar(1.0, t);
            let image = (w / (1.0 - a * w) - center) / rho;
            // branch continuous in t, equal to 0 at t = 0
            (image / w).arg()
        })
        .collect();
    let h = CircleHomeo::from_lift_samples(&p, order, grid)?;
    Ok((f, g, h))
}

/// `((1+z)^β - 1)/β` truncated at `order`: a corner of opening `βπ` at
/// `F(-1)`, so `F''/F' = (β-1)/(1+z)` is not square integrable.
pub fn corner(beta: f64, order: usize) -> PowerSeriesMap {
    let mut v = vec![cx(0.0)];
    let mut binom = beta;
    for k in 1..=order {
        v.push(cx(binom / beta));
        binom *= (beta - k as f64) / (k as f64 + 1.0);
    }
    PowerSeriesMap::plus(v).expect("a_1 = 1")
}

/// `z e^{c z}` truncated at `order`; univalent for `|c| ≤ 1`.
pub fn exp_map(c: f64, order: usize) -> PowerSeriesMap {
    let mut v = vec![cx(0.0)];
    let mut term = 1.0;
    for k in 1..=order {
        v.push(cx(term));
        term *= c / k as f64;
    }
    PowerSeriesMap::plus(v).expect("a_1 = 1")
}

/// Five univalent maps with analytic boundaries, named for reports.
pub fn test_maps(order: usize) -> Vec<(&'static str, PowerSeriesMap)> {
    vec![
        ("mobius_0.3", mobius(0.3, order)),
        ("quad_0.2", PowerSeriesMap::from_real(&[1.0, 0.2]).expect("valid")),
        ("quad_0.1", PowerSeriesMap::from_real(&[1.0, 0.1]).expect("valid")),
        ("cubic_0.1", PowerSeriesMap::from_real(&[1.0, 0.0, 0.1]).expect("valid")),
        ("exp_0.2", exp_map(0.2, order)),
    ]
}
