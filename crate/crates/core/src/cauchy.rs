//! Limiting Cauchy integrals on quasicircles `Γ = F(𝕊¹)` and the jump
//! decomposition `h = h₊ − h₋`.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fourier::{self, DiskSeries, FourierFunction, Side};
use crate::geometry;
use crate::linalg::{self, CMat, CVec};
use crate::spectral;
use crate::welding::{MapKind, PowerSeriesMap};

const MAX_FIT_COND: f64 = 1e12;

/// Polygonal samples of `F(r e^{iθ})` on a uniform parameter grid.
#[derive(Debug, Clone)]
pub struct CurveSamples {
    pub points: Vec<Complex64>,
    pub params: Vec<f64>,
    pub radius: f64,
    /// The map whose circle image was sampled, if any.
    pub source: Option<PowerSeriesMap>,
    pub closed: bool,
}

impl CurveSamples {
    /// Samples the image of the circle of radius `r`; the curve must be simple
    /// and wind once around the origin.
    pub fn from_map(f: &PowerSeriesMap, r: f64, m: usize) -> Result<Self> {
        if m < 8 {
            return Err(Error::input("need at least 8 curve samples"));
        }
        let params = spectral::grid(m);
        let points: Vec<Complex64> = params.iter().map(|&t| f.eval(Complex64::from_polar(r, t))).collect();
        if points.iter().any(|p| !p.is_finite()) {
            return Err(Error::input("map is not finite on the sampled circle"));
        }
        if !geometry::is_simple_closed(&points) {
            return Err(Error::input(format!("image of |z| = {r} is not a simple curve")));
        }
        if geometry::winding_number(&points, Complex64::new(0.0, 0.0)) != 1 {
            return Err(Error::input("curve must wind once around the origin"));
        }
        Ok(Self { points, params, radius: r, source: Some(f.clone()), closed: true })
    }

    /// A closed curve given by samples on the uniform parameter grid.
    pub fn from_points(points: Vec<Complex64>) -> Result<Self> {
        let m = points.len();
        if m < 8 || points.iter().any(|p| !p.is_finite()) {
            return Err(Error::input("need at least 8 finite curve samples"));
        }
        if !geometry::is_simple_closed(&points) {
            return Err(Error::input("curve is not simple"));
        }
        Ok(Self { points, params: spectral::grid(m), radius: 1.0, source: None, closed: true })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn contains(&self, z: Complex64) -> bool {
        geometry::winding_number(&self.points, z) != 0
    }

    /// Distance from `z` to the polygon and the length of the nearest segment.
    pub fn distance_and_spacing(&self, z: Complex64) -> (f64, f64) {
        let m = self.points.len();
        let mut best = (f64::INFINITY, 0.0);
        for i in 0..m {
            let (a, b) = (self.points[i], self.points[(i + 1) % m]);
            let d = geometry::dist_to_segment(a, b, z);
            if d < best.0 {
                best = (d, (b - a).norm());
            }
        }
        best
    }

    pub fn max_modulus(&self) -> f64 {
        self.points.iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    /// Rejects points within four local sample spacings of the curve.
    pub fn check_clearance(&self, z: Complex64) -> Result<()> {
        let (d, s) = self.distance_and_spacing(z);
        if d <= 4.0 * s {
            return Err(Error::NearSingularity { distance: d, threshold: 4.0 * s });
        }
        Ok(())
    }
}

/// Boundary data `h` on `Γ`, stored as `h(F(e^{iθ}))` in the parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "FourierFunction", into = "FourierFunction")]
pub struct BoundaryFunction {
    values: Vec<Complex64>,
    companion: FourierFunction,
}

impl From<FourierFunction> for BoundaryFunction {
    fn from(companion: FourierFunction) -> Self {
        let m = spectral::next_pow2(4 * companion.order() + 4);
        Self { values: companion.samples(m), companion }
    }
}

impl From<BoundaryFunction> for FourierFunction {
    fn from(b: BoundaryFunction) -> Self {
        b.companion
    }
}

impl BoundaryFunction {
    pub fn from_fourier(companion: FourierFunction) -> Result<Self> {
        companion.check_finite()?;
        Ok(companion.into())
    }

    /// Values on the uniform parameter grid; the companion keeps modes up to `order`.
    pub fn from_samples(values: Vec<Complex64>, order: usize) -> Result<Self> {
        let companion = FourierFunction::from_samples(&values, order)?;
        companion.check_finite()?;
        Ok(Self { values, companion })
    }

    /// Samples `h ∘ F` on an `m`-point parameter grid.
    pub fn from_fn(f: &PowerSeriesMap, m: usize, order: usize, h: impl Fn(Complex64) -> Complex64) -> Result<Self> {
        let values = spectral::grid(m).into_iter().map(|t| h(f.eval(Complex64::from_polar(1.0, t)))).collect();
        Self::from_samples(values, order)
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn companion(&self) -> &FourierFunction {
        &self.companion
    }

    pub fn h12_norm(&self) -> Result<f64> {
        fourier::h12_norm(&self.companion)
    }
}

/// Default radii `1 ∓ 2^{-k}`, `k = 3..=10`, approaching the unit circle
/// from the side where `map` is defined.
pub fn default_radii(kind: MapKind) -> Vec<f64> {
    (3..=10)
        .map(|k| {
            let t = 0.5f64.powi(k);
            match kind {
                MapKind::DiskPlus => 1.0 - t,
                MapKind::DiskMinus => 1.0 + t,
            }
        })
        .collect()
}

fn curve_grid(map: &PowerSeriesMap, h: &BoundaryFunction) -> usize {
    spectral::next_pow2((8 * map.order()).max(8 * h.companion.order()).max(256))
}

/// `(1/2πi) ∮_{map(γ_r)} U(ζ)/(ζ − z) dζ` with `U` the harmonic extension of
/// the boundary data, by the trapezoid rule on `m` nodes.
fn ring_integral(map: &PowerSeriesMap, h: &FourierFunction, r: f64, z: Complex64, m: usize) -> Complex64 {
    let u = h.extension_samples(r, m);
    let sum: Complex64 = spectral::grid(m)
        .iter()
        .zip(&u)
        .map(|(&t, &v)| {
            let w = Complex64::from_polar(r, t);
            v * w * map.deriv(w) / (map.eval(w) - z)
        })
        .sum();
    sum / m as f64
}

/// Neville extrapolation to `t = 0`; returns the value and the last two
/// diagonal corrections.
fn extrapolate(ts: &[f64], vs: &[Complex64]) -> (Complex64, Vec<f64>) {
    let n = ts.len();
    let mut p = vs.to_vec();
    let mut diag = vec![vs[n - 1]];
    for level in 1..n {
        for i in (level..n).rev() {
            let (ti, tj) = (ts[i], ts[i - level]);
            p[i] = (p[i] * tj - p[i - 1] * ti) / (tj - ti);
        }
        diag.push(p[n - 1]);
    }
    let steps = diag.windows(2).map(|w| (w[1] - w[0]).norm()).collect();
    (p[n - 1], steps)
}

/// Limiting Cauchy integral `J(Γ)h(z)`: interior circles `F(γ_r)`, `r ↗ 1`,
/// for an interior map, or exterior circles `G(γ_r)`, `r ↘ 1`, for an
/// exterior map, Richardson-extrapolated to the boundary.
pub fn cauchy_transform(map: &PowerSeriesMap, h: &BoundaryFunction, z: Complex64, radii: &[f64]) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::input("evaluation point is not finite"));
    }
    let interior = map.kind() == MapKind::DiskPlus;
    let t_of = |r: f64| if interior { 1.0 - r } else { r - 1.0 };
    if radii.iter().any(|&r| !(t_of(r) >= 0.0 && t_of(r) < 1.0)) {
        return Err(Error::input("radii must lie on the map's side of the unit circle, within distance 1"));
    }
    if radii.windows(2).any(|w| t_of(w[1]) >= t_of(w[0])) {
        return Err(Error::input("radii must approach 1 strictly monotonically"));
    }
    let m = curve_grid(map, h);
    let gamma = CurveSamples::from_map(map, 1.0, m)?;
    gamma.check_clearance(z)?;
    let inside = gamma.contains(z);
    let mq = 4 * m;
    let usable: Vec<f64> = radii
        .iter()
        .copied()
        .filter(|&r| {
            CurveSamples::from_map(map, r, m).is_ok_and(|c| {
                let (d, s) = c.distance_and_spacing(z);
                c.contains(z) == inside && d > 4.0 * s
            })
        })
        .collect();
    if usable.len() < 2 {
        return Err(Error::resolution("fewer than two radii separate the point from the curve; add radii closer to 1"));
    }
    let values: Vec<Complex64> = usable.par_iter().map(|&r| ring_integral(map, &h.companion, r, z, mq)).collect();
    let ts: Vec<f64> = usable.iter().map(|&r| t_of(r)).collect();
    if ts[ts.len() - 1] == 0.0 {
        return Ok(values[values.len() - 1]);
    }
    let (value, steps) = extrapolate(&ts, &values);
    let floor = 1e-12 * (1.0 + value.norm());
    if let [.., prev, last] = steps[..] {
        if last > prev.max(floor) {
            return Err(Error::resolution(format!(
                "Richardson extrapolation is not settling (last corrections {prev:e}, {last:e})"
            )));
        }
    }
    Ok(value)
}

/// `h₊` on `Ω⁺` in powers of `F⁻¹` and `h₋` on `Ω⁻` in powers of `1/ζ`,
/// with `h = h₊ − h₋` on `Γ` and `h₋(∞) = 0`.
#[derive(Debug, Clone, Serialize)]
pub struct JumpDecomposition {
    pub plus: DiskSeries,
    pub minus: DiskSeries,
    pub cond_plus: f64,
    pub cond_minus: f64,
    /// `‖rec − h‖_{1/2} / ‖h‖_{1/2}` for the companion series.
    pub reconstruction_error: f64,
}

impl JumpDecomposition {
    /// `h₊(z)` at a point of `Ω⁺` given by its preimage `u = F⁻¹(z)`.
    pub fn plus_at_preimage(&self, u: Complex64) -> Complex64 {
        self.plus.eval(u)
    }

    pub fn minus_at(&self, zeta: Complex64) -> Complex64 {
        self.minus.eval(zeta)
    }

    /// Companion series of `h₊ − h₋` re-evaluated on `Γ`.
    pub fn reconstruct(&self, f: &PowerSeriesMap, order: usize) -> Result<FourierFunction> {
        let m = spectral::next_pow2((8 * order).max(8 * self.plus.order()).max(8 * f.order()).max(256));
        let vals: Vec<Complex64> = spectral::grid(m)
            .into_iter()
            .map(|t| {
                let u = Complex64::from_polar(1.0, t);
                self.plus.eval(u) - self.minus.eval(f.eval(u))
            })
            .collect();
        FourierFunction::from_samples(&vals, order)
    }
}

/// Samples the Cauchy integral over `Γ` itself at points off the curve. For
/// band-limited data and points a positive distance away, the integrand is
/// continuous up to `r = 1`, so this equals the limit in [`cauchy_transform`].
fn boundary_integral(f: &PowerSeriesMap, h: &FourierFunction, points: &[Complex64], m: usize) -> Vec<Complex64> {
    let hv = h.samples(m);
    let nodes: Vec<(Complex64, Complex64)> = spectral::grid(m)
        .into_iter()
        .zip(hv)
        .map(|(t, v)| {
            let w = Complex64::from_polar(1.0, t);
            (f.eval(w), v * w * f.deriv(w))
        })
        .collect();
    points
        .par_iter()
        .map(|&z| nodes.iter().map(|&(zeta, wgt)| wgt / (zeta - z)).sum::<Complex64>() / m as f64)
        .collect()
}

const PLUS_RINGS: [f64; 2] = [0.8, 0.9];
const MINUS_RINGS: [f64; 2] = [1.15, 1.3];

pub fn jump_decompose(f: &PowerSeriesMap, h: &BoundaryFunction, n: usize) -> Result<JumpDecomposition> {
    if f.kind() != MapKind::DiskPlus {
        return Err(Error::input("jump decomposition needs the interior map F"));
    }
    if n < 1 {
        return Err(Error::input("order must be positive"));
    }
    let m = 4 * curve_grid(f, h).max(spectral::next_pow2(16 * n));
    let gamma = CurveSamples::from_map(f, 1.0, m)?;
    let per_ring = spectral::next_pow2(4 * n + 4);
    let thetas = spectral::grid(per_ring);

    let pre: Vec<Complex64> = PLUS_RINGS
        .iter()
        .flat_map(|&rho| thetas.iter().map(move |&t| Complex64::from_polar(rho, t)))
        .collect();
    let plus_pts: Vec<Complex64> = pre.iter().map(|&u| f.eval(u)).collect();
    let rmax = gamma.max_modulus();
    let minus_pts: Vec<Complex64> = MINUS_RINGS
        .iter()
        .flat_map(|&s| thetas.iter().map(move |&t| Complex64::from_polar(s * rmax, t)))
        .collect();
    for &z in plus_pts.iter().chain(&minus_pts) {
        gamma.check_clearance(z)?;
    }

    let hp = boundary_integral(f, &h.companion, &plus_pts, m);
    let hm = boundary_integral(f, &h.companion, &minus_pts, m);

    let ap = CMat::from_fn(pre.len(), n + 1, |i, k| pre[i].powi(k as i32));
    let (xp, cond_plus) = linalg::lstsq_scaled(ap, &CVec::from_vec(hp), MAX_FIT_COND)?;
    let am = CMat::from_fn(minus_pts.len(), n, |i, k| minus_pts[i].powi(-(k as i32) - 1));
    let (xm, cond_minus) = linalg::lstsq_scaled(am, &CVec::from_vec(hm), MAX_FIT_COND)?;

    let plus_modes: Vec<(i64, Complex64)> = xp.iter().enumerate().map(|(k, c)| (k as i64, *c)).collect();
    let minus_modes: Vec<(i64, Complex64)> = xm.iter().enumerate().map(|(k, c)| (-(k as i64) - 1, *c)).collect();
    let mut out = JumpDecomposition {
        plus: DiskSeries::new(Side::Plus, n, &plus_modes)?,
        minus: DiskSeries::new(Side::Minus, n, &minus_modes)?,
        cond_plus,
        cond_minus,
        reconstruction_error: 0.0,
    };
    let order = h.companion.order();
    let rec = out.reconstruct(f, order)?;
    let scale = fourier::h12_norm(&h.companion)?.max(f64::MIN_POSITIVE);
    out.reconstruction_error = fourier::h12_norm(&rec.sub(&h.companion))? / scale;
    Ok(out)
}

/// Energies of the two harmonic extensions of each boundary function.
#[derive(Debug, Clone, Serialize)]
pub struct NormComparison {
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub inner_energies: Vec<f64>,
    pub outer_energies: Vec<f64>,
    /// Largest boundary misfit of the exterior Dirichlet solves.
    pub fit_residual: f64,
}

/// Exterior harmonic extension `α₀ + Σ α_k ζ^{-k} + conj(Σ β̄_k ζ^{-k})`
/// fitted on `Γ`; returns its Dirichlet energy divided by π and the misfit.
fn exterior_energy(f: &PowerSeriesMap, h: &FourierFunction, k: usize) -> Result<(f64, f64)> {
    let m = spectral::next_pow2((8 * k).max(8 * h.order()).max(8 * f.order()).max(256));
    let ts = spectral::grid(m);
    let w: Vec<Complex64> = ts.iter().map(|&t| Complex64::from_polar(1.0, t)).collect();
    let zeta: Vec<Complex64> = w.iter().map(|&u| f.eval(u)).collect();
    let dzeta: Vec<Complex64> = w.iter().map(|&u| Complex64::new(0.0, 1.0) * u * f.deriv(u)).collect();
    let hv = h.samples(m);
    let a = CMat::from_fn(m, 2 * k + 1, |i, j| match j {
        0 => Complex64::new(1.0, 0.0),
        j if j <= k => zeta[i].powi(-(j as i32)),
        j => zeta[i].powi(-((j - k) as i32)).conj(),
    });
    let (x, _) = linalg::lstsq_scaled(a.clone(), &CVec::from_vec(hv.clone()), MAX_FIT_COND)?;
    let misfit = (&a * &x - CVec::from_vec(hv)).iter().map(|c| c.norm()).fold(0.0, f64::max);
    // ∫_{Ω⁻} |g'|² dA = -(1/2i) ∮_Γ conj(g) g' dζ for g holomorphic off Γ, O(1/ζ)
    let energy = |coef: &dyn Fn(usize) -> Complex64| -> f64 {
        let s: Complex64 = (0..m)
            .map(|i| {
                let (g, dg) = (1..=k).fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(g, dg), j| {
                    let p = zeta[i].powi(-(j as i32));
                    (g + coef(j) * p, dg - coef(j) * p * j as f64 / zeta[i])
                });
                g.conj() * dg * dzeta[i]
            })
            .sum();
        let integral = -(s * 2.0 * std::f64::consts::PI / m as f64) / Complex64::new(0.0, 2.0);
        integral.re / std::f64::consts::PI
    };
    let ea = energy(&|j| x[j]);
    let eb = energy(&|j| x[k + j].conj());
    Ok((ea + eb, misfit))
}

/// Ratios `‖h_{Ω⁺}‖ / ‖h_{Ω⁻}‖` of the Dirichlet norms of the harmonic
/// extensions; `basis_order` sets the exterior fit (`0` picks a default).
pub fn norm_comparison(f: &PowerSeriesMap, hs: &[BoundaryFunction], basis_order: usize) -> Result<NormComparison> {
    if hs.is_empty() {
        return Err(Error::input("norm comparison needs at least one boundary function"));
    }
    if f.kind() != MapKind::DiskPlus {
        return Err(Error::input("norm comparison needs the interior map F"));
    }
    CurveSamples::from_map(f, 1.0, spectral::next_pow2((8 * f.order()).max(256)))?;
    let mut out = NormComparison { ratios: vec![], max_ratio: 1.0, inner_energies: vec![], outer_energies: vec![], fit_residual: 0.0 };
    for h in hs {
        let c = &h.companion;
        let k = if basis_order == 0 { 2 * c.order().max(f.order()).max(4) } else { basis_order };
        let inner: f64 = c.modes().map(|(n, v)| n.unsigned_abs() as f64 * v.norm_sqr()).sum();
        let (outer, misfit) = exterior_energy(f, c, k)?;
        let scale = c.modes().map(|(_, v)| v.norm_sqr()).sum::<f64>().max(f64::MIN_POSITIVE);
        let ratio = if inner <= 1e-24 * scale && outer <= 1e-20 * scale {
            1.0
        } else if outer <= 0.0 {
            return Err(Error::result("exterior extension has non-positive energy"));
        } else {
            (inner / outer).sqrt()
        };
        out.max_ratio = out.max_ratio.max(ratio).max(1.0 / ratio);
        out.ratios.push(ratio);
        out.inner_energies.push(inner);
        out.outer_energies.push(outer);
        out.fit_residual = out.fit_residual.max(misfit);
    }
    Ok(out)
}
