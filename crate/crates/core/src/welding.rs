//! Conformal welding `h = G^{-1} ∘ F` for truncated-series conformal maps.
//!
//! For a fixed circle homeomorphism the welding equation
//! `F(e^{iθ}) = G(e^{i·lift_h(θ)})` is linear in the coefficients of
//! `(F, G)`; univalence is the only nonlinear constraint and is checked on
//! the result rather than imposed.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cauchy::CurveSamples;
use crate::circle::CircleHomeo;
use crate::error::{Error, Result};
use crate::geometry;
use crate::linalg::{self, CMat, CVec};
use crate::quadrature::gauss_legendre;
use crate::series;
use crate::spectral;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MapKind {
    /// `F(z) = Σ_{k≥0} a_k z^k` on the unit disk.
    DiskPlus,
    /// `G(w) = c_1 w + c_0 + Σ_{k≥1} c_{-k} w^{-k}` on the exterior disk.
    DiskMinus,
}

/// A truncated Taylor (interior) or Laurent (exterior) series of a
/// conformal map.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSeriesMap {
    kind: MapKind,
    // DiskPlus: index k holds a_k. DiskMinus: index j holds c_{1-j}.
    coeffs: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl PowerSeriesMap {
    /// Interior map from Taylor coefficients `a_0, a_1, ...`.
    pub fn plus(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() < 2 || coeffs[1].norm() == 0.0 {
            return Err(Error::input("interior map needs a_1 != 0"));
        }
        Self::checked(MapKind::DiskPlus, coeffs)
    }

    /// Exterior map from `c_1, c_0` and the tail `c_{-1}, c_{-2}, ...`.
    pub fn minus(c1: Complex64, c0: Complex64, tail: &[Complex64]) -> Result<Self> {
        if c1.norm() == 0.0 {
            return Err(Error::input("exterior map needs c_1 != 0"));
        }
        let mut coeffs = vec![c1, c0];
        coeffs.extend_from_slice(tail);
        Self::checked(MapKind::DiskMinus, coeffs)
    }

    fn checked(kind: MapKind, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::input("non-finite map coefficient"));
        }
        Ok(Self { kind, coeffs })
    }

    pub fn identity() -> Self {
        Self { kind: MapKind::DiskPlus, coeffs: vec![zero(), Complex64::new(1.0, 0.0)] }
    }

    pub fn identity_minus() -> Self {
        Self { kind: MapKind::DiskMinus, coeffs: vec![Complex64::new(1.0, 0.0), zero()] }
    }

    /// `z + Σ t_k z^k`-style convenience constructor from real `a_1, a_2, ...` with `a_0 = 0`.
    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        let mut v = vec![zero()];
        v.extend(coeffs.iter().map(|&x| Complex64::new(x, 0.0)));
        Self::plus(v)
    }

    pub fn kind(&self) -> MapKind {
        self.kind
    }

    /// Coefficient of `z^k` (interior) or `w^k` (exterior, `k ≤ 1`).
    pub fn coeff(&self, k: i64) -> Complex64 {
        match self.kind {
            MapKind::DiskPlus if k >= 0 => self.coeffs.get(k as usize).copied().unwrap_or_else(zero),
            MapKind::DiskMinus if k <= 1 => self.coeffs.get((1 - k) as usize).copied().unwrap_or_else(zero),
            _ => zero(),
        }
    }

    /// Taylor coefficients of an interior map.
    pub fn taylor(&self) -> &[Complex64] {
        debug_assert_eq!(self.kind, MapKind::DiskPlus);
        &self.coeffs
    }

    /// Highest `|k|` carried.
    pub fn order(&self) -> usize {
        match self.kind {
            MapKind::DiskPlus => self.coeffs.len() - 1,
            MapKind::DiskMinus => self.coeffs.len().saturating_sub(2),
        }
    }

    pub fn modes(&self) -> Vec<(i64, Complex64)> {
        match self.kind {
            MapKind::DiskPlus => self.coeffs.iter().enumerate().map(|(k, c)| (k as i64, *c)).collect(),
            MapKind::DiskMinus => self.coeffs.iter().enumerate().map(|(j, c)| (1 - j as i64, *c)).collect(),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self.kind {
            MapKind::DiskPlus => series::eval(&self.coeffs, z),
            MapKind::DiskMinus => {
                let u = z.inv();
                self.coeffs[0] * z + self.coeffs[1] + series::eval(&self.coeffs[2..], u) * u
            }
        }
    }

    pub fn deriv(&self, z: Complex64) -> Complex64 {
        match self.kind {
            MapKind::DiskPlus => series::eval_deriv(&self.coeffs, z),
            MapKind::DiskMinus => {
                let u = z.inv();
                let tail: Complex64 = self.coeffs[2..]
                    .iter()
                    .enumerate()
                    .map(|(i, c)| -c * (i as f64 + 1.0) * u.powi(i as i32 + 2))
                    .sum();
                self.coeffs[0] + tail
            }
        }
    }

    /// `F(e^{iθ_k})` on the uniform `m`-point grid.
    pub fn boundary(&self, m: usize) -> Vec<Complex64> {
        spectral::grid(m).into_iter().map(|t| self.eval(Complex64::from_polar(1.0, t))).collect()
    }

    pub fn leading(&self) -> Complex64 {
        match self.kind {
            MapKind::DiskPlus => self.coeff(1),
            MapKind::DiskMinus => self.coeff(1),
        }
    }

    /// Boundary simplicity on `m` samples.
    pub fn boundary_is_simple(&self, m: usize) -> bool {
        geometry::is_simple_closed(&self.boundary(m))
    }

    pub fn scaled(&self, s: Complex64) -> Self {
        Self { kind: self.kind, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Drops trailing coefficients with modulus below `eps`.
    pub fn trimmed(&self, eps: f64) -> Self {
        let mut coeffs = self.coeffs.clone();
        let keep = 2;
        while coeffs.len() > keep && coeffs.last().is_some_and(|c| c.norm() < eps) {
            coeffs.pop();
        }
        Self { kind: self.kind, coeffs }
    }
}

#[derive(Serialize, Deserialize)]
struct MapJson {
    kind: MapKind,
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for PowerSeriesMap {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MapJson { kind: self.kind, coeffs: self.modes().into_iter().map(|(k, c)| (k, c.re, c.im)).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PowerSeriesMap {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let j = MapJson::deserialize(d)?;
        match j.kind {
            MapKind::DiskPlus => {
                let len = j.coeffs.iter().map(|t| t.0.max(1) as usize + 1).max().unwrap_or(2);
                let mut v = vec![zero(); len];
                for (k, re, im) in j.coeffs {
                    if k < 0 {
                        return Err(D::Error::custom("interior map cannot carry negative powers"));
                    }
                    v[k as usize] += Complex64::new(re, im);
                }
                PowerSeriesMap::plus(v).map_err(D::Error::custom)
            }
            MapKind::DiskMinus => {
                let len = j.coeffs.iter().map(|t| (1 - t.0.min(1)) as usize + 1).max().unwrap_or(2).max(2);
                let mut v = vec![zero(); len];
                for (k, re, im) in j.coeffs {
                    if k > 1 {
                        return Err(D::Error::custom("exterior map allows powers k <= 1 only"));
                    }
                    v[(1 - k) as usize] += Complex64::new(re, im);
                }
                PowerSeriesMap::minus(v[0], v[1], &v[2..]).map_err(D::Error::custom)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeldingResult {
    #[serde(rename = "F")]
    pub f: PowerSeriesMap,
    #[serde(rename = "G")]
    pub g: PowerSeriesMap,
    pub residual: f64,
    pub iterations: usize,
}

/// `sup_k |F(e^{iθ_k}) − G(e^{i·lift_h(θ_k)})|` over an `m`-point grid.
pub fn welding_residual(f: &PowerSeriesMap, g: &PowerSeriesMap, h: &CircleHomeo, m: usize) -> f64 {
    spectral::grid(m)
        .into_iter()
        .map(|t| (f.eval(Complex64::from_polar(1.0, t)) - g.eval(h.apply(t))).norm())
        .fold(0.0, f64::max)
}

fn residual_grid(h: &CircleHomeo, n: usize) -> usize {
    spectral::next_pow2((16 * n).max(h.grid()).max(8 * h.order()).max(64))
}

/// Unknowns: `a_2..a_N, c_1, c_0, c_{-1}..c_{-N}` (with `a_0 = 0`, `a_1 = 1`).
struct WeldSystem {
    n: usize,
    jac: CMat,
    /// Fourier modes `-N..=N` of `e^{iθ}` (the fixed `a_1` term).
    rhs0: CVec,
}

impl WeldSystem {
    fn new(h: &CircleHomeo, n: usize) -> Self {
        let m = residual_grid(h, n);
        let dim = 2 * n + 1;
        let row = |mode: i64| (mode + n as i64) as usize;
        let mut jac = CMat::zeros(dim, dim);
        for k in 2..=n {
            jac[(row(k as i64), k - 2)] = Complex64::new(1.0, 0.0);
        }
        let psi: Vec<f64> = spectral::grid(m).into_iter().map(|t| h.lift(t)).collect();
        // columns for c_j, j = 1, 0, -1, ..., -N: chain rule on w^j ∘ h
        for (col_off, j) in std::iter::once(1i64).chain(std::iter::once(0)).chain((1..=n as i64).map(|k| -k)).enumerate() {
            let samples: Vec<Complex64> = psi.iter().map(|&p| Complex64::from_polar(1.0, j as f64 * p)).collect();
            let spec = spectral::analyze(&samples);
            for mode in -(n as i64)..=n as i64 {
                jac[(row(mode), n - 1 + col_off)] = -spectral::mode(&spec, mode);
            }
        }
        let mut rhs0 = CVec::zeros(dim);
        rhs0[row(1)] = Complex64::new(1.0, 0.0);
        Self { n, jac, rhs0 }
    }

    fn residual(&self, x: &CVec) -> CVec {
        &self.jac * x + &self.rhs0
    }

    fn unpack(&self, x: &CVec) -> Result<(PowerSeriesMap, PowerSeriesMap)> {
        let n = self.n;
        let mut a = vec![zero(), Complex64::new(1.0, 0.0)];
        a.extend((0..n - 1).map(|i| x[i]));
        let c1 = x[n - 1];
        let c0 = x[n];
        let tail: Vec<Complex64> = (0..n).map(|i| x[n + 1 + i]).collect();
        Ok((PowerSeriesMap::plus(a)?, PowerSeriesMap::minus(c1, c0, &tail)?))
    }

    fn pack(&self, f: &PowerSeriesMap, g: &PowerSeriesMap) -> CVec {
        let n = self.n;
        let mut x = CVec::zeros(2 * n + 1);
        for k in 2..=n {
            x[k - 2] = f.coeff(k as i64);
        }
        x[n - 1] = g.coeff(1);
        x[n] = g.coeff(0);
        for i in 0..n {
            x[n + 1 + i] = g.coeff(-(i as i64) - 1);
        }
        x
    }
}

/// Welds `h` with normalization `F(0) = 0`, `F'(0) = 1`, `G(∞) = ∞`.
pub fn weld(h: &CircleHomeo, n: usize, tol: f64) -> Result<WeldingResult> {
    weld_from(h, n, tol, None)
}

/// Newton iteration from an optional seed `(F, G)`; the default seed is the
/// identity pair.
pub fn weld_from(
    h: &CircleHomeo,
    n: usize,
    tol: f64,
    seed: Option<(&PowerSeriesMap, &PowerSeriesMap)>,
) -> Result<WeldingResult> {
    if n < 1 {
        return Err(Error::input("welding order must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(Error::input("tolerance must be positive"));
    }
    h.check_monotone()?;
    let sys = WeldSystem::new(h, n);
    let mut x = match seed {
        Some((f, g)) => sys.pack(f, g),
        None => sys.pack(&PowerSeriesMap::identity(), &PowerSeriesMap::identity_minus()),
    };
    let m = residual_grid(h, n);
    const MAX_ITER: usize = 8;
    let mut last = f64::INFINITY;
    for it in 1..=MAX_ITER {
        let r = sys.residual(&x);
        let (step, _) = linalg::lstsq(&sys.jac, &r, 1e14)?;
        x -= step;
        let (f, g) = sys.unpack(&x)?;
        let res = welding_residual(&f, &g, h, m);
        let converged = res < tol;
        let stalled = res >= 0.5 * last;
        if converged || stalled {
            if !converged {
                return Err(Error::NonConvergence { iterations: it, residual: res });
            }
            let samples = 8 * n.max(8);
            if !f.boundary_is_simple(samples) || !g.boundary_is_simple(samples) {
                return Err(Error::result("welded maps fail the boundary simplicity check"));
            }
            return Ok(WeldingResult { f, g, residual: res, iterations: it });
        }
        last = res;
    }
    Err(Error::NonConvergence { iterations: MAX_ITER, residual: last })
}

/// `M` boundary points `F(e^{2πik/M})`. Simplicity is checked on at least
/// `8 × order` samples, independent of `M`.
pub fn quasicircle_samples(f: &PowerSeriesMap, m: usize) -> Result<CurveSamples> {
    if m < 3 {
        return Err(Error::input("need at least 3 samples"));
    }
    let dense = m.max(8 * f.order()).max(256);
    if !f.boundary_is_simple(dense) {
        return Err(Error::result("boundary curve intersects itself"));
    }
    let params = spectral::grid(m);
    let points = params.iter().map(|&t| f.eval(Complex64::from_polar(1.0, t))).collect();
    Ok(CurveSamples { points, params, radius: 1.0, source: Some(f.clone()), closed: true })
}

/// Grid resolution for [`map_diagnostics`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagGrid {
    pub radial: usize,
    pub angular: usize,
    /// Length of the pre-Schwarzian series; `0` picks `4 × (order + 1)`.
    pub series_len: usize,
}

impl Default for DiagGrid {
    fn default() -> Self {
        Self { radial: 64, angular: 128, series_len: 0 }
    }
}

impl DiagGrid {
    pub fn refined(&self) -> Self {
        Self { radial: 2 * self.radial, angular: 2 * self.angular, series_len: 2 * self.series_len }
    }
}

/// Norms of the pre-Schwarzian `f''/f'` and the embedding data `(f''/f', f'(0))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MapDiagnostics {
    pub a1inf_norm: f64,
    pub a12_norm: f64,
    pub fprime0: Complex64,
    pub pre_schwarzian: Vec<Complex64>,
}

pub fn map_diagnostics(f: &PowerSeriesMap, grid: &DiagGrid) -> Result<MapDiagnostics> {
    if f.kind() != MapKind::DiskPlus {
        return Err(Error::input("diagnostics need an interior map"));
    }
    let a = f.taylor();
    if a[1].norm() < 1e-12 * a.iter().map(|c| c.norm()).fold(0.0, f64::max) {
        return Err(Error::input("f'(0) vanishes; f''/f' is undefined"));
    }
    let len = if grid.series_len == 0 { 4 * a.len() } else { grid.series_len };
    let d1 = series::deriv(a);
    let d2 = series::deriv(&d1);
    let pre = series::div(&d2, &d1, len)?;
    let (rs, rw) = gauss_legendre(grid.radial, 0.0, 1.0);
    let dtheta = 2.0 * std::f64::consts::PI / grid.angular as f64;
    let mut sup: f64 = 0.0;
    let mut area = 0.0;
    for (&r, &w) in rs.iter().zip(&rw) {
        let mut ring = 0.0;
        for k in 0..grid.angular {
            let z = Complex64::from_polar(r, dtheta * k as f64);
            let v = series::eval(&pre, z);
            ring += v.norm_sqr();
            sup = sup.max((1.0 - r * r) * v.norm());
        }
        area += w * r * ring * dtheta;
    }
    Ok(MapDiagnostics { a1inf_norm: sup, a12_norm: area.sqrt(), fprime0: a[1], pre_schwarzian: pre })
}
