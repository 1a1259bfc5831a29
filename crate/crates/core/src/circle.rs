//! Orientation-preserving circle homeomorphisms given by a Fourier lift,
//! their composition operators, and the Beurling–Ahlfors extension.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::fourier::FourierFunction;
use crate::linalg::{self, CMat};
use crate::operator::{BasisFamily, ModeBasis, OperatorMatrix};
use crate::quadrature::gauss_legendre;
use crate::spectral;

/// `θ ↦ θ + p(θ)` with `p(θ) = a_0 + Σ_{k≥1} a_k cos kθ + b_k sin kθ`.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleHomeo {
    cos: Vec<f64>,
    sin: Vec<f64>,
    grid: usize,
}

const MIN_GRID: usize = 16;

impl CircleHomeo {
    /// Builds and checks monotonicity on the evaluation grid.
    pub fn new(cos: Vec<f64>, sin: Vec<f64>, grid: usize) -> Result<Self> {
        let h = Self::unchecked(cos, sin, grid)?;
        h.check_monotone()?;
        Ok(h)
    }

    fn unchecked(mut cos: Vec<f64>, mut sin: Vec<f64>, grid: usize) -> Result<Self> {
        if grid < MIN_GRID {
            return Err(Error::input(format!("grid must be at least {MIN_GRID}")));
        }
        let len = cos.len().max(sin.len()).max(1);
        cos.resize(len, 0.0);
        sin.resize(len, 0.0);
        sin[0] = 0.0;
        if cos.iter().chain(&sin).any(|x| !x.is_finite()) {
            return Err(Error::input("non-finite lift coefficient"));
        }
        while cos.len() > 1 && cos[cos.len() - 1] == 0.0 && sin[sin.len() - 1] == 0.0 {
            cos.pop();
            sin.pop();
        }
        Ok(Self { cos, sin, grid })
    }

    pub fn identity(grid: usize) -> Self {
        Self::rotation(0.0, grid)
    }

    pub fn rotation(alpha: f64, grid: usize) -> Self {
        Self::unchecked(vec![alpha], vec![0.0], grid.max(MIN_GRID)).expect("rotation is valid")
    }

    /// From samples of `p = lift - θ` on the uniform `m`-point grid.
    pub fn from_lift_samples(p: &[f64], order: usize, grid: usize) -> Result<Self> {
        let samples: Vec<Complex64> = p.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        let modes = spectral::modes(&samples, order);
        let c = |k: usize| modes[order + k];
        let mut cos = vec![c(0).re];
        let mut sin = vec![0.0];
        for k in 1..=order {
            cos.push(2.0 * c(k).re);
            sin.push(-2.0 * c(k).im);
        }
        Self::new(cos, sin, grid)
    }

    pub fn grid(&self) -> usize {
        self.grid
    }

    pub fn order(&self) -> usize {
        self.cos.len() - 1
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin
    }

    pub fn is_rotation(&self) -> bool {
        self.order() == 0
    }

    /// Rotation angle when the map is a rigid rotation.
    pub fn rotation_angle(&self) -> Option<f64> {
        self.is_rotation().then(|| self.cos[0])
    }

    pub fn periodic_part(&self, theta: f64) -> f64 {
        let mut p = self.cos[0];
        for k in 1..self.cos.len() {
            let (s, c) = (k as f64 * theta).sin_cos();
            p += self.cos[k] * c + self.sin[k] * s;
        }
        p
    }

    pub fn lift(&self, theta: f64) -> f64 {
        theta + self.periodic_part(theta)
    }

    pub fn lift_deriv(&self, theta: f64) -> f64 {
        let mut d = 1.0;
        for k in 1..self.cos.len() {
            let (s, c) = (k as f64 * theta).sin_cos();
            d += k as f64 * (self.sin[k] * c - self.cos[k] * s);
        }
        d
    }

    /// `φ(e^{iθ}) = e^{i lift(θ)}`.
    pub fn apply(&self, theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, self.lift(theta))
    }

    fn check_grid(&self) -> usize {
        self.grid.max(8 * self.order()).max(MIN_GRID)
    }

    pub fn check_monotone(&self) -> Result<()> {
        let m = self.check_grid();
        for t in spectral::grid(m) {
            let d = self.lift_deriv(t);
            if !(d > 0.0) {
                return Err(Error::resolution(format!(
                    "lift derivative {d:e} at θ = {t:.4} is not positive"
                )));
            }
        }
        Ok(())
    }

    fn reprojection_order(&self) -> usize {
        (self.grid / 4).max(1)
    }

    /// Solves `lift(x) = y` by safeguarded Newton iteration.
    pub fn solve_lift(&self, y: f64) -> Result<f64> {
        let bound: f64 = self.cos.iter().map(|x| x.abs()).sum::<f64>() + self.sin.iter().map(|x| x.abs()).sum::<f64>();
        let (mut lo, mut hi) = (y - bound - 1e-12, y + bound + 1e-12);
        let mut x = y - self.periodic_part(y);
        for _ in 0..200 {
            let f = self.lift(x) - y;
            if f.abs() < 1e-15 * (1.0 + y.abs()) {
                return Ok(x);
            }
            if f > 0.0 {
                hi = hi.min(x);
            } else {
                lo = lo.max(x);
            }
            let d = self.lift_deriv(x);
            let mut next = x - f / d;
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - x).abs() < 1e-16 * (1.0 + x.abs()) || hi - lo < 1e-15 {
                return Ok(next);
            }
            x = next;
        }
        Err(Error::resolution(format!("lift inversion did not converge at y = {y}")))
    }
}

/// `φ ∘ ψ`, re-projected onto a Fourier lift of order `grid/4`.
pub fn compose(phi: &CircleHomeo, psi: &CircleHomeo) -> Result<CircleHomeo> {
    let grid = phi.grid.max(psi.grid);
    if let (Some(a), Some(b)) = (phi.rotation_angle(), psi.rotation_angle()) {
        return Ok(CircleHomeo::rotation(a + b, grid));
    }
    let m = grid;
    let p: Vec<f64> = spectral::grid(m)
        .into_iter()
        .map(|t| psi.periodic_part(t) + phi.periodic_part(psi.lift(t)))
        .collect();
    let order = (m / 4).max(1);
    CircleHomeo::from_lift_samples(&p, order, grid)
}

/// Group inverse by pointwise root finding on the grid.
pub fn invert(phi: &CircleHomeo) -> Result<CircleHomeo> {
    phi.check_monotone()?;
    if let Some(a) = phi.rotation_angle() {
        return Ok(CircleHomeo::rotation(-a, phi.grid));
    }
    let m = phi.grid;
    let p = spectral::grid(m)
        .into_iter()
        .map(|y| phi.solve_lift(y).map(|x| x - y))
        .collect::<Result<Vec<f64>>>()?;
    CircleHomeo::from_lift_samples(&p, phi.reprojection_order(), phi.grid)
}

/// Grid of `(α, β)` pairs for the quasisymmetry ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsGrid {
    pub n_alpha: usize,
    pub n_beta: usize,
    pub beta_min: f64,
    pub beta_max: f64,
}

impl Default for QsGrid {
    fn default() -> Self {
        Self { n_alpha: 256, n_beta: 64, beta_min: 0.05, beta_max: PI }
    }
}

/// Largest symmetric ratio `max(ρ, 1/ρ)` over the grid, with
/// `ρ = |φ(α+β) − φ(α)| / |φ(α) − φ(α−β)|`. A lower bound for the
/// quasisymmetry constant.
pub fn qs_ratio(phi: &CircleHomeo, grid: &QsGrid) -> Result<f64> {
    if !(grid.beta_min > 0.0 && grid.beta_max < 2.0 * PI && grid.beta_min <= grid.beta_max) {
        return Err(Error::input("β range must lie strictly inside (0, 2π)"));
    }
    if grid.n_alpha == 0 || grid.n_beta == 0 {
        return Err(Error::input("empty quasisymmetry grid"));
    }
    let mut worst: f64 = 1.0;
    for i in 0..grid.n_alpha {
        let a = 2.0 * PI * i as f64 / grid.n_alpha as f64;
        let fa = phi.apply(a);
        for j in 0..grid.n_beta {
            let b = if grid.n_beta == 1 {
                grid.beta_min
            } else {
                grid.beta_min + (grid.beta_max - grid.beta_min) * j as f64 / (grid.n_beta - 1) as f64
            };
            let num = (phi.apply(a + b) - fa).norm();
            let den = (fa - phi.apply(a - b)).norm();
            if den < 1e-14 || num < 1e-14 {
                return Err(Error::resolution("degenerate quasisymmetry ratio denominator"));
            }
            let r = num / den;
            worst = worst.max(r).max(1.0 / r);
        }
    }
    Ok(worst)
}

fn quadrature_size(phi: &CircleHomeo, n: usize) -> usize {
    spectral::next_pow2((8 * n).max(phi.grid).max(8 * phi.order()).max(64))
}

/// Matrix of `Ĉ_φ h = h∘φ − mean` on the zero-mean space, in the basis
/// `u_n = e^{inθ}/√|n|`, modes ordered `-1..=-N, 1..=N`.
///
/// Entry `(m, n)` is the `u_m` coefficient of `Ĉ_φ u_n`. Negative-mode
/// columns are the conjugates of the positive ones, so the block structure
/// `[[a, b], [b̄, ā]]` holds exactly.
pub fn comp_operator_matrix(phi: &CircleHomeo, n: usize) -> Result<OperatorMatrix> {
    if n == 0 {
        return Err(Error::input("truncation order must be at least 1"));
    }
    let basis = ModeBasis::circle(n);
    let dim = 2 * n;
    let mut mat = CMat::zeros(dim, dim);
    if let Some(alpha) = phi.rotation_angle() {
        for (i, &k) in basis.modes.iter().enumerate() {
            mat[(i, i)] = Complex64::from_polar(1.0, k as f64 * alpha);
        }
        return OperatorMatrix::new(mat, basis.clone(), basis, n);
    }
    let m = quadrature_size(phi, n);
    let lifts: Vec<f64> = spectral::grid(m).into_iter().map(|t| phi.lift(t)).collect();
    let columns: Vec<Vec<Complex64>> = (1..=n as i64)
        .into_par_iter()
        .map(|k| {
            let samples: Vec<Complex64> = lifts.iter().map(|&l| Complex64::from_polar(1.0, k as f64 * l)).collect();
            let spec = spectral::analyze(&samples);
            basis
                .modes
                .iter()
                .map(|&r| spectral::mode(&spec, r) * ((r.unsigned_abs() as f64) / k as f64).sqrt())
                .collect()
        })
        .collect();
    for (ci, col) in columns.iter().enumerate() {
        let k = ci as i64 + 1;
        let jp = basis.index_of(k).unwrap();
        let jm = basis.index_of(-k).unwrap();
        for (i, &r) in basis.modes.iter().enumerate() {
            mat[(i, jp)] = col[i];
            let ineg = basis.index_of(-r).unwrap();
            mat[(ineg, jm)] = col[i].conj();
        }
    }
    OperatorMatrix::new(mat, basis.clone(), basis, n)
}

/// `Ĉ_φ g` computed directly by sampling `g∘φ` on a fine grid.
pub fn compose_function(phi: &CircleHomeo, g: &FourierFunction, out_order: usize) -> Result<FourierFunction> {
    let m = spectral::next_pow2((4 * out_order + 2).max(phi.grid).max(8 * g.order()).max(64));
    let samples: Vec<Complex64> = spectral::grid(m).into_iter().map(|t| g.eval(phi.lift(t))).collect();
    Ok(FourierFunction::from_samples(&samples, out_order)?.zero_mean())
}

/// Block form of a composition operator with respect to
/// `D_*(outside) ⊕ D_*(inside)`.
///
/// `a` maps exterior modes to exterior modes, `b` maps interior modes to
/// exterior modes. The remaining blocks are `b̄` (exterior to interior) and
/// `ā` (interior to interior). Row/column `i` of each block corresponds to
/// `|mode| = i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockDecomposition {
    pub a: CMat,
    pub b: CMat,
    pub order: usize,
}

impl BlockDecomposition {
    pub fn c(&self) -> CMat {
        linalg::conj(&self.b)
    }

    pub fn d(&self) -> CMat {
        linalg::conj(&self.a)
    }

    pub fn assemble(&self) -> CMat {
        assemble_blocks(&self.a, &self.b, &self.c(), &self.d())
    }

    /// Grunsky operator `b̄ a^{-1}` in the bases `q_n → p_m`.
    pub fn grunsky(&self) -> Result<OperatorMatrix> {
        let n = self.order;
        // X a = c  <=>  aᵀ Xᵀ = cᵀ
        let xt = linalg::solve(&self.a.transpose(), &self.c().transpose())?;
        OperatorMatrix::new(xt.transpose(), ModeBasis::plus(n), ModeBasis::minus(n), n)
    }
}

pub(crate) fn assemble_blocks(a: &CMat, b: &CMat, c: &CMat, d: &CMat) -> CMat {
    let n = a.nrows();
    let mut full = CMat::zeros(2 * n, 2 * n);
    full.view_mut((0, 0), (n, n)).copy_from(a);
    full.view_mut((0, n), (n, n)).copy_from(b);
    full.view_mut((n, 0), (n, n)).copy_from(c);
    full.view_mut((n, n), (n, n)).copy_from(d);
    full
}

/// Splits a circle-basis matrix into its `a` and `b` blocks. Fails if the
/// matrix lacks the conjugate block structure of a real composition operator.
pub fn block_decompose(m: &OperatorMatrix) -> Result<BlockDecomposition> {
    let n = m.truncation_order;
    let basis = ModeBasis::circle(n);
    if m.row_basis != basis || m.col_basis != basis || m.row_basis.family != BasisFamily::Circle {
        return Err(Error::input("block decomposition needs the circle basis ordered -1..-N, 1..N"));
    }
    let e = &m.entries;
    let a = e.view((0, 0), (n, n)).into_owned();
    let b = e.view((0, n), (n, n)).into_owned();
    let bd = BlockDecomposition { a, b, order: n };
    let scale = linalg::frobenius(e).max(1.0);
    let err = linalg::frobenius(&(bd.assemble() - e));
    if err > 1e-12 * scale {
        return Err(Error::input(format!(
            "matrix lacks the conjugate block structure (mismatch {err:e})"
        )));
    }
    Ok(bd)
}

// ---------------------------------------------------------------------------
// Beurling–Ahlfors extension into the exterior disk

/// Number of Gauss–Legendre nodes for the averaging integrals.
const BA_NODES: usize = 48;

struct LineConjugate<'a> {
    phi: &'a CircleHomeo,
    base: f64,
}

impl LineConjugate<'_> {
    // Cayley picture: x = -cot(θ/2), θ = π + 2 atan x, with the lift
    // normalized to fix θ = 0 (the point at infinity on the line).
    fn value_and_deriv(&self, x: f64) -> (f64, f64) {
        let theta = PI + 2.0 * x.atan();
        let u = self.phi.lift(theta) - self.base;
        let half = 0.5 * u;
        let s = half.sin();
        let val = -half.cos() / s;
        let d = self.phi.lift_deriv(theta) / (s * s * (1.0 + x * x));
        (val, d)
    }
}

/// Beltrami coefficient `∂̄E/∂E` of the Beurling–Ahlfors extension `E` of
/// `φ` into `{|ζ| > 1}` at `ζ`.
pub fn beurling_ahlfors_mu(phi: &CircleHomeo, zeta: Complex64) -> Result<Complex64> {
    let (nodes, weights) = gauss_legendre(BA_NODES, 0.0, 1.0);
    ba_mu_with(phi, zeta, &nodes, &weights)
}

fn ba_mu_with(phi: &CircleHomeo, zeta: Complex64, nodes: &[f64], weights: &[f64]) -> Result<Complex64> {
    if zeta.norm() <= 1.0 {
        return Err(Error::input("Beurling–Ahlfors point must satisfy |ζ| > 1"));
    }
    if phi.is_rotation() {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::new(0.0, 1.0);
    let line = LineConjugate { phi, base: phi.lift(0.0) };
    // C(ζ) = i(1+ζ)/(1−ζ) sends the exterior disk to the lower half-plane;
    // work at the mirror point in the upper half-plane.
    let z = i * (1.0 + zeta) / (1.0 - zeta);
    let (x, y) = (z.re, -z.im);
    let (mut a, mut b, mut ax, mut ay, mut bx, mut by) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for (&t, &w) in nodes.iter().zip(weights) {
        let (fp, dp) = line.value_and_deriv(x + t * y);
        let (fm, dm) = line.value_and_deriv(x - t * y);
        a += w * fp;
        b += w * fm;
        ax += w * dp;
        ay += w * t * dp;
        bx += w * dm;
        by -= w * t * dm;
    }
    if !(a.is_finite() && b.is_finite() && ax.is_finite() && bx.is_finite()) {
        return Err(Error::resolution("Beurling–Ahlfors averages are not finite"));
    }
    let gx = Complex64::new(0.5 * (ax + bx), ax - bx);
    let gy = Complex64::new(0.5 * (ay + by), ay - by);
    let dz = 0.5 * (gx - i * gy);
    let dzbar = 0.5 * (gx + i * gy);
    let mu_upper = dzbar / dz;
    // reflect to the lower half-plane, then pull back through C
    let cprime = 2.0 * i / ((1.0 - zeta) * (1.0 - zeta));
    let mu = mu_upper.conj() * cprime.conj() / cprime;
    if !(mu.norm() < 1.0) {
        return Err(Error::resolution(format!("|μ| = {} is not below 1", mu.norm())));
    }
    Ok(mu)
}

/// Hyperbolic L² energy of the Beurling–Ahlfors Beltrami coefficient at two
/// quadrature resolutions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WpEnergyReport {
    pub coarse: f64,
    pub fine: f64,
    pub relative_change: f64,
    pub radial: usize,
    pub angular: usize,
}

fn wp_energy_once(phi: &CircleHomeo, radial: usize, angular: usize) -> Result<f64> {
    if phi.is_rotation() {
        return Ok(0.0);
    }
    // ζ = 1/w maps the punctured unit disk onto the exterior; the
    // hyperbolic area density is invariant under the inversion.
    let (rs, rw) = gauss_legendre(radial, 0.0, 1.0);
    let (nodes, weights) = gauss_legendre(BA_NODES, 0.0, 1.0);
    let dtheta = 2.0 * PI / angular as f64;
    let rows = rs
        .par_iter()
        .zip(rw.par_iter())
        .map(|(&r, &w)| {
            let mut acc = 0.0;
            for k in 0..angular {
                let wpt = Complex64::from_polar(r, dtheta * (k as f64 + 0.5));
                let mu = ba_mu_with(phi, wpt.inv(), &nodes, &weights)?;
                acc += mu.norm_sqr();
            }
            Ok(w * r * acc * dtheta / (1.0 - r * r).powi(2))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(rows.iter().sum())
}

/// `∬ |μ|²/(1−|ζ|²)² dA` over the exterior disk, at `(radial, angular)`
/// nodes and at twice that resolution.
pub fn wp_energy_estimate(phi: &CircleHomeo, radial: usize, angular: usize) -> Result<WpEnergyReport> {
    if radial == 0 || angular == 0 {
        return Err(Error::input("energy grids must be nonempty"));
    }
    let coarse = wp_energy_once(phi, radial, angular)?;
    let fine = wp_energy_once(phi, 2 * radial, 2 * angular)?;
    let relative_change = if fine == 0.0 && coarse == 0.0 { 0.0 } else { (fine - coarse).abs() / fine.abs().max(coarse.abs()) };
    Ok(WpEnergyReport { coarse, fine, relative_change, radial, angular })
}

#[derive(Serialize, Deserialize)]
struct HomeoJson {
    lift_coeffs: Vec<(usize, f64, f64)>,
    grid: usize,
}

impl Serialize for CircleHomeo {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        HomeoJson {
            lift_coeffs: (0..self.cos.len()).map(|k| (k, self.cos[k], self.sin[k])).collect(),
            grid: self.grid,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CircleHomeo {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = HomeoJson::deserialize(d)?;
        let len = j.lift_coeffs.iter().map(|t| t.0 + 1).max().unwrap_or(1);
        let (mut cos, mut sin) = (vec![0.0; len], vec![0.0; len]);
        for (k, a, b) in j.lift_coeffs {
            cos[k] += a;
            sin[k] += b;
        }
        CircleHomeo::new(cos, sin, j.grid).map_err(serde::de::Error::custom)
    }
}
