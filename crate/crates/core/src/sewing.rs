//! Genus-zero rigged spheres, cap sewing (the map `E`), sewing two spheres
//! along a boundary and a finite-difference holomorphy probe.
//!
//! A rigging at a finite puncture `p` is a series `f` with `f(0) = p`. A
//! rigging at `∞` is stored in the chart `w = 1/ζ`: the series `g` with
//! `g(0) = 0` and `ζ = 1/g(z)`.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cauchy::CurveSamples;
use crate::error::{Error, Result};
use crate::geometry;
use crate::linalg::{self, CMat, CVec};
use crate::series;
use crate::spectral;
use crate::welding::{MapKind, PowerSeriesMap};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Puncture {
    Finite(Complex64),
    Infinity,
}

impl Puncture {
    pub fn finite(&self) -> Option<Complex64> {
        match self {
            Puncture::Finite(z) => Some(*z),
            Puncture::Infinity => None,
        }
    }

    /// Homogeneous coordinates `(z, 1)` or `(1, 0)`.
    fn homogeneous(&self) -> (Complex64, Complex64) {
        match self {
            Puncture::Finite(z) => (*z, one()),
            Puncture::Infinity => (one(), zero()),
        }
    }

    fn distance(&self, other: &Puncture) -> f64 {
        match (self, other) {
            (Puncture::Finite(a), Puncture::Finite(b)) => (a - b).norm(),
            (Puncture::Infinity, Puncture::Infinity) => 0.0,
            _ => f64::INFINITY,
        }
    }
}

impl Serialize for Puncture {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Puncture::Finite(z) => (z.re, z.im).serialize(s),
            Puncture::Infinity => "inf".serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Puncture {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Pair(f64, f64),
            Word(String),
        }
        match Raw::deserialize(d)? {
            Raw::Pair(re, im) => Ok(Puncture::Finite(Complex64::new(re, im))),
            Raw::Word(w) if w == "inf" => Ok(Puncture::Infinity),
            Raw::Word(w) => Err(D::Error::custom(format!("unknown puncture {w:?}; use [re, im] or \"inf\""))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SurfaceModel {
    Puncture,
    Border,
}

const CURVE_SAMPLES: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiggedSphere {
    punctures: Vec<Puncture>,
    riggings: Vec<PowerSeriesMap>,
    model: SurfaceModel,
}

#[derive(Deserialize)]
struct SphereJson {
    punctures: Vec<Puncture>,
    riggings: Vec<PowerSeriesMap>,
    model: SurfaceModel,
}

impl<'de> Deserialize<'de> for RiggedSphere {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let j = SphereJson::deserialize(d)?;
        RiggedSphere::new(j.punctures, j.riggings, j.model).map_err(D::Error::custom)
    }
}

impl RiggedSphere {
    /// Validates distinct punctures, centered univalent riggings and
    /// pairwise disjoint closures of the rigging disks.
    pub fn new(punctures: Vec<Puncture>, riggings: Vec<PowerSeriesMap>, model: SurfaceModel) -> Result<Self> {
        let s = Self { punctures, riggings, model };
        s.validate()?;
        Ok(s)
    }

    pub fn punctures(&self) -> &[Puncture] {
        &self.punctures
    }

    pub fn riggings(&self) -> &[PowerSeriesMap] {
        &self.riggings
    }

    pub fn model(&self) -> SurfaceModel {
        self.model
    }

    pub fn len(&self) -> usize {
        self.punctures.len()
    }

    pub fn is_empty(&self) -> bool {
        self.punctures.is_empty()
    }

    /// Boundary curve `f_i(𝕊¹)` in the sphere coordinate.
    pub fn boundary_curve(&self, i: usize, m: usize) -> Vec<Complex64> {
        let r = &self.riggings[i];
        spectral::grid(m)
            .into_iter()
            .map(|t| {
                let v = r.eval(Complex64::from_polar(1.0, t));
                match self.punctures[i] {
                    Puncture::Finite(_) => v,
                    Puncture::Infinity => v.inv(),
                }
            })
            .collect()
    }

    fn disk_contains(&self, i: usize, curve: &[Complex64], q: &Puncture) -> bool {
        match (self.punctures[i], q) {
            (Puncture::Finite(_), Puncture::Infinity) => false,
            (Puncture::Infinity, Puncture::Infinity) => true,
            (Puncture::Finite(_), Puncture::Finite(z)) => geometry::winding_number(curve, *z) != 0,
            (Puncture::Infinity, Puncture::Finite(z)) => geometry::winding_number(curve, *z) == 0,
        }
    }

    fn validate(&self) -> Result<()> {
        let n = self.punctures.len();
        if n == 0 {
            return Err(Error::input("a rigged sphere needs at least one puncture"));
        }
        if self.riggings.len() != n {
            return Err(Error::input("one rigging per puncture is required"));
        }
        for (i, (p, r)) in self.punctures.iter().zip(&self.riggings).enumerate() {
            if r.kind() != MapKind::DiskPlus {
                return Err(Error::input(format!("rigging {i} must be a disk_plus series")));
            }
            if r.coeff(1).norm() == 0.0 {
                return Err(Error::input(format!("rigging {i} has zero derivative at 0")));
            }
            let center = match p {
                Puncture::Finite(z) => *z,
                Puncture::Infinity => zero(),
            };
            if let Puncture::Finite(z) = p {
                if !z.is_finite() {
                    return Err(Error::input(format!("puncture {i} is not finite")));
                }
            }
            if (r.coeff(0) - center).norm() > 1e-12 * (1.0 + center.norm()) {
                return Err(Error::input(format!("rigging {i} is not centered at its puncture")));
            }
        }
        for i in 0..n {
            for j in 0..i {
                if self.punctures[i].distance(&self.punctures[j]) <= 1e-12 {
                    return Err(Error::input(format!("punctures {j} and {i} coincide")));
                }
            }
        }
        let m = CURVE_SAMPLES.max(8 * self.riggings.iter().map(|r| r.order()).max().unwrap_or(1));
        let curves: Vec<Vec<Complex64>> = (0..n).map(|i| self.boundary_curve(i, m)).collect();
        for (i, c) in curves.iter().enumerate() {
            if c.iter().any(|z| !z.is_finite()) || !geometry::is_simple_closed(c) {
                return Err(Error::input(format!("rigging {i} is not univalent on the closed disk")));
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && self.disk_contains(i, &curves[i], &self.punctures[j]) {
                    return Err(Error::input(format!("rigging disk {i} contains puncture {j}")));
                }
            }
            for j in 0..n {
                // with no crossings, one sample decides whether curve j lies in disk i
                if i != j && self.disk_contains(i, &curves[i], &Puncture::Finite(curves[j][0])) {
                    return Err(Error::input(format!("rigging disks {i} and {j} overlap")));
                }
            }
            for j in 0..i {
                if geometry::polygons_intersect(&curves[i], &curves[j]) {
                    return Err(Error::input(format!("closures of rigging disks {j} and {i} overlap")));
                }
            }
        }
        Ok(())
    }

    /// Riggings as plain interior maps; fails if a puncture sits at `∞`.
    pub fn finite_riggings(&self) -> Result<Vec<PowerSeriesMap>> {
        if self.punctures.contains(&Puncture::Infinity) {
            return Err(Error::input("this operation needs all punctures finite"));
        }
        Ok(self.riggings.clone())
    }

    /// Applies a Möbius map to all punctures and riggings, keeping `len`
    /// Taylor coefficients of each transformed rigging.
    pub fn transform(&self, m: &Mobius, len: usize) -> Result<Self> {
        let mut punctures = Vec::with_capacity(self.len());
        let mut riggings = Vec::with_capacity(self.len());
        for (p, r) in self.punctures.iter().zip(&self.riggings) {
            let (q, s) = m.apply_rigging(p, r, len)?;
            punctures.push(q);
            riggings.push(s);
        }
        Self::new(punctures, riggings, self.model)
    }
}

/// `ζ ↦ (aζ + b)/(cζ + d)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det.norm() > 0.0) || ![a, b, c, d].iter().all(|x| x.is_finite()) {
            return Err(Error::input("Möbius map must have finite entries and nonzero determinant"));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self { a: one(), b: zero(), c: zero(), d: one() }
    }

    /// `self ∘ other`.
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: self.a * o.a + self.b * o.c,
            b: self.a * o.b + self.b * o.d,
            c: self.c * o.a + self.d * o.c,
            d: self.c * o.b + self.d * o.d,
        }
    }

    /// The map sending `p0, p1, p2` to `0, 1, ∞`.
    pub fn normalizing(p0: &Puncture, p1: &Puncture, p2: &Puncture) -> Result<Self> {
        let det = |u: (Complex64, Complex64), v: (Complex64, Complex64)| u.0 * v.1 - u.1 * v.0;
        let (h0, h1, h2) = (p0.homogeneous(), p1.homogeneous(), p2.homogeneous());
        let d12 = det(h1, h2);
        let d10 = det(h1, h0);
        Self::new(h0.1 * d12, -h0.0 * d12, h2.1 * d10, -h2.0 * d10)
    }

    pub fn apply(&self, p: &Puncture) -> Puncture {
        let (z0, z1) = p.homogeneous();
        let num = self.a * z0 + self.b * z1;
        let den = self.c * z0 + self.d * z1;
        if den == zero() {
            Puncture::Infinity
        } else {
            Puncture::Finite(num / den)
        }
    }

    /// Image of a rigging centered at `p`, truncated to `len` coefficients.
    pub fn apply_rigging(&self, p: &Puncture, r: &PowerSeriesMap, len: usize) -> Result<(Puncture, PowerSeriesMap)> {
        let f = series::resize(r.taylor(), len);
        let lin = |x: Complex64, y: Complex64| -> Vec<Complex64> {
            // x·f + y, or for a chart at ∞, x + y·g
            match p {
                Puncture::Finite(_) => {
                    let mut v = series::scale(&f, x);
                    v[0] += y;
                    v
                }
                Puncture::Infinity => {
                    let mut v = series::scale(&f, y);
                    v[0] += x;
                    v
                }
            }
        };
        let num = lin(self.a, self.b);
        let den = lin(self.c, self.d);
        let q = self.apply(p);
        let mut out = match q {
            Puncture::Finite(_) => series::div(&num, &den, len)?,
            Puncture::Infinity => series::div(&den, &num, len)?,
        };
        out[0] = match q {
            Puncture::Finite(z) => z,
            Puncture::Infinity => zero(),
        };
        Ok((q, PowerSeriesMap::plus(out)?))
    }
}

/// Möbius-invariant description of a rigged sphere.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModuliInvariants {
    /// Images of punctures `3..n` once punctures `0, 1, 2` sit at `0, 1, ∞`.
    pub cross_ratios: Vec<Complex64>,
    /// Taylor coefficients `1..=K` of each rigging in the normalized
    /// coordinate (chart `1/ζ` for the puncture at `∞`).
    pub rigging_jets: Vec<Vec<Complex64>>,
}

impl ModuliInvariants {
    /// All invariants as one flat vector.
    pub fn flatten(&self) -> Vec<Complex64> {
        self.cross_ratios.iter().chain(self.rigging_jets.iter().flatten()).copied().collect()
    }

    /// Largest entrywise difference; `∞` if the shapes differ.
    pub fn distance(&self, other: &Self) -> f64 {
        let (a, b) = (self.flatten(), other.flatten());
        if a.len() != b.len() || self.rigging_jets.len() != other.rigging_jets.len() {
            return f64::INFINITY;
        }
        a.iter().zip(&b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
    }
}

/// Normalizing Möbius map: three punctures go to `0, 1, ∞`; with fewer,
/// the first rigging's low-order jet fixes the remaining freedom.
pub fn normalizing_map(s: &RiggedSphere) -> Result<Mobius> {
    let p = s.punctures();
    match p.len() {
        0 => Err(Error::input("empty sphere")),
        1 => {
            let m0 = match p[0] {
                Puncture::Finite(z) => Mobius::new(one(), -z, zero(), one())?,
                Puncture::Infinity => Mobius::new(zero(), one(), one(), zero())?,
            };
            let (_, f) = m0.apply_rigging(&p[0], &s.riggings()[0], 3)?;
            let lambda = f.coeff(1).inv();
            // λf = z + λa₂z² + ..., and ζ/(1 + cζ) removes the z² term for c = λa₂
            let scale = Mobius::new(lambda, zero(), zero(), one())?;
            let kill = Mobius::new(one(), zero(), f.coeff(2) * lambda, one())?;
            Ok(kill.compose(&scale).compose(&m0))
        }
        2 => {
            let (h0, h1) = (p[0].homogeneous(), p[1].homogeneous());
            let m0 = Mobius::new(h0.1, -h0.0, h1.1, -h1.0)?;
            let (_, f) = m0.apply_rigging(&p[0], &s.riggings()[0], 2)?;
            Ok(Mobius::new(f.coeff(1).inv(), zero(), zero(), one())?.compose(&m0))
        }
        _ => Mobius::normalizing(&p[0], &p[1], &p[2]),
    }
}

pub fn moduli_invariants(s: &RiggedSphere, jets: usize) -> Result<ModuliInvariants> {
    let m = normalizing_map(s)?;
    let mut cross_ratios = Vec::new();
    let mut rigging_jets = Vec::with_capacity(s.len());
    for (k, (p, r)) in s.punctures().iter().zip(s.riggings()).enumerate() {
        let (q, f) = m.apply_rigging(p, r, jets + 1)?;
        if k >= 3 {
            cross_ratios.push(q.finite().ok_or_else(|| Error::result("puncture collided with ∞"))?);
        }
        rigging_jets.push((1..=jets as i64).map(|j| f.coeff(j)).collect());
    }
    Ok(ModuliInvariants { cross_ratios, rigging_jets })
}

/// The map `E`: a border-model sphere with boundary parametrizations `τ`
/// (the riggings' boundary values) becomes the puncture-model sphere with
/// the holomorphic extensions `τ̃`. At genus zero the complex structure is
/// already global, so only the model changes.
pub fn sew_caps(s: &RiggedSphere) -> Result<RiggedSphere> {
    if s.model != SurfaceModel::Border {
        return Err(Error::input("sew_caps expects a border-model sphere"));
    }
    Ok(RiggedSphere { model: SurfaceModel::Puncture, ..s.clone() })
}

/// Inverse of [`sew_caps`].
pub fn cut_caps(s: &RiggedSphere) -> Result<RiggedSphere> {
    if s.model != SurfaceModel::Puncture {
        return Err(Error::input("cut_caps expects a puncture-model sphere"));
    }
    Ok(RiggedSphere { model: SurfaceModel::Border, ..s.clone() })
}

/// `Φ(ζ) = ζ + α₀ + Σ_{k≥1} α_k ζ^{-k}` outside a curve `x` and
/// `Ψ(ω) = Σ_{k≥1} β_k ω^k` inside a curve `y`, matched on the seam
/// `Φ(x(θ)) = Ψ(y(θ))`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeamMaps {
    pub outer: Vec<Complex64>,
    pub inner: Vec<Complex64>,
    pub residual: f64,
}

impl SeamMaps {
    pub fn outer_at(&self, zeta: Complex64) -> Complex64 {
        let u = zeta.inv();
        zeta + series::eval(&self.outer, u)
    }

    pub fn inner_at(&self, omega: Complex64) -> Complex64 {
        series::eval(&self.inner, omega) * omega
    }
}

fn seam_grid(n: usize) -> usize {
    spectral::next_pow2((16 * n).max(CURVE_SAMPLES))
}

/// Solves the seam equation on modes `-n..=n`; `x` and `y` are samples on
/// the uniform grid, both winding positively around 0.
pub fn solve_seam(x: &[Complex64], y: &[Complex64], n: usize, tol: f64) -> Result<SeamMaps> {
    let m = x.len();
    if y.len() != m || 2 * n >= m {
        return Err(Error::input("seam samples must share a grid finer than the order"));
    }
    let origin = zero();
    if geometry::winding_number(x, origin) != 1 || geometry::winding_number(y, origin) != 1 {
        return Err(Error::input("seam curves must wind once, positively, around 0"));
    }
    let dim = 2 * n + 1;
    let modes_of = |v: Vec<Complex64>| spectral::modes(&v, n);
    let mut a = CMat::zeros(dim, dim);
    for k in 0..=n {
        let col = modes_of(x.iter().map(|z| z.powi(-(k as i32))).collect());
        a.column_mut(k).copy_from_slice(&col);
    }
    for k in 1..=n {
        let col = modes_of(y.iter().map(|w| -w.powi(k as i32)).collect());
        a.column_mut(n + k).copy_from_slice(&col);
    }
    let rhs = CVec::from_vec(modes_of(x.iter().map(|z| -z).collect()));
    let (sol, _) = linalg::lstsq_scaled(a, &rhs, 1e14)?;
    let maps = SeamMaps {
        outer: sol.iter().take(n + 1).copied().collect(),
        inner: sol.iter().skip(n + 1).copied().collect(),
        residual: 0.0,
    };
    let residual = x
        .iter()
        .zip(y)
        .map(|(&z, &w)| (maps.outer_at(z) - maps.inner_at(w)).norm())
        .fold(0.0, f64::max);
    if !(residual < tol) {
        return Err(Error::NonConvergence { iterations: 1, residual });
    }
    Ok(SeamMaps { residual, ..maps })
}

/// Pushes a rigging through a holomorphic map of its disk's neighbourhood by
/// sampling on the unit circle.
fn push_rigging(
    p: &Puncture,
    r: &PowerSeriesMap,
    map: &dyn Fn(&Puncture) -> Puncture,
    order: usize,
) -> Result<(Puncture, PowerSeriesMap)> {
    let m = spectral::next_pow2((8 * order).max(CURVE_SAMPLES));
    let q = map(p);
    let vals: Vec<Complex64> = spectral::grid(m)
        .into_iter()
        .map(|t| {
            let v = r.eval(Complex64::from_polar(1.0, t));
            let pt = match p {
                Puncture::Finite(_) => Puncture::Finite(v),
                Puncture::Infinity => Puncture::Finite(v.inv()),
            };
            match (map(&pt), q) {
                (Puncture::Finite(w), Puncture::Finite(_)) => w,
                (Puncture::Finite(w), Puncture::Infinity) => w.inv(),
                (Puncture::Infinity, _) => Complex64::new(f64::NAN, 0.0),
            }
        })
        .collect();
    if vals.iter().any(|v| !v.is_finite()) {
        return Err(Error::result("sewing map has a pole on a rigging circle"));
    }
    let spec = spectral::analyze(&vals);
    let mut coeffs: Vec<Complex64> = (0..=order as i64).map(|k| spectral::mode(&spec, k)).collect();
    coeffs[0] = q.finite().unwrap_or_else(zero);
    Ok((q, PowerSeriesMap::plus(coeffs)?))
}

fn output_sphere(punctures: Vec<Puncture>, riggings: Vec<PowerSeriesMap>) -> Result<RiggedSphere> {
    RiggedSphere::new(punctures, riggings, SurfaceModel::Puncture).map_err(|e| match e {
        Error::InvalidInput(msg) => Error::InvalidResult(format!("sewn surface is degenerate: {msg}")),
        other => other,
    })
}

pub const DEFAULT_JETS: usize = 4;

/// Result of sewing, with the data needed to cut along the seam again.
#[derive(Debug, Clone)]
pub struct Sewn {
    pub sphere: RiggedSphere,
    pub invariants: ModuliInvariants,
    /// The seam `σ(θ)` in the sewn coordinate, parametrized by the first
    /// piece's boundary parameter.
    pub seam: CurveSamples,
    pub residual: f64,
    left_len: usize,
    left_index: usize,
    right_index: usize,
}

fn boundary_local(s: &RiggedSphere, i: usize, m: usize, reversed: bool) -> Vec<Complex64> {
    let r = &s.riggings()[i];
    spectral::grid(m)
        .into_iter()
        .map(|t| {
            let t = if reversed { -t } else { t };
            let v = r.eval(Complex64::from_polar(1.0, t));
            match s.punctures()[i] {
                Puncture::Finite(p) => v - p,
                Puncture::Infinity => v,
            }
        })
        .collect()
}

/// Local coordinate `L(ζ)` sending puncture `p` to 0: `ζ − p`, or `1/ζ` at `∞`.
fn local(p: &Puncture, q: &Puncture) -> Puncture {
    match (p, q) {
        (Puncture::Finite(p), Puncture::Finite(z)) => Puncture::Finite(z - p),
        (Puncture::Finite(_), Puncture::Infinity) => Puncture::Infinity,
        (Puncture::Infinity, Puncture::Finite(z)) => {
            if *z == zero() {
                Puncture::Infinity
            } else {
                Puncture::Finite(z.inv())
            }
        }
        (Puncture::Infinity, Puncture::Infinity) => Puncture::Finite(zero()),
    }
}

fn invert(q: &Puncture) -> Puncture {
    match q {
        Puncture::Finite(z) if *z == zero() => Puncture::Infinity,
        Puncture::Finite(z) => Puncture::Finite(z.inv()),
        Puncture::Infinity => Puncture::Finite(zero()),
    }
}

/// Sews boundary `i` of `s1` to boundary `j` of `s2`, identifying
/// `f¹_i(e^{iθ})` with `f²_j(e^{-iθ})`.
pub fn sew_two(s1: &RiggedSphere, i: usize, s2: &RiggedSphere, j: usize, n: usize, tol: f64) -> Result<(RiggedSphere, ModuliInvariants)> {
    let sewn = sew_two_full(s1, i, s2, j, n, tol)?;
    Ok((sewn.sphere, sewn.invariants))
}

pub fn sew_two_full(s1: &RiggedSphere, i: usize, s2: &RiggedSphere, j: usize, n: usize, tol: f64) -> Result<Sewn> {
    if i >= s1.len() || j >= s2.len() {
        return Err(Error::input("boundary index out of range"));
    }
    if n == 0 || !(tol > 0.0) {
        return Err(Error::input("order must be positive and tolerance positive"));
    }
    let m = seam_grid(n);
    let x = boundary_local(s1, i, m, false);
    let y: Vec<Complex64> = boundary_local(s2, j, m, true).into_iter().map(|v| v.inv()).collect();
    let maps = solve_seam(&x, &y, n, tol)?;
    let (p1, p2) = (s1.punctures()[i], s2.punctures()[j]);
    let left = |q: &Puncture| match local(&p1, q) {
        Puncture::Finite(z) => Puncture::Finite(maps.outer_at(z)),
        Puncture::Infinity => Puncture::Infinity,
    };
    let right = |q: &Puncture| match invert(&local(&p2, q)) {
        Puncture::Finite(w) => Puncture::Finite(maps.inner_at(w)),
        Puncture::Infinity => Puncture::Infinity,
    };
    let mut punctures = Vec::new();
    let mut riggings = Vec::new();
    for k in (0..s1.len()).filter(|&k| k != i) {
        let (q, r) = push_rigging(&s1.punctures()[k], &s1.riggings()[k], &left, n)?;
        punctures.push(q);
        riggings.push(r);
    }
    for k in (0..s2.len()).filter(|&k| k != j) {
        let (q, r) = push_rigging(&s2.punctures()[k], &s2.riggings()[k], &right, n)?;
        punctures.push(q);
        riggings.push(r);
    }
    if punctures.is_empty() {
        return Err(Error::input("sewing two once-punctured spheres leaves no puncture"));
    }
    let seam_pts: Vec<Complex64> = x.iter().map(|&z| maps.outer_at(z)).collect();
    let seam = CurveSamples::from_points(seam_pts).map_err(|_| Error::result("seam image is not a simple curve"))?;
    // the second piece lies inside the seam, which must run counterclockwise
    if geometry::winding_number(&seam.points, zero()) != 1 {
        return Err(Error::result("seam orientation is reversed"));
    }
    let sphere = output_sphere(punctures, riggings)?;
    let invariants = moduli_invariants(&sphere, DEFAULT_JETS)?;
    Ok(Sewn { sphere, invariants, seam, residual: maps.residual, left_len: s1.len(), left_index: i, right_index: j })
}

/// Cuts a sewn sphere along its seam and re-caps both sides, returning the
/// two pieces in their own (normalized) coordinates.
pub fn cut_seam(sewn: &Sewn, n: usize, tol: f64) -> Result<(RiggedSphere, RiggedSphere)> {
    let sigma = &sewn.seam.points;
    let m = sigma.len();
    let circle: Vec<Complex64> = spectral::grid(m).into_iter().map(|t| Complex64::from_polar(1.0, t)).collect();
    let n_left = sewn.left_len - 1;
    let s = &sewn.sphere;
    let pieces = |range: std::ops::Range<usize>, x: Vec<Complex64>, pre: &dyn Fn(&Puncture) -> Puncture, slot: usize| -> Result<RiggedSphere> {
        let maps = solve_seam(&x, &circle, n, tol)?;
        let map = |q: &Puncture| match pre(q) {
            Puncture::Finite(z) => Puncture::Finite(maps.outer_at(z)),
            Puncture::Infinity => Puncture::Infinity,
        };
        let mut punctures = Vec::new();
        let mut riggings = Vec::new();
        for k in range {
            let (q, r) = push_rigging(&s.punctures()[k], &s.riggings()[k], &map, n)?;
            punctures.push(q);
            riggings.push(r);
        }
        let mut cap = vec![zero()];
        cap.extend_from_slice(&maps.inner);
        punctures.insert(slot, Puncture::Finite(zero()));
        riggings.insert(slot, PowerSeriesMap::plus(cap)?);
        output_sphere(punctures, riggings)
    };
    let left = pieces(0..n_left, sigma.clone(), &|q| *q, sewn.left_index)?;
    let reversed: Vec<Complex64> = (0..m).map(|k| sigma[(m - k) % m].inv()).collect();
    let right = pieces(n_left..s.len(), reversed, &invert, sewn.right_index)?;
    Ok((left, right))
}

/// Finite-difference Cauchy–Riemann residuals of the sewn invariants along
/// a one-parameter family.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub steps: Vec<f64>,
    /// `max_k |∂̄χ_k|` estimated with step `s`, one entry per step.
    pub cr_residuals: Vec<f64>,
    /// Least-squares slope of `log residual` against `log step`, when all
    /// residuals are positive.
    pub slope: Option<f64>,
}

/// `∂̄χ ≈ ½[(χ(t+s) − χ(t−s))/(2s) + i(χ(t+is) − χ(t−is))/(2s)]` for every
/// invariant of `sew_two(family(t), i, s2, j)`; vanishes to `O(s²)` for
/// holomorphic dependence.
#[allow(clippy::too_many_arguments)]
pub fn holomorphy_probe(
    family: &(dyn Fn(Complex64) -> Result<RiggedSphere> + Sync),
    i: usize,
    s2: &RiggedSphere,
    j: usize,
    t0: Complex64,
    steps: &[f64],
    n: usize,
    tol: f64,
) -> Result<ProbeReport> {
    use rayon::prelude::*;
    if steps.is_empty() || steps.iter().any(|s| !(*s > 0.0)) {
        return Err(Error::input("probe steps must be positive"));
    }
    let chi = |t: Complex64| -> Result<Vec<Complex64>> { Ok(sew_two(&family(t)?, i, s2, j, n, tol)?.1.flatten()) };
    let residuals: Vec<Result<f64>> = steps
        .par_iter()
        .map(|&s| {
            let iu = Complex64::new(0.0, 1.0);
            let (xp, xm) = (chi(t0 + s)?, chi(t0 - s)?);
            let (yp, ym) = (chi(t0 + iu * s)?, chi(t0 - iu * s)?);
            Ok((0..xp.len())
                .map(|k| (0.5 * ((xp[k] - xm[k]) / (2.0 * s) + iu * (yp[k] - ym[k]) / (2.0 * s))).norm())
                .fold(0.0, f64::max))
        })
        .collect();
    let cr_residuals = residuals.into_iter().collect::<Result<Vec<f64>>>()?;
    let slope = if steps.len() >= 2 && cr_residuals.iter().all(|&r| r > 0.0) {
        let xs: Vec<f64> = steps.iter().map(|s| s.ln()).collect();
        let ys: Vec<f64> = cr_residuals.iter().map(|r| r.ln()).collect();
        let k = xs.len() as f64;
        let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
        let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        Some(sxy / sxx)
    } else {
        None
    };
    Ok(ProbeReport { steps: steps.to_vec(), cr_residuals, slope })
}
