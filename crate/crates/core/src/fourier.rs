//! Truncated Fourier series on the unit circle and the canonical splitting
//! of the boundary Dirichlet space into the parts extending holomorphically
//! inside and outside the disk.
//!
//! Energy normalization: Dirichlet energies are reported as the area
//! integral divided by π, so `energy(z^n) = |n|`.

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::spectral;

/// A function `h(θ) = Σ_{|n|≤N} h_n e^{inθ}`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierFunction {
    order: usize,
    coeffs: Vec<Complex64>,
}

/// Which side of the circle a series extends holomorphically to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Inside the disk; modes `n ≥ 0`. The constant term lives here.
    Plus,
    /// Outside the disk; modes `n ≤ -1`, vanishing at infinity.
    Minus,
}

/// One component of the canonical decomposition.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskSeries {
    side: Side,
    order: usize,
    /// Plus side: index `n` holds `a_n`, `n = 0..=N`.
    /// Minus side: index `k - 1` holds `a_{-k}`, `k = 1..=N`.
    coeffs: Vec<Complex64>,
}

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

impl FourierFunction {
    pub fn zeros(order: usize) -> Self {
        Self { order, coeffs: vec![zero(); 2 * order + 1] }
    }

    /// Builds a series from `(n, h_n)` pairs. Repeated modes accumulate.
    pub fn from_modes(order: usize, modes: &[(i64, Complex64)]) -> Result<Self> {
        let mut f = Self::zeros(order);
        for &(n, c) in modes {
            if n.unsigned_abs() as usize > order {
                return Err(Error::input(format!("mode {n} exceeds truncation order {order}")));
            }
            f.coeffs[(n + order as i64) as usize] += c;
        }
        f.check_finite()?;
        Ok(f)
    }

    /// From a dense vector indexed `n + N`.
    pub fn from_dense(order: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * order + 1 {
            return Err(Error::input("dense coefficient vector must have length 2N + 1"));
        }
        let f = Self { order, coeffs };
        f.check_finite()?;
        Ok(f)
    }

    /// Modes `-N..=N` of samples on a uniform grid.
    pub fn from_samples(samples: &[Complex64], order: usize) -> Result<Self> {
        if samples.len() <= 2 * order {
            return Err(Error::resolution(format!(
                "{} samples cannot resolve {} modes",
                samples.len(),
                2 * order + 1
            )));
        }
        Self::from_dense(order, spectral::modes(samples, order))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        if n.unsigned_abs() as usize > self.order {
            zero()
        } else {
            self.coeffs[(n + self.order as i64) as usize]
        }
    }

    pub fn dense(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let n0 = self.order as i64;
        self.coeffs.iter().enumerate().map(move |(i, c)| (i as i64 - n0, *c))
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.coeffs.iter().all(|c| c.is_finite()) {
            Ok(())
        } else {
            Err(Error::input("non-finite Fourier coefficient"))
        }
    }

    pub fn eval(&self, theta: f64) -> Complex64 {
        self.modes()
            .map(|(n, c)| c * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    /// Harmonic (Poisson) extension at `r e^{iθ}`; for `r > 1` this is the
    /// extension to the exterior, `Σ h_n r^{-|n|} e^{inθ}`.
    pub fn harmonic_extension(&self, r: f64, theta: f64) -> Complex64 {
        let rho = if r <= 1.0 { r } else { 1.0 / r };
        self.modes()
            .map(|(n, c)| c * rho.powi(n.unsigned_abs() as i32) * Complex64::from_polar(1.0, n as f64 * theta))
            .sum()
    }

    /// Samples of the harmonic extension on the circle of radius `r`.
    pub fn extension_samples(&self, r: f64, m: usize) -> Vec<Complex64> {
        let rho = if r <= 1.0 { r } else { 1.0 / r };
        let damped: Vec<Complex64> = self
            .modes()
            .map(|(n, c)| c * rho.powi(n.unsigned_abs() as i32))
            .collect();
        spectral::synthesize(&damped, self.order, m)
    }

    pub fn samples(&self, m: usize) -> Vec<Complex64> {
        spectral::synthesize(&self.coeffs, self.order, m)
    }

    /// Re-truncates to `order`, zero-filling new modes.
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zeros(order);
        for (n, c) in self.modes() {
            if n.unsigned_abs() as usize <= order {
                out.coeffs[(n + order as i64) as usize] = c;
            }
        }
        out
    }

    pub fn mean(&self) -> Complex64 {
        self.coeff(0)
    }

    /// The zero-mean part, an element of the space with average removed.
    pub fn zero_mean(&self) -> Self {
        let mut out = self.clone();
        out.coeffs[self.order] = zero();
        out
    }

    pub fn is_zero_mean(&self) -> bool {
        self.mean() == zero()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    /// Sum, truncated at the larger order.
    pub fn add(&self, other: &Self) -> Self {
        let order = self.order.max(other.order);
        let mut out = self.with_order(order);
        for (n, c) in other.modes() {
            out.coeffs[(n + order as i64) as usize] += c;
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn conj(&self) -> Self {
        let mut out = Self::zeros(self.order);
        for (n, c) in self.modes() {
            out.coeffs[(-n + self.order as i64) as usize] = c.conj();
        }
        out
    }
}

/// `sqrt(|h_0|² + Σ_{n≠0} |n| |h_n|²)`.
pub fn h12_norm(h: &FourierFunction) -> Result<f64> {
    h.check_finite()?;
    Ok(h
        .modes()
        .map(|(n, c)| if n == 0 { c.norm_sqr() } else { n.unsigned_abs() as f64 * c.norm_sqr() })
        .sum::<f64>()
        .sqrt())
}

/// Projection onto one side of the canonical decomposition.
pub fn project(h: &FourierFunction, side: Side) -> DiskSeries {
    let n = h.order as i64;
    let coeffs = match side {
        Side::Plus => (0..=n).map(|k| h.coeff(k)).collect(),
        Side::Minus => (1..=n).map(|k| h.coeff(-k)).collect(),
    };
    DiskSeries { side, order: h.order, coeffs }
}

/// Dirichlet energy divided by π: `Σ |n| |a_n|²`.
pub fn dirichlet_energy(s: &DiskSeries) -> f64 {
    s.modes().map(|(n, c)| n.unsigned_abs() as f64 * c.norm_sqr()).sum()
}

/// `(g, h) = (1/2π) ∫ g dh = i Σ_n n g_{-n} h_n`, with means removed first.
pub fn symplectic_pairing(g: &FourierFunction, h: &FourierFunction) -> Complex64 {
    let order = g.order.min(h.order) as i64;
    let s: Complex64 = (-order..=order)
        .filter(|&n| n != 0)
        .map(|n| g.coeff(-n) * h.coeff(n) * n as f64)
        .sum();
    Complex64::new(0.0, 1.0) * s
}

impl DiskSeries {
    pub fn new(side: Side, order: usize, modes: &[(i64, Complex64)]) -> Result<Self> {
        let len = match side {
            Side::Plus => order + 1,
            Side::Minus => order,
        };
        let mut coeffs = vec![zero(); len];
        for &(n, c) in modes {
            let idx = match side {
                Side::Plus if n >= 0 && n as usize <= order => n as usize,
                Side::Minus if n <= -1 && n.unsigned_abs() as usize <= order => (-n - 1) as usize,
                _ => {
                    return Err(Error::input(format!("mode {n} not allowed on {side:?} side of order {order}")))
                }
            };
            coeffs[idx] += c;
        }
        Ok(Self { side, order, coeffs })
    }

    pub fn zeros(side: Side, order: usize) -> Self {
        Self::new(side, order, &[]).expect("empty series is valid")
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn coeff(&self, n: i64) -> Complex64 {
        match self.side {
            Side::Plus if n >= 0 => self.coeffs.get(n as usize).copied().unwrap_or_else(zero),
            Side::Minus if n <= -1 => self.coeffs.get((-n - 1) as usize).copied().unwrap_or_else(zero),
            _ => zero(),
        }
    }

    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let side = self.side;
        self.coeffs.iter().enumerate().map(move |(i, c)| match side {
            Side::Plus => (i as i64, *c),
            Side::Minus => (-(i as i64) - 1, *c),
        })
    }

    /// Copy without the constant term (a no-op on the minus side).
    pub fn without_constant(&self) -> Self {
        let mut out = self.clone();
        if self.side == Side::Plus && !out.coeffs.is_empty() {
            out.coeffs[0] = zero();
        }
        out
    }

    /// The series as a function on the circle.
    pub fn to_fourier(&self) -> FourierFunction {
        let modes: Vec<(i64, Complex64)> = self.modes().collect();
        FourierFunction::from_modes(self.order, &modes).expect("modes within order")
    }

    /// Value at a point of the disk (plus side) or of its exterior (minus side).
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self.side {
            Side::Plus => crate::series::eval(&self.coeffs, z),
            Side::Minus => {
                let u = z.inv();
                crate::series::eval(&self.coeffs, u) * u
            }
        }
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self { side: self.side, order: self.order, coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.side != other.side {
            return Err(Error::input("cannot add series from opposite sides"));
        }
        let order = self.order.max(other.order);
        let modes: Vec<(i64, Complex64)> = self.modes().chain(other.modes()).collect();
        Self::new(self.side, order, &modes)
    }
}

#[derive(Serialize, Deserialize)]
struct CoeffTable {
    #[serde(rename = "N")]
    order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    side: Option<Side>,
    coeffs: Vec<(i64, f64, f64)>,
}

impl Serialize for FourierFunction {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffTable {
            order: self.order,
            side: None,
            coeffs: self.modes().map(|(n, c)| (n, c.re, c.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FourierFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = CoeffTable::deserialize(d)?;
        let modes: Vec<(i64, Complex64)> = t.coeffs.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))).collect();
        FourierFunction::from_modes(t.order, &modes).map_err(serde::de::Error::custom)
    }
}

impl Serialize for DiskSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoeffTable {
            order: self.order,
            side: Some(self.side),
            coeffs: self.modes().map(|(n, c)| (n, c.re, c.im)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DiskSeries {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let t = CoeffTable::deserialize(d)?;
        let modes: Vec<(i64, Complex64)> = t.coeffs.iter().map(|&(n, re, im)| (n, Complex64::new(re, im))).collect();
        let side = t.side.unwrap_or(if modes.iter().any(|&(n, _)| n < 0) { Side::Minus } else { Side::Plus });
        DiskSeries::new(side, t.order, &modes).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn h12_norm_examples() {
        let one = FourierFunction::from_modes(2, &[(0, c(1.0, 0.0))]).unwrap();
        assert_eq!(h12_norm(&one).unwrap(), 1.0);
        let e1 = FourierFunction::from_modes(2, &[(1, c(1.0, 0.0))]).unwrap();
        assert_eq!(h12_norm(&e1).unwrap(), 1.0);
        let h = FourierFunction::from_modes(2, &[(-2, c(3.0, 0.0))]).unwrap();
        assert_eq!(h12_norm(&h).unwrap(), 18f64.sqrt());
    }

    #[test]
    fn non_finite_rejected() {
        assert!(FourierFunction::from_modes(1, &[(1, c(f64::NAN, 0.0))]).is_err());
        assert!(FourierFunction::from_modes(1, &[(3, c(1.0, 0.0))]).is_err());
    }

    #[test]
    fn projection_examples() {
        let h = FourierFunction::from_modes(2, &[(1, c(1.0, 0.0)), (-1, c(1.0, 0.0))]).unwrap();
        assert_eq!(project(&h, Side::Plus).coeff(1), c(1.0, 0.0));
        assert_eq!(project(&h, Side::Plus).coeff(0), c(0.0, 0.0));
        assert_eq!(project(&h, Side::Minus).coeff(-1), c(1.0, 0.0));

        let five = FourierFunction::from_modes(2, &[(0, c(5.0, 0.0))]).unwrap();
        assert_eq!(project(&five, Side::Plus).coeff(0), c(5.0, 0.0));
        assert_eq!(dirichlet_energy(&project(&five, Side::Minus)), 0.0);

        let all: Vec<(i64, Complex64)> = (-2..=2).map(|n| (n, c(1.0, 0.0))).collect();
        let h = FourierFunction::from_modes(2, &all).unwrap();
        let back = project(&h, Side::Plus).to_fourier().add(&project(&h, Side::Minus).to_fourier());
        assert_eq!(back, h);
    }

    #[test]
    fn energy_examples() {
        assert_eq!(dirichlet_energy(&DiskSeries::new(Side::Plus, 3, &[(1, c(1.0, 0.0))]).unwrap()), 1.0);
        assert_eq!(dirichlet_energy(&DiskSeries::new(Side::Plus, 3, &[(0, c(4.0, 0.0))]).unwrap()), 0.0);
        assert_eq!(dirichlet_energy(&DiskSeries::new(Side::Minus, 3, &[(-2, c(1.0, 0.0))]).unwrap()), 2.0);
    }

    #[test]
    fn minus_side_rejects_constant() {
        assert!(DiskSeries::new(Side::Minus, 3, &[(0, c(1.0, 0.0))]).is_err());
    }

    /// Trapezoid rule for (1/2π) ∫ g h' dθ on a grid finer than the bandwidth.
    fn pairing_by_quadrature(g: &FourierFunction, h: &FourierFunction, m: usize) -> Complex64 {
        let mut acc = c(0.0, 0.0);
        for k in 0..m {
            let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let dh: Complex64 = h
                .modes()
                .map(|(n, hn)| hn * c(0.0, n as f64) * Complex64::from_polar(1.0, n as f64 * t))
                .sum();
            acc += g.eval(t) * dh;
        }
        acc / m as f64
    }

    #[test]
    fn pairing_examples_against_quadrature() {
        let e1 = FourierFunction::from_modes(1, &[(1, c(1.0, 0.0))]).unwrap();
        let em1 = FourierFunction::from_modes(1, &[(-1, c(1.0, 0.0))]).unwrap();
        let q = pairing_by_quadrature(&e1, &em1, 16);
        assert!((q - c(0.0, -1.0)).norm() < 1e-14);
        assert!((symplectic_pairing(&e1, &em1) - c(0.0, -1.0)).norm() < 1e-15);
        assert!((symplectic_pairing(&em1, &e1) - c(0.0, 1.0)).norm() < 1e-15);
        let g = FourierFunction::from_modes(2, &[(1, c(0.5, 0.0)), (-2, c(2.0, 0.0)), (2, c(-1.0, 0.0))]).unwrap();
        assert!(symplectic_pairing(&g, &g).norm() < 1e-15);
    }

    #[test]
    fn json_shape() {
        let h = FourierFunction::from_modes(1, &[(1, c(1.0, -2.0))]).unwrap();
        let v: serde_json::Value = serde_json::to_value(&h).unwrap();
        assert_eq!(v["N"], 1);
        assert_eq!(v["coeffs"][2], serde_json::json!([1, 1.0, -2.0]));
    }

    fn arb_fourier(order: usize) -> impl Strategy<Value = FourierFunction> {
        proptest::collection::vec((-10.0..10.0f64, -10.0..10.0f64), 2 * order + 1).prop_map(move |v| {
            FourierFunction::from_dense(order, v.into_iter().map(|(a, b)| c(a, b)).collect()).unwrap()
        })
    }

    proptest! {
        #[test]
        fn split_is_exact_and_energies_add(h in arb_fourier(6)) {
            let plus = project(&h, Side::Plus);
            let minus = project(&h, Side::Minus);
            prop_assert_eq!(plus.to_fourier().add(&minus.to_fourier()), h.clone());
            let n2 = h12_norm(&h).unwrap().powi(2);
            let parts = h.coeff(0).norm_sqr() + dirichlet_energy(&plus.without_constant()) + dirichlet_energy(&minus);
            prop_assert!((n2 - parts).abs() <= 1e-12 * n2.max(1.0));
        }

        #[test]
        fn pairing_antisymmetric_and_matches_quadrature(g in arb_fourier(4), h in arb_fourier(4)) {
            let gh = symplectic_pairing(&g, &h);
            let hg = symplectic_pairing(&h, &g);
            prop_assert!((gh + hg).norm() <= 1e-12 * (1.0 + gh.norm()));
            let q = pairing_by_quadrature(&g.zero_mean(), &h.zero_mean(), 16);
            prop_assert!((gh - q).norm() <= 1e-10 * (1.0 + gh.norm()));
        }

        #[test]
        fn json_round_trip_exact(h in arb_fourier(3)) {
            let s = serde_json::to_string(&h).unwrap();
            let back: FourierFunction = serde_json::from_str(&s).unwrap();
            prop_assert_eq!(back, h.clone());
            let d = project(&h, Side::Minus);
            let back: DiskSeries = serde_json::from_str(&serde_json::to_string(&d).unwrap()).unwrap();
            prop_assert_eq!(back, d);
        }
    }
}
