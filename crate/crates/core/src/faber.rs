//! Faber-type polynomials of a normalized interior map and bivariate log
//! kernels.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::{self, Series};
use crate::welding::{MapKind, PowerSeriesMap};

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Coefficients of `Ψ_n`, `n = 1..=n_max`: the principal part at `F(0)` of
/// `(F⁻¹(ζ))^{-n}`, written as a polynomial in `u = 1/(ζ - F(0))` without
/// constant term. Entry `[n-1][k-1]` is the coefficient of `u^k`.
///
/// `Ψ_n(1/(F(z)-F(0))) = z^{-n} + O(1)`, so `Ψ_n` is `I_F q_n` up to the
/// weight `√n`.
pub fn inverse_faber(f: &PowerSeriesMap, n_max: usize) -> Result<Vec<Series>> {
    if f.kind() != MapKind::DiskPlus {
        return Err(Error::input("Faber polynomials need an interior map"));
    }
    let mut a = f.taylor().to_vec();
    a.resize(n_max + 2, zero());
    a[0] = zero();
    let g = series::revert(&a, n_max + 1)?;
    // g(ζ)/ζ, invertible since g'(0) = 1/a_1
    let q: Series = g[1..].to_vec();
    let qinv = series::recip(&q, n_max + 1)?;
    let mut out = Vec::with_capacity(n_max);
    let mut pow = vec![Complex64::new(1.0, 0.0)];
    for n in 1..=n_max {
        pow = series::mul(&pow, &qinv, n_max + 1);
        // ζ^{-n} Σ_j s_j ζ^j: principal part is Σ_{j<n} s_j u^{n-j}
        let mut psi = vec![zero(); n];
        for j in 0..n {
            psi[n - j - 1] = pow[j];
        }
        out.push(psi);
    }
    Ok(out)
}

/// Evaluates `Σ_k c_k u^k` (no constant term) at `u`.
pub fn eval_principal(coeffs: &[Complex64], u: Complex64) -> Complex64 {
    series::eval(coeffs, u) * u
}

/// Bivariate series stored as rows in `z`, each row a series in `w`.
pub type Bivariate = Vec<Series>;

/// Mixed coefficients `c_{mn}`, `1 ≤ m, n ≤ order`, of `log Q(z, w)` where
/// `Q = Σ_i z^i q_i(w)` and `∂_z Q = Σ_i z^i p_i(w)`; `q_0(0)` must be
/// nonzero. Uses `∂_z log Q = ∂_z Q / Q` row by row.
fn log_mixed(q: &Bivariate, p: &Bivariate, order: usize) -> Result<Vec<Series>> {
    let len = order + 1;
    let row = |b: &Bivariate, i: usize| -> Series { b.get(i).map_or_else(|| vec![zero(); len], |r| series::resize(r, len)) };
    let q0inv = series::recip(&row(q, 0), len).map_err(|_| Error::input("log kernel has a zero constant term"))?;
    let mut d: Vec<Series> = Vec::with_capacity(order);
    for i in 0..order {
        let mut acc = row(p, i);
        for j in 1..=i {
            let t = series::mul(&row(q, j), &d[i - j], len);
            for (x, y) in acc.iter_mut().zip(t) {
                *x -= y;
            }
        }
        d.push(series::mul(&acc, &q0inv, len));
    }
    // log Q = log q_0(w) + Σ_{m≥1} z^m d_{m-1}(w)/m
    Ok((1..=order)
        .map(|m| (1..=order).map(|n| d[m - 1][n] / m as f64).collect())
        .collect())
}

/// Mixed coefficients of `log((F(z) - F(w))/(z - w))`, indexed `[m-1][n-1]`.
pub fn bivariate_log(f: &PowerSeriesMap, order: usize) -> Result<Vec<Series>> {
    if f.kind() != MapKind::DiskPlus {
        return Err(Error::input("log kernel needs an interior map"));
    }
    let a = series::resize(f.taylor(), 2 * order + 2);
    if a[1].norm() == 0.0 {
        return Err(Error::input("a_1 = 0: log kernel undefined"));
    }
    // (z^k - w^k)/(z - w) = Σ_{i+j=k-1} z^i w^j
    let len = order + 1;
    let mut q: Bivariate = vec![vec![zero(); len]; len + 1];
    for (k, &ak) in a.iter().enumerate().skip(1) {
        for i in 0..k {
            let j = k - 1 - i;
            if i <= len && j < len {
                q[i][j] += ak;
            }
        }
    }
    let p: Bivariate = (0..len).map(|i| q[i + 1].iter().map(|c| c * (i as f64 + 1.0)).collect()).collect();
    log_mixed(&q, &p, order)
}

/// Mixed coefficients of `log(f(z) - g(w))` for maps centered at distinct
/// points `f(0) ≠ g(0)`.
pub fn bivariate_log_pair(f: &PowerSeriesMap, g: &PowerSeriesMap, order: usize) -> Result<Vec<Series>> {
    if f.kind() != MapKind::DiskPlus || g.kind() != MapKind::DiskPlus {
        return Err(Error::input("log kernel needs interior maps"));
    }
    let len = order + 1;
    let fa = series::resize(f.taylor(), len + 1);
    let ga = series::resize(g.taylor(), len);
    if (fa[0] - ga[0]).norm() == 0.0 {
        return Err(Error::input("maps share a center: log(f(z) - g(w)) is singular"));
    }
    let mut q: Bivariate = vec![vec![zero(); len]; len + 1];
    q[0] = ga.iter().map(|c| -c).collect();
    q[0][0] += fa[0];
    for i in 1..=len {
        q[i][0] = fa[i];
    }
    let p: Bivariate = (0..len)
        .map(|i| {
            let mut r = vec![zero(); len];
            r[0] = fa[i + 1] * (i as f64 + 1.0);
            r
        })
        .collect();
    log_mixed(&q, &p, order)
}
