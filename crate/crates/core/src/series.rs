//! Truncated power series in one variable, stored as coefficient vectors
//! `s[k]` of `z^k`. All operations truncate to an explicit length.

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Series = Vec<Complex64>;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn coeff(s: &[Complex64], k: usize) -> Complex64 {
    s.get(k).copied().unwrap_or_else(zero)
}

/// Zero-pads or truncates to `len` coefficients.
pub fn resize(s: &[Complex64], len: usize) -> Series {
    (0..len).map(|k| coeff(s, k)).collect()
}

pub fn add(a: &[Complex64], b: &[Complex64]) -> Series {
    let len = a.len().max(b.len());
    (0..len).map(|k| coeff(a, k) + coeff(b, k)).collect()
}

pub fn scale(a: &[Complex64], s: Complex64) -> Series {
    a.iter().map(|x| x * s).collect()
}

pub fn mul(a: &[Complex64], b: &[Complex64], len: usize) -> Series {
    let mut out = vec![zero(); len];
    for (i, ai) in a.iter().enumerate().take(len) {
        if *ai == zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Reciprocal `1/a` truncated to `len` terms; requires `a[0] != 0`.
pub fn recip(a: &[Complex64], len: usize) -> Result<Series> {
    let a0 = coeff(a, 0);
    if a0.norm() < 1e-300 || !a0.is_finite() {
        return Err(Error::input("series reciprocal needs a nonzero constant term"));
    }
    let mut out = vec![zero(); len];
    if len == 0 {
        return Ok(out);
    }
    out[0] = a0.inv();
    for n in 1..len {
        let mut acc = zero();
        for k in 1..=n.min(a.len().saturating_sub(1)) {
            acc += a[k] * out[n - k];
        }
        out[n] = -acc * out[0];
    }
    Ok(out)
}

pub fn div(a: &[Complex64], b: &[Complex64], len: usize) -> Result<Series> {
    Ok(mul(a, &recip(b, len)?, len))
}

pub fn deriv(a: &[Complex64]) -> Series {
    a.iter()
        .enumerate()
        .skip(1)
        .map(|(k, x)| x * k as f64)
        .collect()
}

/// Principal-branch logarithm, `log a0 + log(a / a0)`.
pub fn log(a: &[Complex64], len: usize) -> Result<Series> {
    let a0 = coeff(a, 0);
    if a0.norm() < 1e-300 {
        return Err(Error::input("series logarithm needs a nonzero constant term"));
    }
    // (log a)' = a' / a
    let q = div(&deriv(a), a, len.saturating_sub(1))?;
    let mut out = vec![zero(); len];
    if len > 0 {
        out[0] = a0.ln();
    }
    for k in 1..len {
        out[k] = q[k - 1] / k as f64;
    }
    Ok(out)
}

pub fn powi(a: &[Complex64], n: usize, len: usize) -> Series {
    let mut out = vec![zero(); len];
    if len == 0 {
        return out;
    }
    out[0] = Complex64::new(1.0, 0.0);
    let mut base = resize(a, len);
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            out = mul(&out, &base, len);
        }
        e >>= 1;
        if e > 0 {
            base = mul(&base, &base, len);
        }
    }
    out
}

/// `outer(inner(z))` for `inner[0] == 0`, by Horner's scheme.
pub fn compose(outer: &[Complex64], inner: &[Complex64], len: usize) -> Result<Series> {
    if coeff(inner, 0).norm() > 0.0 {
        return Err(Error::input("inner series of a composition must vanish at 0"));
    }
    let mut out = vec![zero(); len];
    for c in outer.iter().rev() {
        out = mul(&out, inner, len);
        if len > 0 {
            out[0] += c;
        }
    }
    Ok(out)
}

/// Compositional inverse of `f` with `f(0) = 0`, `f'(0) != 0`, by
/// Newton iteration on series (doubling precision each step).
pub fn revert(f: &[Complex64], len: usize) -> Result<Series> {
    if coeff(f, 0).norm() > 0.0 {
        return Err(Error::input("series reversion needs f(0) = 0"));
    }
    let a1 = coeff(f, 1);
    if a1.norm() < 1e-300 {
        return Err(Error::input("series reversion needs f'(0) != 0"));
    }
    let mut g = vec![zero(); len];
    if len < 2 {
        return Ok(g);
    }
    g[1] = a1.inv();
    let df = deriv(f);
    let mut prec = 2;
    while prec < len {
        prec = (2 * prec).min(len);
        // g <- g - (f(g) - z) / f'(g)
        let gp = resize(&g, prec);
        let mut fg = compose(f, &gp, prec)?;
        fg[1] -= Complex64::new(1.0, 0.0);
        let dfg = compose(&df, &gp, prec)?;
        let corr = div(&fg, &dfg, prec)?;
        for k in 0..prec {
            g[k] = gp[k] - corr[k];
        }
    }
    Ok(g)
}

pub fn eval(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter().rev().fold(zero(), |acc, c| acc * z + c)
}

pub fn eval_deriv(a: &[Complex64], z: Complex64) -> Complex64 {
    a.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(zero(), |acc, (k, c)| acc * z + c * k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn geometric_reciprocal() {
        let r = recip(&[c(1.0), c(-0.5)], 6).unwrap();
        for (k, x) in r.iter().enumerate() {
            assert!((x - c(0.5f64.powi(k as i32))).norm() < 1e-15);
        }
    }

    #[test]
    fn log_of_one_plus_z() {
        let l = log(&[c(1.0), c(1.0)], 6).unwrap();
        for k in 1..6 {
            let expect = if k % 2 == 1 { 1.0 } else { -1.0 } / k as f64;
            assert!((l[k] - c(expect)).norm() < 1e-15);
        }
    }

    #[test]
    fn reversion_of_koebe_like_map() {
        // z/(1 - tz) has inverse w/(1 + tw)
        let t: f64 = 0.3;
        let f: Series = (0..12).map(|k| if k == 0 { c(0.0) } else { c(t.powi(k - 1)) }).collect();
        let g = revert(&f, 12).unwrap();
        for k in 1..12 {
            let expect = (-t).powi(k as i32 - 1);
            assert!((g[k] - c(expect)).norm() < 1e-13, "k={k}");
        }
    }

    #[test]
    fn reciprocal_of_zero_constant_fails() {
        assert!(recip(&[c(0.0), c(1.0)], 4).is_err());
    }

    #[test]
    fn powers_match_repeated_products() {
        let a = vec![c(1.0), c(0.2), c(-0.1)];
        let p3 = powi(&a, 3, 7);
        let direct = mul(&mul(&a, &a, 7), &a, 7);
        for k in 0..7 {
            assert!((p3[k] - direct[k]).norm() < 1e-15);
        }
    }
}
