//! Dense complex linear algebra on top of `nalgebra`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Singular values in decreasing order.
pub fn singular_values(m: &CMat) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    s
}

pub fn op_norm(m: &CMat) -> f64 {
    singular_values(m).first().copied().unwrap_or(0.0)
}

pub fn frobenius(m: &CMat) -> f64 {
    m.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

pub fn condition_number(m: &CMat) -> f64 {
    let s = singular_values(m);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 => hi / lo,
        (Some(_), Some(_)) => f64::INFINITY,
        _ => 1.0,
    }
}

/// Least-squares solution of `a x ≈ b` through the SVD, with the condition
/// number of `a`. Fails when the condition number exceeds `max_cond`.
pub fn lstsq(a: &CMat, b: &CVec, max_cond: f64) -> Result<(CVec, f64)> {
    let svd = a.clone().svd(true, true);
    let s = &svd.singular_values;
    let hi = s.iter().copied().fold(0.0, f64::max);
    let lo = s.iter().copied().fold(f64::INFINITY, f64::min);
    let cond = if lo > 0.0 { hi / lo } else { f64::INFINITY };
    if cond > max_cond {
        return Err(Error::resolution(format!(
            "least-squares basis is ill-conditioned (condition number {cond:e})"
        )));
    }
    let x = svd
        .solve(b, 0.0)
        .map_err(|e| Error::resolution(format!("least-squares solve failed: {e}")))?;
    Ok((x, cond))
}

/// [`lstsq`] after scaling the columns of `a` to unit norm; the condition
/// number refers to the scaled matrix.
pub fn lstsq_scaled(mut a: CMat, b: &CVec, max_cond: f64) -> Result<(CVec, f64)> {
    let scales: Vec<f64> = a.column_iter().map(|c| c.norm()).collect();
    for (j, &s) in scales.iter().enumerate() {
        if s == 0.0 {
            return Err(Error::resolution("zero basis column in least-squares fit"));
        }
        a.column_mut(j).unscale_mut(s);
    }
    let (mut x, cond) = lstsq(&a, b, max_cond)?;
    for (j, &s) in scales.iter().enumerate() {
        x[j] /= s;
    }
    Ok((x, cond))
}

pub fn solve(a: &CMat, b: &CMat) -> Result<CMat> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::input("singular linear system"))
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn conj(m: &CMat) -> CMat {
    m.map(|x| x.conj())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn svd_of_diagonal() {
        let m = CMat::from_diagonal(&CVec::from_vec(vec![
            Complex64::new(0.0, 3.0),
            Complex64::new(1.0, 0.0),
        ]));
        assert_eq!(singular_values(&m), vec![3.0, 1.0]);
        assert!((condition_number(&m) - 3.0).abs() < 1e-14);
    }
}
