//! Discrete Fourier helpers on the uniform circle grid `θ_k = 2πk/M`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

pub fn grid(m: usize) -> Vec<f64> {
    (0..m).map(|k| 2.0 * PI * k as f64 / m as f64).collect()
}

/// Forward transform normalized by `1/M`: `out[j] = (1/M) Σ_k v_k e^{-2πijk/M}`.
pub fn analyze(samples: &[Complex64]) -> Vec<Complex64> {
    let m = samples.len();
    let mut buf = samples.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let inv = 1.0 / m as f64;
    buf.iter_mut().for_each(|x| *x *= inv);
    buf
}

/// Fourier coefficient of mode `n` (any sign) from the normalized spectrum.
pub fn mode(spectrum: &[Complex64], n: i64) -> Complex64 {
    let m = spectrum.len() as i64;
    spectrum[n.rem_euclid(m) as usize]
}

/// Modes `-order..=order` of a sampled function, as a vector indexed `n + order`.
pub fn modes(samples: &[Complex64], order: usize) -> Vec<Complex64> {
    assert!(2 * order < samples.len(), "grid too coarse for requested modes");
    let spec = analyze(samples);
    (-(order as i64)..=order as i64).map(|n| mode(&spec, n)).collect()
}

/// Samples of `Σ_{|n|≤order} c_{n+order} e^{inθ}` on an `m`-point grid.
pub fn synthesize(coeffs: &[Complex64], order: usize, m: usize) -> Vec<Complex64> {
    assert!(2 * order < m, "grid too coarse for requested modes");
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    for (idx, c) in coeffs.iter().enumerate() {
        let n = idx as i64 - order as i64;
        buf[n.rem_euclid(m as i64) as usize] += c;
    }
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(m).process(&mut buf);
    buf
}

pub fn next_pow2(n: usize) -> usize {
    n.max(1).next_power_of_two()
}
