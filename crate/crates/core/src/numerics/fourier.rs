//! Thin wrappers around `rustfft` for periodic data on equispaced nodes.

use num_complex::Complex64;
use rustfft::FftPlanner;
use std::f64::consts::PI;

use super::signed_mode;

/// Forward DFT with the `1/M` normalization, so the output slots are the
/// Fourier coefficients `c_m = (1/M) Σ_i f(θ_i) e^{-i m θ_i}`.
pub fn dft_coefficients(values: &[Complex64]) -> Vec<Complex64> {
    let m = values.len();
    let mut buf = values.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_forward(m).process(&mut buf);
    let scale = 1.0 / m as f64;
    for c in &mut buf {
        *c *= scale;
    }
    buf
}

/// Inverse of [`dft_coefficients`]: reconstruct nodal values from coefficients.
pub fn dft_values(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut buf = coeffs.to_vec();
    let mut planner = FftPlanner::new();
    planner.plan_fft_inverse(buf.len()).process(&mut buf);
    buf
}

/// Fourier coefficients of real periodic samples.
pub fn dft_coefficients_real(values: &[f64]) -> Vec<Complex64> {
    let buf: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    dft_coefficients(&buf)
}

/// Spectral derivative of real periodic samples on `[0, 2π)`.
///
/// The Nyquist mode is dropped (its derivative is not representable on the
/// real grid), which is the usual convention for even sample counts.
pub fn spectral_derivative(values: &[f64], order: u32) -> Vec<f64> {
    let m = values.len();
    let mut coeffs = dft_coefficients_real(values);
    for (i, c) in coeffs.iter_mut().enumerate() {
        let k = signed_mode(i, m);
        if 2 * (i as i64) == m as i64 {
            *c = Complex64::new(0.0, 0.0);
            continue;
        }
        let ik = Complex64::new(0.0, k as f64);
        *c *= ik.powu(order);
    }
    dft_values(&coeffs).iter().map(|c| c.re).collect()
}

/// Trigonometric interpolation of real periodic samples at angle `theta`.
pub fn trig_interpolate(coeffs: &[Complex64], theta: f64) -> f64 {
    let m = coeffs.len();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, &c) in coeffs.iter().enumerate() {
        let k = signed_mode(i, m) as f64;
        acc += c * Complex64::new(0.0, k * theta).exp();
    }
    acc.re
}

/// Conjugate periodic function (harmonic conjugate on the unit circle).
///
/// For `u = Σ û_m e^{imθ}` returns `v = Σ (-i sign m) û_m e^{imθ}` with zero
/// mean, computed by FFT. This is the boundary correspondence kernel of
/// Theodorsen's method.
pub fn conjugate_function(values: &[f64]) -> Vec<f64> {
    let m = values.len();
    let mut coeffs = dft_coefficients_real(values);
    for (i, c) in coeffs.iter_mut().enumerate() {
        let k = signed_mode(i, m);
        *c *= match k.cmp(&0) {
            std::cmp::Ordering::Greater => Complex64::new(0.0, -1.0),
            std::cmp::Ordering::Less => Complex64::new(0.0, 1.0),
            std::cmp::Ordering::Equal => Complex64::new(0.0, 0.0),
        };
    }
    dft_values(&coeffs).iter().map(|c| c.re).collect()
}

/// Equispaced angles `θ_i = 2πi/m`.
pub fn angles(m: usize) -> Vec<f64> {
    (0..m).map(|i| 2.0 * PI * i as f64 / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_cosine() {
        let m = 64;
        let th = angles(m);
        let vals: Vec<f64> = th.iter().map(|&t| (3.0 * t).cos()).collect();
        let d = spectral_derivative(&vals, 1);
        for (i, &t) in th.iter().enumerate() {
            assert!((d[i] + 3.0 * (3.0 * t).sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn conjugate_of_cos_is_sin() {
        let m = 32;
        let th = angles(m);
        let vals: Vec<f64> = th.iter().map(|&t| (2.0 * t).cos()).collect();
        let v = conjugate_function(&vals);
        for (i, &t) in th.iter().enumerate() {
            assert!((v[i] - (2.0 * t).sin()).abs() < 1e-12);
        }
    }

    #[test]
    fn round_trip() {
        let m = 16;
        let vals: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new(i as f64, (i * i) as f64))
            .collect();
        let back = dft_values(&dft_coefficients(&vals));
        for (a, b) in vals.iter().zip(back.iter()) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
