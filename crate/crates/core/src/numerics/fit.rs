//! Small least-squares fitting helpers used by landscape extraction,
//! refinement-order studies and sweep extrapolation.

use nalgebra::{DMatrix, DVector};

/// Least-squares solution of `A x = b` via SVD (column-regular systems).
pub fn least_squares(a: &DMatrix<f64>, b: &DVector<f64>) -> DVector<f64> {
    a.clone()
        .svd(true, true)
        .solve(b, 1e-13 * a.amax().max(1.0))
        .expect("SVD solve")
}

/// Observed convergence order from errors at mesh parameters `(n, 2n)`:
/// `log2(err_coarse / err_fine)`.
pub fn observed_order(err_coarse: f64, err_fine: f64) -> f64 {
    (err_coarse / err_fine).log2()
}

/// Richardson extrapolation from values at resolutions `n` and `2n`
/// assuming error `~ C n^{-p}`.
pub fn richardson(coarse: f64, fine: f64, p: f64) -> f64 {
    let f = 2f64.powf(p);
    (f * fine - coarse) / (f - 1.0)
}

/// Fit `y ≈ a + b √h` on the provided points and return `a`
/// (sweep extrapolation of normalized eigenvalues).
pub fn extrapolate_sqrt(hs: &[f64], ys: &[f64]) -> f64 {
    assert!(hs.len() == ys.len() && hs.len() >= 2);
    let a = DMatrix::from_fn(hs.len(), 2, |i, j| if j == 0 { 1.0 } else { hs[i].sqrt() });
    let b = DVector::from_column_slice(ys);
    least_squares(&a, &b)[0]
}

/// Fit `y ≈ a + b h` and return `a`: Richardson-style elimination of a
/// leading correction linear in `h`.
pub fn extrapolate_linear(hs: &[f64], ys: &[f64]) -> f64 {
    assert!(hs.len() == ys.len() && hs.len() >= 2);
    let a = DMatrix::from_fn(hs.len(), 2, |i, j| if j == 0 { 1.0 } else { hs[i] });
    let b = DVector::from_column_slice(ys);
    least_squares(&a, &b)[0]
}

/// Full quadratic surface fit `q(x) = c0 + c1 x1 + c2 x2 + c3 x1² + c4 x1 x2
/// + c5 x2²` through scattered samples; returns the six coefficients.
pub fn quadratic_surface(points: &[[f64; 2]], values: &[f64]) -> [f64; 6] {
    assert!(points.len() >= 6);
    let a = DMatrix::from_fn(points.len(), 6, |i, j| {
        let [x, y] = points[i];
        match j {
            0 => 1.0,
            1 => x,
            2 => y,
            3 => x * x,
            4 => x * y,
            _ => y * y,
        }
    });
    let b = DVector::from_column_slice(values);
    let c = least_squares(&a, &b);
    [c[0], c[1], c[2], c[3], c[4], c[5]]
}
