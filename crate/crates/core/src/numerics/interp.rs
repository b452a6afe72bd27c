//! Local polynomial interpolation on non-uniform 1D nodes.

/// Index of the first node of the `width`-node window centered around `x`.
pub fn window_start(nodes: &[f64], x: f64, width: usize) -> usize {
    let n = nodes.len();
    debug_assert!(width <= n);
    let k = nodes.partition_point(|&r| r < x);
    let half = width / 2;
    k.saturating_sub(half).min(n - width)
}

/// Lagrange interpolation of `values` at `x` using a local window of
/// `width` nodes (4 for cubic accuracy).
pub fn lagrange_local(nodes: &[f64], values: &[f64], x: f64, width: usize) -> f64 {
    let s = window_start(nodes, x, width);
    let xs = &nodes[s..s + width];
    let ys = &values[s..s + width];
    let mut acc = 0.0;
    for i in 0..width {
        let mut l = 1.0;
        for j in 0..width {
            if i != j {
                l *= (x - xs[j]) / (xs[i] - xs[j]);
            }
        }
        acc += l * ys[i];
    }
    acc
}

/// Derivative of the local Lagrange interpolant at `x`.
pub fn lagrange_local_deriv(nodes: &[f64], values: &[f64], x: f64, width: usize) -> f64 {
    let s = window_start(nodes, x, width);
    let xs = &nodes[s..s + width];
    let ys = &values[s..s + width];
    let mut acc = 0.0;
    for i in 0..width {
        let mut dl = 0.0;
        for k in 0..width {
            if k == i {
                continue;
            }
            let mut term = 1.0 / (xs[i] - xs[k]);
            for j in 0..width {
                if j != i && j != k {
                    term *= (x - xs[j]) / (xs[i] - xs[j]);
                }
            }
            dl += term;
        }
        acc += dl * ys[i];
    }
    acc
}

/// Weights of the one-sided finite-difference approximation to `u'(x0)`
/// from values at `pts` (Fornberg-style via Lagrange differentiation).
pub fn derivative_weights(pts: &[f64], x0: f64) -> Vec<f64> {
    let n = pts.len();
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut dl = 0.0;
        for k in 0..n {
            if k == i {
                continue;
            }
            let mut term = 1.0 / (pts[i] - pts[k]);
            for j in 0..n {
                if j != i && j != k {
                    term *= (x0 - pts[j]) / (pts[i] - pts[j]);
                }
            }
            dl += term;
        }
        w[i] = dl;
    }
    w
}
