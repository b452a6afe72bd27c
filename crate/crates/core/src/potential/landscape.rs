//! Landscape extraction: locate the unique minimum of the potential,
//! refine it by local quadratic fits and recover the Hessian there.

use nalgebra::Matrix2;

use super::FluxPotential;
use crate::error::{Error, Result};
use crate::numerics::fit::quadratic_surface;

#[derive(Debug, Clone)]
pub struct Landscape {
    pub y_min: [f64; 2],
    pub phi_min: f64,
    pub hessian_disk: Matrix2<f64>,
}

/// Locate the minimum of the disk-picture potential: grid argmin, a
/// uniqueness scan over grid-local minima, then Newton refinement on local
/// quadratic fits with Richardson extrapolation of the Hessian.
pub fn extract(potential: &FluxPotential) -> Result<Landscape> {
    let nr = potential.radial_nodes.len();
    let m = potential.theta_count;

    // Grid argmin.
    let mut min_val = f64::INFINITY;
    let mut argmin = (0usize, 0usize);
    for j in 0..nr {
        for i in 0..m {
            let v = potential.value(j, i);
            if v < min_val {
                min_val = v;
                argmin = (j, i);
            }
        }
    }
    if min_val >= 0.0 {
        return Err(Error::Landscape(
            "potential is nonnegative inside the domain; expected a negative minimum".into(),
        ));
    }

    let node_pos = |j: usize, i: usize| -> [f64; 2] {
        let r = potential.radial_nodes[j];
        let th = 2.0 * std::f64::consts::PI * i as f64 / m as f64;
        [r * th.cos(), r * th.sin()]
    };
    let p_min = node_pos(argmin.0, argmin.1);

    // Uniqueness: every grid-local minimum nearly as deep as the global one
    // must belong to the same cluster.
    let spacing = potential.radial_nodes[1] - potential.radial_nodes[0];
    let separation = (8.0 * spacing).max(0.12);
    for j in 0..nr {
        for i in 0..m {
            let v = potential.value(j, i);
            if v > 0.99 * min_val {
                continue;
            }
            let inner = if j == 0 {
                potential.value(0, (i + m / 2) % m)
            } else {
                potential.value(j - 1, i)
            };
            let outer = if j + 1 < nr { potential.value(j + 1, i) } else { 0.0 };
            let left = potential.value(j, (i + m - 1) % m);
            let right = potential.value(j, (i + 1) % m);
            if v <= inner && v <= outer && v <= left && v <= right {
                let p = node_pos(j, i);
                let d = (p[0] - p_min[0]).hypot(p[1] - p_min[1]);
                if d > separation {
                    return Err(Error::Landscape(format!(
                        "second local minimum {v:.6e} at distance {d:.3} from the global one; \
                         minimum uniqueness violated at this resolution"
                    )));
                }
            }
        }
    }

    // Stage 1: quadratic surface through nearby grid nodes.
    let mut rho_fit = (6.0 * spacing).max(0.04);
    let mut y = p_min;
    for attempt in 0..3 {
        let mut pts = Vec::new();
        let mut vals = Vec::new();
        for j in 0..nr {
            if (potential.radial_nodes[j] - potential.radial_nodes[argmin.0]).abs() > rho_fit {
                continue;
            }
            for i in 0..m {
                let p = node_pos(j, i);
                if (p[0] - p_min[0]).hypot(p[1] - p_min[1]) <= rho_fit {
                    pts.push(p);
                    vals.push(potential.value(j, i));
                }
            }
        }
        if pts.len() < 8 {
            rho_fit *= 1.8;
            continue;
        }
        let c = quadratic_surface(&pts, &vals);
        let h = Matrix2::new(2.0 * c[3], c[4], c[4], 2.0 * c[5]);
        let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
        if det <= 0.0 || h[(0, 0)] <= 0.0 {
            if attempt == 2 {
                return Err(Error::Landscape(
                    "quadratic fit around the minimum is not positive definite; \
                     minimum non-degeneracy violated at this resolution"
                        .into(),
                ));
            }
            rho_fit *= 1.5;
            continue;
        }
        // Paraboloid minimum.
        let gx = c[1];
        let gy = c[2];
        y = [
            -(h[(1, 1)] * gx - h[(0, 1)] * gy) / det,
            -(h[(0, 0)] * gy - h[(0, 1)] * gx) / det,
        ];
        break;
    }

    // Stage 2: Newton on small-stencil quadratic fits of the evaluator.
    let delta = if potential.radial.is_some() {
        (2.0 * f64::EPSILON.sqrt()).sqrt()
    } else {
        (3.0 * spacing).max(5e-3)
    };
    let fit_at = |center: [f64; 2], d: f64| -> ([f64; 2], Matrix2<f64>, f64) {
        let mut pts = Vec::with_capacity(9);
        let mut vals = Vec::with_capacity(9);
        for a in -1..=1 {
            for b in -1..=1 {
                let p = [center[0] + d * a as f64, center[1] + d * b as f64];
                pts.push([p[0] - center[0], p[1] - center[1]]);
                let r = p[0].hypot(p[1]);
                let th = p[1].atan2(p[0]);
                vals.push(potential.eval_disk(r, th));
            }
        }
        let c = quadratic_surface(&pts, &vals);
        (
            [c[1], c[2]],
            Matrix2::new(2.0 * c[3], c[4], c[4], 2.0 * c[5]),
            c[0],
        )
    };

    let mut hessian = Matrix2::zeros();
    for step in 0..6 {
        let (g, h, _) = fit_at(y, delta);
        let (g2, h2, _) = fit_at(y, 2.0 * delta);
        // Richardson: leading O(δ²) fit bias cancels.
        let hr = (4.0 * h - h2) / 3.0;
        let gr = [
            (4.0 * g[0] - g2[0]) / 3.0,
            (4.0 * g[1] - g2[1]) / 3.0,
        ];
        let det = hr[(0, 0)] * hr[(1, 1)] - hr[(0, 1)] * hr[(1, 0)];
        if det <= 0.0 || hr[(0, 0)] <= 0.0 {
            return Err(Error::Landscape(
                "refined Hessian is not positive definite; minimum non-degeneracy violated"
                    .into(),
            ));
        }
        let dx = [
            (hr[(1, 1)] * gr[0] - hr[(0, 1)] * gr[1]) / det,
            (hr[(0, 0)] * gr[1] - hr[(0, 1)] * gr[0]) / det,
        ];
        y = [y[0] - dx[0], y[1] - dx[1]];
        hessian = hr;
        if dx[0].hypot(dx[1]) < 1e-12 && step >= 2 {
            break;
        }
    }
    let r = y[0].hypot(y[1]);
    let phi_min = potential.eval_disk(r, y[1].atan2(y[0]));

    Ok(Landscape {
        y_min: y,
        phi_min,
        hessian_disk: hessian,
    })
}

/// Physical-coordinates landscape of a solved potential.
pub fn landscape(potential: &FluxPotential) -> Result<([f64; 2], f64, Matrix2<f64>)> {
    let l = extract(potential)?;
    let (x_min, hess) = to_physical(potential, &l);
    Ok((x_min, l.phi_min, hess))
}

/// Transform disk-picture minimum data through the conformal map.
pub(super) fn to_physical(
    potential: &FluxPotential,
    l: &Landscape,
) -> ([f64; 2], Matrix2<f64>) {
    let y = num_complex::Complex64::new(l.y_min[0], l.y_min[1]);
    let fz = potential.map.eval(y);
    let fp = potential.map.deriv(y);
    let (a, b) = (fp.re, fp.im);
    let rho2 = a * a + b * b;
    // J⁻¹ for the real Jacobian of a holomorphic map, then H_x = J⁻ᵀ H_y J⁻¹.
    let jinv = Matrix2::new(a / rho2, b / rho2, -b / rho2, a / rho2);
    let hx = jinv.transpose() * l.hessian_disk * jinv;
    ([fz.re, fz.im], hx)
}
