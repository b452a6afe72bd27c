//! Polar grid solver for the pulled-back gauge Poisson problem
//! `Δφ̌ = |F'|² B∘F` on the unit disk: spectral in the angle, second-order
//! finite differences in the radius, parity conditions through the origin.

use num_complex::Complex64;

use super::landscape;
use super::{FluxPotential, MagneticField};
use crate::error::{Error, Result};
use crate::geometry::{build_conformal_map, ConformalMap, DomainSpec};
use crate::numerics::fourier;
use crate::numerics::grid::RadialGrid;
use crate::numerics::interp::derivative_weights;
use crate::numerics::signed_mode;

/// Non-uniform 3-point stencil coefficients for `(u'', u')` at the middle
/// node in terms of `(u_-, u_0, u_+)`.
pub(crate) fn three_point(hm: f64, hp: f64) -> ([f64; 3], [f64; 3]) {
    let den = hm * hp * (hm + hp);
    (
        [
            2.0 * hp / den,
            -2.0 * (hm + hp) / den,
            2.0 * hm / den,
        ],
        [
            -hp * hp / den,
            (hp * hp - hm * hm) / den,
            hm * hm / den,
        ],
    )
}

/// Complex tridiagonal solve with partial pivoting.
fn solve_tridiag(
    sub: &[Complex64],
    diag: &[Complex64],
    sup: &[Complex64],
    rhs: &[Complex64],
) -> Result<Vec<Complex64>> {
    let n = diag.len();
    let mut a = sub.to_vec(); // a[i] multiplies x[i] in row i+1
    let mut b = diag.to_vec();
    let mut c = sup.to_vec(); // c[i] multiplies x[i+1] in row i
    let mut d = vec![Complex64::new(0.0, 0.0); n]; // fill-in two above
    let mut x = rhs.to_vec();
    for i in 0..n - 1 {
        if a[i].norm() > b[i].norm() {
            // Swap rows i and i+1.
            let (bi, ci, di) = (b[i], c[i], d[i]);
            b[i] = a[i];
            c[i] = b[i + 1];
            d[i] = if i + 1 < n - 1 { c[i + 1] } else { Complex64::new(0.0, 0.0) };
            a[i] = bi;
            b[i + 1] = ci;
            if i + 1 < n - 1 {
                c[i + 1] = di;
            }
            x.swap(i, i + 1);
        }
        if b[i].norm() == 0.0 {
            return Err(Error::PotentialSolve("singular radial operator".into()));
        }
        let m = a[i] / b[i];
        b[i + 1] -= m * c[i];
        if i + 1 < n - 1 {
            c[i + 1] -= m * d[i];
        }
        let xi = x[i];
        x[i + 1] -= m * xi;
    }
    for i in (0..n).rev() {
        let mut acc = x[i];
        if i + 1 < n {
            acc -= c[i] * x[i + 1];
        }
        if i + 2 < n {
            acc -= d[i] * x[i + 2];
        }
        if b[i].norm() == 0.0 {
            return Err(Error::PotentialSolve("singular radial operator".into()));
        }
        x[i] = acc / b[i];
    }
    Ok(x)
}

/// Solve the gauge problem on the given domain (the conformal map is built
/// internally; see [`solve_flux_potential_with_map`] to share one).
pub fn solve_flux_potential(
    domain: &DomainSpec,
    field: &MagneticField,
    n_r: usize,
    n_theta: usize,
) -> Result<FluxPotential> {
    let map = build_conformal_map(domain, n_theta.max(64))?;
    solve_flux_potential_with_map(&map, field, n_r, n_theta)
}

pub fn solve_flux_potential_with_map(
    map: &ConformalMap,
    field: &MagneticField,
    n_r: usize,
    n_theta: usize,
) -> Result<FluxPotential> {
    if n_r < 16 {
        return Err(Error::InvalidArgument(format!(
            "radial resolution {n_r} too small (need at least 16)"
        )));
    }
    if n_theta < 8 || !n_theta.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "angular resolution {n_theta} must be even and at least 8"
        )));
    }

    let grid = RadialGrid::uniform(n_r);
    let rs = &grid.nodes;
    let m = n_theta;
    let thetas = fourier::angles(m);

    // Pulled-back field and the physical-field lower bound.
    let mut bcheck = vec![0.0f64; n_r * m];
    let mut b0 = f64::INFINITY;
    for (j, &r) in rs.iter().enumerate() {
        for (i, &th) in thetas.iter().enumerate() {
            let y = Complex64::from_polar(r, th);
            let x = map.eval(y);
            let bphys = field.eval([x.re, x.im]);
            if !bphys.is_finite() {
                return Err(Error::FieldHypothesis(format!(
                    "field is not finite at ({:.4}, {:.4})",
                    x.re, x.im
                )));
            }
            b0 = b0.min(bphys);
            let fp = map.deriv(y).norm_sqr();
            bcheck[j * m + i] = fp * bphys;
        }
    }
    for &th in &thetas {
        let x = map.eval(Complex64::from_polar(1.0, th));
        b0 = b0.min(field.eval([x.re, x.im]));
    }
    if b0 <= 0.0 {
        return Err(Error::FieldHypothesis(format!(
            "field must be strictly positive on the closed domain; sampled minimum {b0:.3e}"
        )));
    }

    // Angular FFT of the source per radial ring.
    let mut source_modes = vec![vec![Complex64::new(0.0, 0.0); n_r]; m];
    for j in 0..n_r {
        let row: Vec<Complex64> = (0..m)
            .map(|i| Complex64::new(bcheck[j * m + i], 0.0))
            .collect();
        let coeffs = fourier::dft_coefficients(&row);
        for slot in 0..m {
            source_modes[slot][j] = coeffs[slot];
        }
    }

    // Per-mode tridiagonal solves.
    let mut modes = vec![vec![Complex64::new(0.0, 0.0); n_r]; m];
    for (slot, rhs) in source_modes.iter().enumerate() {
        let k = signed_mode(slot, m);
        let kk = (k * k) as f64;
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let mut sub = vec![Complex64::new(0.0, 0.0); n_r - 1];
        let mut diag = vec![Complex64::new(0.0, 0.0); n_r];
        let mut sup = vec![Complex64::new(0.0, 0.0); n_r - 1];
        for j in 0..n_r {
            let r = rs[j];
            let hm = if j == 0 { 2.0 * rs[0] } else { r - rs[j - 1] };
            let hp = if j + 1 < n_r { rs[j + 1] - r } else { 1.0 - r };
            let (d2, d1) = three_point(hm, hp);
            let cm = d2[0] + d1[0] / r;
            let c0 = d2[1] + d1[1] / r - kk / (r * r);
            let cp = d2[2] + d1[2] / r;
            diag[j] = Complex64::new(c0, 0.0);
            if j == 0 {
                // Ghost node at -r_0 carries (-1)^k times the first value.
                diag[0] += Complex64::new(parity * cm, 0.0);
            } else {
                sub[j - 1] = Complex64::new(cm, 0.0);
            }
            if j + 1 < n_r {
                sup[j] = Complex64::new(cp, 0.0);
            }
            // Dirichlet at r = 1 drops the last cp.
        }
        modes[slot] = solve_tridiag(&sub, &diag, &sup, rhs)?;
    }

    // Residual of the linear solve (health check on the factorization).
    let mut residual = 0.0f64;
    for (slot, rhs) in source_modes.iter().enumerate() {
        let k = signed_mode(slot, m);
        let kk = (k * k) as f64;
        let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
        let u = &modes[slot];
        for j in 0..n_r {
            let r = rs[j];
            let hm = if j == 0 { 2.0 * rs[0] } else { r - rs[j - 1] };
            let hp = if j + 1 < n_r { rs[j + 1] - r } else { 1.0 - r };
            let (d2, d1) = three_point(hm, hp);
            let um = if j == 0 { parity * u[0] } else { u[j - 1] };
            let up = if j + 1 < n_r { u[j + 1] } else { Complex64::new(0.0, 0.0) };
            let lu = (d2[0] + d1[0] / r) * um
                + (d2[1] + d1[1] / r - kk / (r * r)) * u[j]
                + (d2[2] + d1[2] / r) * up;
            residual = residual.max((lu - rhs[j]).norm());
        }
    }

    // Values grid.
    let mut values = vec![0.0f64; n_r * m];
    for j in 0..n_r {
        let coeffs: Vec<Complex64> = (0..m).map(|slot| modes[slot][j]).collect();
        let row = fourier::dft_values(&coeffs);
        for i in 0..m {
            values[j * m + i] = row[i].re;
        }
    }

    // Maximum principle: φ̌ < 0 inside.
    let max_val = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let min_val = values.iter().cloned().fold(f64::INFINITY, f64::min);
    if max_val > 1e-10 * min_val.abs() {
        return Err(Error::PotentialSolve(format!(
            "maximum principle violated: interior maximum {max_val:.3e} > 0"
        )));
    }

    // Boundary normal derivative (one-sided 4-point, value space).
    let pts = [1.0, rs[n_r - 1], rs[n_r - 2], rs[n_r - 3]];
    let w = derivative_weights(&pts, 1.0);
    let mut boundary_dn_disk = Vec::with_capacity(m);
    for i in 0..m {
        let d = w[1] * values[(n_r - 1) * m + i]
            + w[2] * values[(n_r - 2) * m + i]
            + w[3] * values[(n_r - 3) * m + i];
        boundary_dn_disk.push(d);
    }
    if let Some((i, &bad)) = boundary_dn_disk
        .iter()
        .enumerate()
        .find(|(_, &d)| !(d > 0.0))
    {
        return Err(Error::PotentialSolve(format!(
            "Hopf positivity failed: ∂_n φ̌ = {bad:.3e} at θ = {:.4}; \
             inconsistent with a positive field",
            thetas[i]
        )));
    }
    let boundary_dn_physical: Vec<f64> = (0..m)
        .map(|i| {
            let fp = map.deriv(Complex64::from_polar(1.0, thetas[i])).norm();
            boundary_dn_disk[i] / fp
        })
        .collect();

    // Flux, both as an area integral and a boundary integral.
    let mut flux = 0.0;
    for j in 0..n_r {
        let mean: f64 = (0..m).map(|i| bcheck[j * m + i]).sum::<f64>() / m as f64;
        flux += grid.cell_weights[j] * mean;
    }
    let flux_boundary = boundary_dn_disk.iter().sum::<f64>() / m as f64;

    let mut potential = FluxPotential {
        radial_nodes: rs.clone(),
        theta_count: m,
        modes,
        values,
        boundary_dn_disk,
        boundary_dn_physical,
        phi_min: min_val,
        y_min: [0.0, 0.0],
        x_min: [0.0, 0.0],
        z_min: Complex64::new(0.0, 0.0),
        hessian: nalgebra::Matrix2::identity(),
        hessian_disk: nalgebra::Matrix2::identity(),
        flux,
        flux_boundary,
        map: map.clone(),
        field: field.clone(),
        radial: None,
        b0,
        solve_residual: residual,
        warnings: Vec::new(),
    };

    let l = landscape::extract(&potential)?;
    let (x_min, hess) = landscape::to_physical(&potential, &l);
    potential.phi_min = l.phi_min;
    potential.y_min = l.y_min;
    potential.hessian_disk = l.hessian_disk;
    potential.x_min = x_min;
    potential.z_min = Complex64::new(x_min[0], x_min[1]);
    potential.hessian = hess;
    Ok(potential)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_disk_constant_field_is_exact() {
        // φ = (r²-1)/4 is quadratic, so the stencils reproduce it to
        // rounding.
        let p = solve_flux_potential(
            &DomainSpec::unit_disk(64),
            &MagneticField::constant(1.0),
            96,
            32,
        )
        .unwrap();
        for (j, &r) in p.radial_nodes.iter().enumerate() {
            let expect = (r * r - 1.0) / 4.0;
            assert!((p.value(j, 7) - expect).abs() < 1e-12);
        }
        assert!((p.phi_min + 0.25).abs() < 1e-9, "phi_min {}", p.phi_min);
        assert!(p.x_min[0].hypot(p.x_min[1]) < 1e-7);
        assert!((p.hessian[(0, 0)] - 0.5).abs() < 1e-7);
        assert!((p.hessian[(1, 1)] - 0.5).abs() < 1e-7);
        assert!(p.hessian[(0, 1)].abs() < 1e-7);
        assert!((p.flux - 0.5).abs() < 1e-10);
        assert!((p.flux_boundary - 0.5).abs() < 1e-8);
        for &d in &p.boundary_dn_physical {
            assert!((d - 0.5).abs() < 1e-9);
        }
        assert!(p.solve_residual < 1e-9);
    }

    #[test]
    fn scaled_field_scales_solution() {
        let p = solve_flux_potential(
            &DomainSpec::unit_disk(64),
            &MagneticField::constant(4.0),
            96,
            32,
        )
        .unwrap();
        assert!((p.phi_min + 1.0).abs() < 1e-8);
        assert!((p.flux - 2.0).abs() < 1e-9);
        assert!((p.boundary_dn_physical[0] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn disk_radius_two() {
        let p = solve_flux_potential(
            &DomainSpec::disk(2.0, 64),
            &MagneticField::constant(1.0),
            128,
            32,
        )
        .unwrap();
        // φ = (|x|²-4)/4.
        assert!((p.phi_min + 1.0).abs() < 1e-8, "phi_min {}", p.phi_min);
        assert!(p.x_min[0].hypot(p.x_min[1]) < 1e-6);
        // Hessian 0.5·Id in physical coordinates.
        assert!((p.hessian[(0, 0)] - 0.5).abs() < 1e-6);
        // Φ = area/2π = 2; ∂_nφ = R/2 = 1.
        assert!((p.flux - 2.0).abs() < 1e-9);
        assert!((p.boundary_dn_physical[0] - 1.0).abs() < 1e-8);
        // θ₀ data: |F'|·∂_nφ∘F = R²/2 = 2.
        assert!((p.boundary_dn_disk[0] - 2.0).abs() < 1e-8);
    }

    #[test]
    fn radial_oracle_agreement_second_order() {
        // B = 1 + r² has a quartic potential: genuine discretization error.
        let field = MagneticField::radial("1+r^2", |r| 1.0 + r * r);
        let oracle = crate::potential::radial_solve(&field, 1.0).unwrap();
        let rad = oracle.radial.as_ref().unwrap();
        let mut errs = Vec::new();
        for n_r in [64usize, 128] {
            let p = solve_flux_potential(&DomainSpec::unit_disk(64), &field, n_r, 16).unwrap();
            let mut err = 0.0f64;
            for (j, &r) in p.radial_nodes.iter().enumerate() {
                err = err.max((p.value(j, 0) - rad.phi_at(r)).abs());
            }
            errs.push(err);
        }
        let order = (errs[0] / errs[1]).log2();
        assert!(order > 1.9, "observed order {order}, errors {errs:?}");
    }

    #[test]
    fn field_touching_zero_rejected() {
        let field = MagneticField::radial("1-r", |r| 1.0 - r);
        let err = solve_flux_potential(&DomainSpec::unit_disk(64), &field, 64, 16).unwrap_err();
        assert!(matches!(err, Error::FieldHypothesis(_)));
    }

    #[test]
    fn star_like_landscape_unique_minimum() {
        let rf = crate::geometry::RadialFn::new("1+0.1*cos(2*s)", |s| 1.0 + 0.1 * (2.0 * s).cos());
        let spec = DomainSpec::star_like(rf, 128);
        let p = solve_flux_potential(&spec, &MagneticField::constant(1.0), 128, 64).unwrap();
        assert!(p.phi_min < -0.2 && p.phi_min > -0.4, "phi_min {}", p.phi_min);
        // Strictly convex domain: unique nondegenerate minimum near 0.
        assert!(p.x_min[0].hypot(p.x_min[1]) < 0.05);
        let h = p.hessian;
        assert!(h[(0, 0)] > 0.0 && h.determinant() > 0.0);
        // Two resolutions agree on the minimum location.
        let p2 = solve_flux_potential(&spec, &MagneticField::constant(1.0), 192, 64).unwrap();
        assert!((p.phi_min - p2.phi_min).abs() < 1e-6);
        assert!((p.x_min[0] - p2.x_min[0]).abs() < 1e-5);
    }
}
