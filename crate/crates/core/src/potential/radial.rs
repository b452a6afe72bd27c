//! Radial gauge potential oracle: `φ(r) = -∫_r^R (1/ρ) ∫_0^ρ s B(s) ds dρ`
//! by nested adaptive quadrature. Serves as the reference the grid solver
//! is checked against.

use nalgebra::Matrix2;
use num_complex::Complex64;

use super::{FluxPotential, MagneticField, RadialData};
use crate::error::{Error, Result};
use crate::geometry::ConformalMap;
use crate::numerics::quadrature::adaptive_simpson;

const DENSE_POINTS: usize = 2049;

/// Solve the radial gauge problem on the disk of radius `radius`.
///
/// The field must carry a radial profile. The returned potential holds the
/// dense radial tables plus all landscape scalars; in particular
/// `Hess φ(0) = B(0)/2 · Id` from the radial ODE.
pub fn radial_solve(field: &MagneticField, radius: f64) -> Result<FluxPotential> {
    let profile = field.radial_profile().ok_or_else(|| {
        Error::FieldHypothesis("radial solver requires a radial field profile".into())
    })?;
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidArgument(format!("radius {radius} must be positive")));
    }

    let n = DENSE_POINTS;
    let rs: Vec<f64> = (0..n).map(|i| radius * i as f64 / (n - 1) as f64).collect();

    let mut b0 = f64::INFINITY;
    for &r in &rs {
        let b = profile(r);
        if !(b.is_finite()) {
            return Err(Error::FieldHypothesis(format!("B({r}) is not finite")));
        }
        b0 = b0.min(b);
    }
    if b0 <= 0.0 {
        return Err(Error::FieldHypothesis(format!(
            "field must be strictly positive; sampled minimum {b0:.3e}"
        )));
    }

    // inner(ρ) = ∫_0^ρ s B(s) ds, accumulated panel by panel.
    let tol = 1e-14 * radius.max(1.0) * b0.max(1.0);
    let mut inner = vec![0.0f64; n];
    for i in 1..n {
        let inc = adaptive_simpson(&|s| s * profile(s), rs[i - 1], rs[i], tol)?;
        inner[i] = inner[i - 1] + inc;
    }
    let inner_at = |rho: f64| -> Result<f64> {
        let rho = rho.clamp(0.0, radius);
        let idx = ((rho / radius * (n - 1) as f64).floor() as usize).min(n - 2);
        Ok(inner[idx] + adaptive_simpson(&|s| s * profile(s), rs[idx], rho, tol)?)
    };

    // φ'(ρ) = inner(ρ)/ρ, extended by 0 at the origin.
    let dphi_at = |rho: f64| -> Result<f64> {
        if rho <= 0.0 {
            return Ok(0.0);
        }
        Ok(inner_at(rho)? / rho)
    };
    let mut dphi = vec![0.0f64; n];
    for i in 1..n {
        dphi[i] = inner[i] / rs[i];
    }

    // φ(r) accumulated from the boundary, φ(R) = 0.
    let mut phi = vec![0.0f64; n];
    for i in (0..n - 1).rev() {
        let inc = adaptive_simpson(
            &|rho| dphi_at(rho).unwrap_or(f64::NAN),
            rs[i],
            rs[i + 1],
            tol,
        )?;
        if !inc.is_finite() {
            return Err(Error::Quadrature("nested radial quadrature failed".into()));
        }
        phi[i] = phi[i + 1] - inc;
    }

    let b_center = profile(0.0);
    let flux = inner[n - 1];
    let dn_boundary = dphi[n - 1];
    let phi_center = phi[0];

    let data = RadialData {
        radius,
        rs,
        phi: phi.clone(),
        dphi,
        phi_center,
        dn_boundary,
        flux,
        b_center,
    };
    Ok(potential_from_radial_data(data, field.clone(), b0))
}

/// Deterministic rebuild of a full potential from solved radial tables
/// (also the cache-restore path of the harness).
pub fn potential_from_radial_data(
    data: RadialData,
    field: MagneticField,
    b0: f64,
) -> FluxPotential {
    let radius = data.radius;
    // Compatibility grid in the disk picture (pullback through F(y) = R y).
    let m_theta = 256usize;
    let grid = crate::numerics::grid::RadialGrid::uniform(256);
    let radial_nodes = grid.nodes.clone();
    let mut modes = vec![vec![Complex64::new(0.0, 0.0); radial_nodes.len()]; m_theta];
    let mut values = vec![0.0f64; radial_nodes.len() * m_theta];
    for (j, &r) in radial_nodes.iter().enumerate() {
        let v = data.phi_at(r * radius);
        modes[0][j] = Complex64::new(v, 0.0);
        for i in 0..m_theta {
            values[j * m_theta + i] = v;
        }
    }
    let dn_disk = radius * data.dn_boundary;
    let b_center = data.b_center;
    let (flux, dn_boundary, phi_center) = (data.flux, data.dn_boundary, data.phi_center);

    FluxPotential {
        radial_nodes,
        theta_count: m_theta,
        modes,
        values,
        boundary_dn_disk: vec![dn_disk; m_theta],
        boundary_dn_physical: vec![dn_boundary; m_theta],
        phi_min: phi_center,
        y_min: [0.0, 0.0],
        x_min: [0.0, 0.0],
        z_min: Complex64::new(0.0, 0.0),
        hessian: Matrix2::new(0.5 * b_center, 0.0, 0.0, 0.5 * b_center),
        hessian_disk: Matrix2::new(
            0.5 * b_center * radius * radius,
            0.0,
            0.0,
            0.5 * b_center * radius * radius,
        ),
        flux,
        flux_boundary: radius * dn_boundary,
        map: ConformalMap::dilation(radius, m_theta),
        field,
        radial: Some(data),
        b0,
        solve_residual: 0.0,
        warnings: Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_field_unit_disk() {
        let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
        // φ = (r² - 1)/4.
        assert!((p.phi_min + 0.25).abs() < 1e-12);
        assert!((p.flux - 0.5).abs() < 1e-12);
        assert!((p.boundary_dn_physical[0] - 0.5).abs() < 1e-12);
        assert!((p.hessian[(0, 0)] - 0.5).abs() < 1e-14);
        assert!((p.hessian[(1, 1)] - 0.5).abs() < 1e-14);
        assert!(p.hessian[(0, 1)].abs() < 1e-14);
        let rad = p.radial.as_ref().unwrap();
        for &r in &[0.17, 0.5, 0.93] {
            assert!((rad.phi_at(r) - (r * r - 1.0) / 4.0).abs() < 1e-12);
            assert!((rad.dphi_at(r) - r / 2.0).abs() < 1e-11);
        }
    }

    #[test]
    fn doubled_field_doubles_everything() {
        let p = radial_solve(&MagneticField::constant(4.0), 1.0).unwrap();
        assert!((p.phi_min + 1.0).abs() < 1e-12);
        assert!((p.boundary_dn_physical[0] - 2.0).abs() < 1e-12);
        assert!((p.flux - 2.0).abs() < 1e-12);
    }

    #[test]
    fn linear_profile_boundary_derivative() {
        let field = MagneticField::radial("2", |_| 2.0);
        let p = radial_solve(&field, 1.0).unwrap();
        assert!((p.boundary_dn_physical[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn quadratic_profile_closed_form() {
        // B = 1 + r²: φ' = r/2 + r³/4, φ = -(1-r²)/4 - (1-r⁴)/16.
        let field = MagneticField::radial("1+r^2", |r| 1.0 + r * r);
        let p = radial_solve(&field, 1.0).unwrap();
        assert!((p.phi_min + 5.0 / 16.0).abs() < 1e-12);
        assert!((p.boundary_dn_physical[0] - 0.75).abs() < 1e-12);
        assert!((p.flux - 0.75).abs() < 1e-12);
        let rad = p.radial.as_ref().unwrap();
        let phi_exact = |r: f64| -(1.0 - r * r) / 4.0 - (1.0 - r.powi(4)) / 16.0;
        for &r in &[0.1, 0.45, 0.8, 0.99] {
            assert!((rad.phi_at(r) - phi_exact(r)).abs() < 1e-12);
        }
    }

    #[test]
    fn vanishing_field_rejected() {
        let field = MagneticField::radial("r", |r| r);
        assert!(radial_solve(&field, 1.0).is_err());
    }
}
