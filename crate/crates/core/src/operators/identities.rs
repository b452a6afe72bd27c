//! Pointwise operator-identity probes on polar grids: the gauge
//! factorization of the magnetic Dirac operator and the magnetic
//! Cauchy-Riemann energy identities. Both are discretized with spectral
//! angular derivatives and centered radial differences, so their residuals
//! refine at second order on smooth compactly supported inputs.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::fourier;
use crate::potential::FluxPotential;

/// Sampled complex scalar field on the uniform polar test grid.
struct PolarField {
    n_r: usize,
    n_t: usize,
    radius: f64,
    /// values[j * n_t + i]
    values: Vec<Complex64>,
}

impl PolarField {
    fn sample(
        radius: f64,
        n_r: usize,
        n_t: usize,
        f: &dyn Fn([f64; 2]) -> Complex64,
    ) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); n_r * n_t];
        for j in 0..n_r {
            let r = radius * (j as f64 + 0.5) / n_r as f64;
            for (i, &th) in fourier::angles(n_t).iter().enumerate() {
                values[j * n_t + i] = f([r * th.cos(), r * th.sin()]);
            }
        }
        PolarField {
            n_r,
            n_t,
            radius,
            values,
        }
    }

    fn node_r(&self, j: usize) -> f64 {
        self.radius * (j as f64 + 0.5) / self.n_r as f64
    }

    /// Radial derivative: centered differences, parity wrap through the
    /// origin (`u(-r, θ) = u(r, θ+π)`), one-sided at the outer edge.
    fn d_r(&self) -> Vec<Complex64> {
        let dr = self.radius / self.n_r as f64;
        let (n_r, n_t) = (self.n_r, self.n_t);
        let mut out = vec![Complex64::new(0.0, 0.0); n_r * n_t];
        for j in 0..n_r {
            for i in 0..n_t {
                let up = if j + 1 < n_r {
                    self.values[(j + 1) * n_t + i]
                } else {
                    // One-sided second-order at the outer ring.
                    let a = self.values[j * n_t + i];
                    let b = self.values[(j - 1) * n_t + i];
                    let c = self.values[(j - 2) * n_t + i];
                    out[j * n_t + i] = (1.5 * a - 2.0 * b + 0.5 * c) / dr;
                    continue;
                };
                let um = if j == 0 {
                    self.values[(i + n_t / 2) % n_t]
                } else {
                    self.values[(j - 1) * n_t + i]
                };
                out[j * n_t + i] = (up - um) / (2.0 * dr);
            }
        }
        out
    }

    /// Angular derivative, spectral per ring.
    fn d_theta(&self) -> Vec<Complex64> {
        let (n_r, n_t) = (self.n_r, self.n_t);
        let mut out = vec![Complex64::new(0.0, 0.0); n_r * n_t];
        for j in 0..n_r {
            let row: Vec<Complex64> = (0..n_t).map(|i| self.values[j * n_t + i]).collect();
            let mut coeffs = fourier::dft_coefficients(&row);
            for (slot, c) in coeffs.iter_mut().enumerate() {
                let k = crate::numerics::signed_mode(slot, n_t);
                *c *= Complex64::new(0.0, k as f64);
            }
            let back = fourier::dft_values(&coeffs);
            for i in 0..n_t {
                out[j * n_t + i] = back[i];
            }
        }
        out
    }

    /// `∂_z u` and `∂_z̄ u` from the polar derivatives.
    fn wirtinger(&self) -> (Vec<Complex64>, Vec<Complex64>) {
        let dr = self.d_r();
        let dt = self.d_theta();
        let (n_r, n_t) = (self.n_r, self.n_t);
        let mut dz = vec![Complex64::new(0.0, 0.0); n_r * n_t];
        let mut dzb = vec![Complex64::new(0.0, 0.0); n_r * n_t];
        for j in 0..n_r {
            let r = self.node_r(j);
            for (i, &th) in fourier::angles(n_t).iter().enumerate() {
                let e_m = Complex64::from_polar(1.0, -th);
                let e_p = Complex64::from_polar(1.0, th);
                let idx = j * n_t + i;
                let radial = dr[idx];
                let ang = dt[idx] / r;
                dz[idx] = 0.5 * e_m * (radial - Complex64::i() * ang);
                dzb[idx] = 0.5 * e_p * (radial + Complex64::i() * ang);
            }
        }
        (dz, dzb)
    }
}

fn require_radial_disk(potential: &FluxPotential) -> Result<(f64, &crate::potential::RadialData)> {
    let rad = potential.radial.as_ref().ok_or_else(|| {
        Error::Assembly("identity probes support radial fields on disks".into())
    })?;
    Ok((rad.radius, rad))
}

/// Grid norm of `[e^{σ₃φ/h} σ·p e^{σ₃φ/h} - σ·(p-A)] u` for a smooth
/// spinor `u` supported inside the domain. `gauge_offset` perturbs `A`
/// for negative-control runs.
pub fn gauge_identity_residual(
    potential: &FluxPotential,
    h: f64,
    spinor: &dyn Fn([f64; 2]) -> [Complex64; 2],
    n_r: usize,
    n_theta: usize,
    gauge_offset: Option<[f64; 2]>,
) -> Result<f64> {
    let (radius, rad) = require_radial_disk(potential)?;
    let off = gauge_offset.unwrap_or([0.0, 0.0]);

    // Support check: the spinor must vanish near the boundary and stay
    // clear of the sampling edges.
    for &th in fourier::angles(16).iter() {
        for &r in &[radius * (1.0 - 0.25 / n_r as f64), radius] {
            let u = spinor([r * th.cos(), r * th.sin()]);
            if u[0].norm() + u[1].norm() > 1e-13 {
                return Err(Error::InvalidArgument(
                    "test spinor must be compactly supported inside the domain".into(),
                ));
            }
        }
    }

    let u1 = PolarField::sample(radius, n_r, n_theta, &|x| spinor(x)[0]);
    let u2 = PolarField::sample(radius, n_r, n_theta, &|x| spinor(x)[1]);

    // w = e^{σ₃φ/h} u, componentwise.
    let phi_at = |j: usize| rad.phi_at(u1.node_r(j));
    let mut w1 = u1.values.clone();
    let mut w2 = u2.values.clone();
    for j in 0..n_r {
        let e = (phi_at(j) / h).exp();
        for i in 0..n_theta {
            w1[j * n_theta + i] *= e;
            w2[j * n_theta + i] /= e;
        }
    }
    let w1f = PolarField {
        n_r,
        n_t: n_theta,
        radius,
        values: w1,
    };
    let w2f = PolarField {
        n_r,
        n_t: n_theta,
        radius,
        values: w2,
    };

    // σ·p w = (-2ih ∂_z w₂, -2ih ∂_z̄ w₁).
    let (dz_w2, _) = w2f.wirtinger();
    let (_, dzb_w1) = w1f.wirtinger();

    // σ·(p-A) u = (d_{h,A} u₂, d^×_{h,A} u₁) with
    // d = -2ih∂_z - A₁ + iA₂, d^× = -2ih∂_z̄ - A₁ - iA₂.
    let (dz_u2, _) = u2.wirtinger();
    let (_, dzb_u1) = u1.wirtinger();

    let m2ih = Complex64::new(0.0, -2.0 * h);
    let mut num = 0.0f64;
    let dr = radius / n_r as f64;
    let dth = 2.0 * std::f64::consts::PI / n_theta as f64;
    for j in 0..n_r {
        let r = u1.node_r(j);
        let e = (phi_at(j) / h).exp();
        for (i, &th) in fourier::angles(n_theta).iter().enumerate() {
            let idx = j * n_theta + i;
            // A = φ'(r) θ̂ plus the optional constant offset.
            let a1 = -rad.dphi_at(r) * th.sin() + off[0];
            let a2 = rad.dphi_at(r) * th.cos() + off[1];
            let a_minus = Complex64::new(a1, -a2); // A₁ - iA₂
            let a_plus = Complex64::new(a1, a2); // A₁ + iA₂

            let lhs1 = e * (m2ih * dz_w2[idx]);
            let lhs2 = (m2ih * dzb_w1[idx]) / e;
            let rhs1 = m2ih * dz_u2[idx] - a_minus * u2.values[idx];
            let rhs2 = m2ih * dzb_u1[idx] - a_plus * u1.values[idx];
            let cell = r * dr * dth;
            num += cell * ((lhs1 - rhs1).norm_sqr() + (lhs2 - rhs2).norm_sqr());
        }
    }
    Ok(num.sqrt())
}

/// Both energy-identity gaps of the magnetic Cauchy-Riemann operators plus
/// the ingredients, from one scalar Dirichlet test function.
#[derive(Debug, Clone, Copy)]
pub struct CrEnergyGaps {
    /// `‖d_{h,A}u‖² - ‖(p-A)u‖² - h∫B|u|²`.
    pub gap_plus: f64,
    /// `‖d^×_{h,A}u‖² - ‖(p-A)u‖² + h∫B|u|²`.
    pub gap_minus: f64,
    pub pa_energy: f64,
    pub field_term: f64,
    pub mass: f64,
}

/// Evaluate the Cauchy-Riemann energy identities for a scalar function
/// sampled on the polar test grid (must vanish at the boundary).
pub fn cr_energy_identity_gap(
    potential: &FluxPotential,
    h: f64,
    u: &dyn Fn([f64; 2]) -> Complex64,
    n_r: usize,
    n_theta: usize,
) -> Result<CrEnergyGaps> {
    let (radius, rad) = require_radial_disk(potential)?;
    let profile = potential
        .field
        .radial_profile()
        .ok_or_else(|| Error::Assembly("radial field required".into()))?;

    let uf = PolarField::sample(radius, n_r, n_theta, &|x| u(x));
    let (dz, dzb) = uf.wirtinger();

    let m2ih = Complex64::new(0.0, -2.0 * h);
    let dr = radius / n_r as f64;
    let dth = 2.0 * std::f64::consts::PI / n_theta as f64;
    let (mut d_plus, mut d_minus, mut pa, mut bterm, mut mass) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for j in 0..n_r {
        let r = uf.node_r(j);
        let dphi = rad.dphi_at(r);
        for (i, &th) in fourier::angles(n_theta).iter().enumerate() {
            let idx = j * n_theta + i;
            let a1 = -dphi * th.sin();
            let a2 = dphi * th.cos();
            let val = uf.values[idx];
            let d_u = m2ih * dz[idx] - Complex64::new(a1, -a2) * val;
            let dx_u = m2ih * dzb[idx] - Complex64::new(a1, a2) * val;
            // (p-A)u components from the Wirtinger pair:
            // p₁-A₁ = -ih∂₁ - A₁, with ∂₁ = ∂_z + ∂_z̄, ∂₂ = i(∂_z - ∂_z̄).
            let d1 = dz[idx] + dzb[idx];
            let d2 = Complex64::i() * (dz[idx] - dzb[idx]);
            let p1 = Complex64::new(0.0, -h) * d1 - a1 * val;
            let p2 = Complex64::new(0.0, -h) * d2 - a2 * val;
            let cell = r * dr * dth;
            d_plus += cell * d_u.norm_sqr();
            d_minus += cell * dx_u.norm_sqr();
            pa += cell * (p1.norm_sqr() + p2.norm_sqr());
            bterm += cell * h * profile(r) * val.norm_sqr();
            mass += cell * val.norm_sqr();
        }
    }
    Ok(CrEnergyGaps {
        gap_plus: d_plus - pa - bterm,
        gap_minus: d_minus - pa + bterm,
        pa_energy: pa,
        field_term: bterm,
        mass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Smooth radial bump supported in the annulus `r ∈ (r0-w, r0+w)`.
    fn annular_bump(r0: f64, w: f64) -> impl Fn([f64; 2]) -> Complex64 {
        move |x: [f64; 2]| {
            let r = x[0].hypot(x[1]);
            let t = (r - r0) / w;
            if t.abs() >= 1.0 {
                Complex64::new(0.0, 0.0)
            } else {
                Complex64::new((-1.0 / (1.0 - t * t)).exp(), 0.0)
            }
        }
    }
    use crate::potential::{radial_solve, MagneticField};

    fn setup() -> FluxPotential {
        radial_solve(&MagneticField::constant(1.0), 1.0).unwrap()
    }

    #[test]
    fn zero_spinor_gives_zero() {
        let p = setup();
        let res = gauge_identity_residual(
            &p,
            0.3,
            &|_x| [Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
            48,
            16,
            None,
        )
        .unwrap();
        assert_eq!(res, 0.0);
    }

    #[test]
    fn residual_refines_at_second_order() {
        let p = setup();
        let bump = annular_bump(0.45, 0.3);
        let spinor = move |x: [f64; 2]| {
            let b = bump(x);
            [b * Complex64::new(1.0, 0.4), b * Complex64::new(-0.3, 0.9)]
        };
        let r1 = gauge_identity_residual(&p, 0.3, &spinor, 64, 32, None).unwrap();
        let r2 = gauge_identity_residual(&p, 0.3, &spinor, 128, 32, None).unwrap();
        assert!(
            r1 / r2 >= 3.5,
            "refinement ratio {} (residuals {r1}, {r2})",
            r1 / r2
        );
    }

    #[test]
    fn wrong_gauge_does_not_converge() {
        let p = setup();
        let bump = annular_bump(0.45, 0.3);
        let spinor = move |x: [f64; 2]| {
            let b = bump(x);
            [b, b * Complex64::new(0.5, 0.0)]
        };
        let r1 = gauge_identity_residual(&p, 0.3, &spinor, 64, 32, Some([0.1, 0.0])).unwrap();
        let r2 = gauge_identity_residual(&p, 0.3, &spinor, 128, 32, Some([0.1, 0.0])).unwrap();
        assert!(r1 / r2 < 1.5, "perturbed gauge should stall: {r1} vs {r2}");
    }

    #[test]
    fn boundary_touching_spinor_rejected() {
        let p = setup();
        let res = gauge_identity_residual(
            &p,
            0.3,
            &|_x| [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            32,
            16,
            None,
        );
        assert!(res.is_err());
    }

    #[test]
    fn zero_function_zero_gaps() {
        let p = setup();
        let g = cr_energy_identity_gap(&p, 0.25, &|_| Complex64::new(0.0, 0.0), 32, 16).unwrap();
        assert_eq!(g.gap_plus, 0.0);
        assert_eq!(g.gap_minus, 0.0);
    }

    #[test]
    fn gaps_refine_and_difference_matches_field_term() {
        let p = setup();
        let h = 0.25;
        let bump = annular_bump(0.5, 0.35);
        let u = move |x: [f64; 2]| bump(x) * Complex64::new(1.0, -0.7);
        let g1 = cr_energy_identity_gap(&p, h, &u, 64, 32).unwrap();
        let g2 = cr_energy_identity_gap(&p, h, &u, 128, 32).unwrap();
        assert!(
            g1.gap_plus.abs() / g2.gap_plus.abs() >= 3.5,
            "plus gaps {} {}",
            g1.gap_plus,
            g2.gap_plus
        );
        assert!(
            g1.gap_minus.abs() / g2.gap_minus.abs() >= 3.5,
            "minus gaps {} {}",
            g1.gap_minus,
            g2.gap_minus
        );
        // gap difference = ‖du‖² - ‖d^×u‖² - 2hB‖u‖² → 0 at the same rate.
        let diff1 = g1.gap_plus - g1.gap_minus;
        let diff2 = g2.gap_plus - g2.gap_minus;
        assert!(diff1.abs() / diff2.abs().max(1e-300) >= 3.0 || diff2.abs() < 1e-12);
        // Magnetic lower bound: ‖(p-A)u‖² ≥ h∫B|u|² up to the gap size.
        assert!(g2.pa_energy - g2.field_term >= -(g2.gap_minus.abs() * 1.05 + 1e-12));
    }
}
