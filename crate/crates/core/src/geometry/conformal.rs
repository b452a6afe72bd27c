//! Numerical biholomorphism `F : D(0,1) → Ω` for star-like domains via
//! Theodorsen iteration on the boundary correspondence, with the conjugate
//! function computed by FFT.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::numerics::fourier;

/// Truncated Taylor expansion of the disk-to-domain map together with
/// boundary correspondence data and derivative bounds.
#[derive(Debug, Clone)]
pub struct ConformalMap {
    /// Taylor coefficients of `F` at the origin.
    pub coefficients: Vec<Complex64>,
    /// Equispaced angles `t_i` on the unit circle.
    pub boundary_angles: Vec<f64>,
    /// Polar angle `θ(t_i)` of the boundary image point.
    pub correspondence: Vec<f64>,
    /// `F(e^{i t_i})`.
    pub boundary_points: Vec<Complex64>,
    /// Lower bound for `|F'|` on the closed disk (boundary minimum).
    pub c1: f64,
    /// Upper bound for `|F'|` on the closed disk (boundary maximum).
    pub c2: f64,
    /// Maximum distance between the mapped unit circle and the boundary
    /// curve over a dense sample.
    pub residual: f64,
    /// Number of Theodorsen iterations performed (0 for exact disks).
    pub iterations: usize,
}

impl ConformalMap {
    pub fn identity(m: usize) -> Self {
        Self::dilation(1.0, m)
    }

    pub fn dilation(radius: f64, m: usize) -> Self {
        let angles = fourier::angles(m);
        let boundary_points = angles
            .iter()
            .map(|&t| Complex64::from_polar(radius, t))
            .collect();
        ConformalMap {
            coefficients: vec![Complex64::new(0.0, 0.0), Complex64::new(radius, 0.0)],
            boundary_angles: angles.clone(),
            correspondence: angles,
            boundary_points,
            c1: radius,
            c2: radius,
            residual: 0.0,
            iterations: 0,
        }
    }

    /// Evaluate `F(y)` by Horner's rule.
    pub fn eval(&self, y: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            acc = acc * y + c;
        }
        acc
    }

    /// Evaluate `F'(y)`.
    pub fn deriv(&self, y: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (n, &c) in self.coefficients.iter().enumerate().skip(1).rev() {
            acc = acc * y + c * n as f64;
        }
        acc
    }

    /// True when the map is a pure dilation `F(z) = R z`.
    pub fn is_dilation(&self) -> bool {
        self.coefficients.len() == 2 && self.coefficients[0].norm() == 0.0
    }

    /// Minimum of `|F'|` over an `n×n` polar sample of the closed disk.
    pub fn derivative_min_on_disk(&self, n: usize) -> f64 {
        let mut min = f64::INFINITY;
        for i in 0..n {
            let r = (i as f64 + 1.0) / n as f64;
            for j in 0..n {
                let t = 2.0 * PI * j as f64 / n as f64;
                min = min.min(self.deriv(Complex64::from_polar(r, t)).norm());
            }
        }
        min
    }
}

/// Construct the conformal map from the unit disk onto the domain.
///
/// Disks map exactly; star-like boundaries go through Theodorsen iteration
/// with the conjugate function computed on `max(4M, 512)` nodes, and the map
/// is truncated to `truncation` Taylor coefficients.
pub fn build_conformal_map(spec: &DomainSpec, truncation: usize) -> Result<ConformalMap> {
    spec.validate()?;
    let m_nodes = spec.boundary_nodes;
    match &spec.kind {
        DomainKind::UnitDisk => Ok(ConformalMap::identity(m_nodes)),
        DomainKind::Disk { radius } => Ok(ConformalMap::dilation(*radius, m_nodes)),
        DomainKind::StarLike { radius_fn } => {
            let m = (4 * m_nodes).next_power_of_two().max(512);
            let angles = fourier::angles(m);
            let rho = |theta: f64| radius_fn.eval(theta);

            // Theodorsen: θ(t) = t + K[log ρ(θ(·))](t).
            let mut theta: Vec<f64> = angles.clone();
            let mut last_update = f64::INFINITY;
            let mut iterations = 0;
            for it in 0..600 {
                let logr: Vec<f64> = theta.iter().map(|&th| rho(th).ln()).collect();
                let conj = fourier::conjugate_function(&logr);
                let mut update = 0.0f64;
                for i in 0..m {
                    let new = angles[i] + conj[i];
                    update = update.max((new - theta[i]).abs());
                    theta[i] = new;
                }
                iterations = it + 1;
                if update < 1e-14 {
                    break;
                }
                if it > 40 && update > last_update * 1.05 {
                    return Err(Error::ConformalMap(format!(
                        "Theodorsen iteration is not contracting (update {update:.3e} after \
                         {it} iterations); boundary is too far from circular"
                    )));
                }
                last_update = update;
            }
            if last_update > 1e-10 {
                return Err(Error::ConformalMap(format!(
                    "Theodorsen iteration stalled with boundary-correspondence update {last_update:.3e}"
                )));
            }

            // Boundary values of F and the Taylor coefficients.
            let w: Vec<Complex64> = theta
                .iter()
                .map(|&th| Complex64::from_polar(rho(th), th))
                .collect();
            let hat = fourier::dft_coefficients(&w);
            let truncation = truncation.min(m / 2 - 1).max(2);
            let mut coefficients = vec![Complex64::new(0.0, 0.0); truncation + 1];
            coefficients[..(truncation + 1)].copy_from_slice(&hat[..(truncation + 1)]);
            let max_coeff = coefficients.iter().map(|c| c.norm()).fold(0.0, f64::max);
            let tail = coefficients[truncation].norm();
            if tail > 1e-8 * max_coeff {
                return Err(Error::ConformalMap(format!(
                    "Taylor tail |a_N| = {tail:.3e} has not decayed below 1e-8·max|a_n| \
                     = {:.3e}; increase the truncation",
                    1e-8 * max_coeff
                )));
            }

            // Resample the correspondence at the requested boundary angles
            // through its periodic part (the node counts need not divide).
            let shift: Vec<f64> = (0..m).map(|i| theta[i] - angles[i]).collect();
            let shift_hat = fourier::dft_coefficients_real(&shift);
            let node_angles = fourier::angles(m_nodes);
            let correspondence: Vec<f64> = node_angles
                .iter()
                .map(|&t| t + fourier::trig_interpolate(&shift_hat, t))
                .collect();
            let boundary_points: Vec<Complex64> = correspondence
                .iter()
                .map(|&th| Complex64::from_polar(rho(th), th))
                .collect();
            let map = ConformalMap {
                coefficients,
                boundary_angles: node_angles,
                correspondence,
                boundary_points,
                c1: 0.0,
                c2: 0.0,
                residual: 0.0,
                iterations,
            };

            // Residual: mapped circle vs the parametrized boundary, sampled
            // off-grid as well.
            let fine = 2 * m;
            let mut residual = 0.0f64;
            let mut c1 = f64::INFINITY;
            let mut c2 = 0.0f64;
            for i in 0..fine {
                let t = 2.0 * PI * (i as f64 + 0.37) / fine as f64;
                let y = Complex64::from_polar(1.0, t);
                let fy = map.eval(y);
                let want_r = rho(fy.arg());
                residual = residual.max((fy.norm() - want_r).abs());
                let d = map.deriv(y).norm();
                c1 = c1.min(d);
                c2 = c2.max(d);
            }
            if c1 <= 0.0 {
                return Err(Error::ConformalMap(
                    "boundary derivative of the map vanishes".into(),
                ));
            }
            Ok(ConformalMap {
                c1,
                c2,
                residual,
                ..map
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadialFn;

    #[test]
    fn disk_maps_are_exact() {
        let id = build_conformal_map(&DomainSpec::unit_disk(64), 16).unwrap();
        assert_eq!(id.c1, 1.0);
        assert_eq!(id.c2, 1.0);
        let z = Complex64::new(0.3, -0.2);
        assert!((id.eval(z) - z).norm() < 1e-15);

        let dil = build_conformal_map(&DomainSpec::disk(2.0, 64), 16).unwrap();
        assert!((dil.eval(z) - 2.0 * z).norm() < 1e-15);
        assert!((dil.deriv(z).norm() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn star_like_map_reproduces_boundary() {
        let rf = RadialFn::new("1+0.1*cos(2*s)", |s| 1.0 + 0.1 * (2.0 * s).cos());
        let map = build_conformal_map(&DomainSpec::star_like(rf.clone(), 256), 64).unwrap();
        assert!(map.residual < 1e-8, "residual {}", map.residual);
        assert!(map.c1 > 0.5 && map.c2 < 2.0);
        // Mapped boundary points land on the curve.
        for &p in map.boundary_points.iter().step_by(16) {
            let want = rf.eval(p.arg());
            assert!((p.norm() - want).abs() < 1e-10);
        }
        // Derivative does not vanish inside.
        assert!(map.derivative_min_on_disk(64) >= map.c1 * (1.0 - 1e-6));
    }

    #[test]
    fn wild_boundary_is_rejected() {
        // Strongly non-circular: Theodorsen should fail to contract.
        let rf = RadialFn::new("wild", |s| 1.0 + 0.95 * (7.0 * s).cos());
        assert!(build_conformal_map(&DomainSpec::star_like(rf, 256), 64).is_err());
    }
}
