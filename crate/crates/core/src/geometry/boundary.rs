//! Boundary discretization: nodes equispaced in arclength, outward normals,
//! curvatures and arclength weights.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::{DomainKind, DomainSpec};
use crate::error::{Error, Result};
use crate::numerics::fourier;

/// Discretized boundary curve. Nodes are equispaced in arclength and the
/// curve is positively oriented; normals point outward.
#[derive(Debug, Clone)]
pub struct BoundaryData {
    /// Node positions `γ(s_i)`.
    pub points: Vec<[f64; 2]>,
    /// Outward unit normals.
    pub normals: Vec<[f64; 2]>,
    /// Unit tangents (counterclockwise).
    pub tangents: Vec<[f64; 2]>,
    /// Arclength of each node from the first node.
    pub arclengths: Vec<f64>,
    /// Quadrature weights for `∫ ds`; all equal to `L/M`.
    pub arclength_weights: Vec<f64>,
    /// Signed curvature at the nodes.
    pub curvatures: Vec<f64>,
    pub total_length: f64,
    /// Maximum |curvature| over a dense boundary sample.
    pub max_curvature: f64,
    /// Polar angle parameter of each node.
    pub polar_angles: Vec<f64>,
    /// Fourier coefficients of the radius function on the dense grid
    /// (single constant entry for disks).
    radius_coeffs: Vec<Complex64>,
}

struct PolarCurve {
    coeffs: Vec<Complex64>,
}

impl PolarCurve {
    fn radius(&self, theta: f64) -> f64 {
        fourier::trig_interpolate(&self.coeffs, theta)
    }

    fn radius_deriv(&self, theta: f64, order: u32) -> f64 {
        let m = self.coeffs.len();
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, &c) in self.coeffs.iter().enumerate() {
            let k = crate::numerics::signed_mode(i, m) as f64;
            let ik = Complex64::new(0.0, k);
            acc += c * ik.powu(order) * Complex64::new(0.0, k * theta).exp();
        }
        acc.re
    }

    fn gamma(&self, theta: f64) -> [f64; 2] {
        let r = self.radius(theta);
        [r * theta.cos(), r * theta.sin()]
    }

    /// `|γ'(θ)| = sqrt(r² + r'²)`.
    fn speed(&self, theta: f64) -> f64 {
        let r = self.radius(theta);
        let dr = self.radius_deriv(theta, 1);
        (r * r + dr * dr).sqrt()
    }

    fn tangent_normal_curvature(&self, theta: f64) -> ([f64; 2], [f64; 2], f64) {
        let r = self.radius(theta);
        let dr = self.radius_deriv(theta, 1);
        let ddr = self.radius_deriv(theta, 2);
        let (c, s) = (theta.cos(), theta.sin());
        let xp = dr * c - r * s;
        let yp = dr * s + r * c;
        let xpp = ddr * c - 2.0 * dr * s - r * c;
        let ypp = ddr * s + 2.0 * dr * c - r * s;
        let sp = (xp * xp + yp * yp).sqrt();
        let tangent = [xp / sp, yp / sp];
        let normal = [tangent[1], -tangent[0]];
        let kappa = (xp * ypp - yp * xpp) / (sp * sp * sp);
        (tangent, normal, kappa)
    }
}

/// Build the boundary discretization for a domain.
///
/// Returns nodes equispaced in arclength (to Newton tolerance), outward unit
/// normals and weights summing exactly to the total length.
pub fn build_domain(spec: &DomainSpec) -> Result<BoundaryData> {
    spec.validate()?;
    let m = spec.boundary_nodes;
    match &spec.kind {
        DomainKind::UnitDisk => Ok(disk_boundary(1.0, m)),
        DomainKind::Disk { radius } => Ok(disk_boundary(*radius, m)),
        DomainKind::StarLike { radius_fn } => {
            // Dense grid for spectral differentiation of the radius function.
            let fine = (4 * m).next_power_of_two().max(512);
            let thetas = fourier::angles(fine);
            let radii: Vec<f64> = thetas.iter().map(|&t| radius_fn.eval(t)).collect();
            if let Some((i, &bad)) = radii
                .iter()
                .enumerate()
                .find(|(_, &r)| !(r > 0.0 && r.is_finite()))
            {
                return Err(Error::InvalidDomain(format!(
                    "radius function must stay positive; r({:.6}) = {bad}",
                    thetas[i]
                )));
            }
            let curve = PolarCurve {
                coeffs: fourier::dft_coefficients_real(&radii),
            };

            // Cumulative arclength from the Fourier series of |γ'|.
            let speeds: Vec<f64> = thetas.iter().map(|&t| curve.speed(t)).collect();
            let speed_coeffs = fourier::dft_coefficients_real(&speeds);
            let mean_speed = speed_coeffs[0].re;
            let total_length = 2.0 * PI * mean_speed;
            let sigma = |theta: f64| -> f64 {
                // ∫_0^θ |γ'| = c0 θ + Σ_{k≠0} c_k (e^{ikθ} - 1)/(ik)
                let mut acc = mean_speed * theta;
                let n = speed_coeffs.len();
                for (i, &c) in speed_coeffs.iter().enumerate() {
                    let k = crate::numerics::signed_mode(i, n);
                    if k == 0 {
                        continue;
                    }
                    let ik = Complex64::new(0.0, k as f64);
                    acc += (c * ((ik * theta).exp() - 1.0) / ik).re;
                }
                acc
            };

            let mut points = Vec::with_capacity(m);
            let mut normals = Vec::with_capacity(m);
            let mut tangents = Vec::with_capacity(m);
            let mut curvatures = Vec::with_capacity(m);
            let mut polar_angles = Vec::with_capacity(m);
            let mut theta = 0.0f64;
            for i in 0..m {
                let target = total_length * i as f64 / m as f64;
                // Newton inversion of the arclength function.
                for _ in 0..60 {
                    let f = sigma(theta) - target;
                    let df = curve.speed(theta);
                    let step = f / df;
                    theta -= step;
                    if step.abs() < 1e-14 {
                        break;
                    }
                }
                polar_angles.push(theta);
                points.push(curve.gamma(theta));
                let (t, n, k) = curve.tangent_normal_curvature(theta);
                tangents.push(t);
                normals.push(n);
                curvatures.push(k);
            }

            let max_curvature = thetas
                .iter()
                .map(|&t| curve.tangent_normal_curvature(t).2.abs())
                .fold(0.0f64, f64::max);

            let w = total_length / m as f64;
            Ok(BoundaryData {
                points,
                normals,
                tangents,
                arclengths: (0..m).map(|i| w * i as f64).collect(),
                arclength_weights: vec![w; m],
                curvatures,
                total_length,
                max_curvature,
                polar_angles,
                radius_coeffs: curve.coeffs,
            })
        }
    }
}

fn disk_boundary(radius: f64, m: usize) -> BoundaryData {
    let total_length = 2.0 * PI * radius;
    let w = total_length / m as f64;
    let thetas = fourier::angles(m);
    let points: Vec<[f64; 2]> = thetas
        .iter()
        .map(|&t| [radius * t.cos(), radius * t.sin()])
        .collect();
    let normals: Vec<[f64; 2]> = thetas.iter().map(|&t| [t.cos(), t.sin()]).collect();
    let tangents: Vec<[f64; 2]> = thetas.iter().map(|&t| [-t.sin(), t.cos()]).collect();
    BoundaryData {
        points,
        normals,
        tangents,
        arclengths: (0..m).map(|i| w * i as f64).collect(),
        arclength_weights: vec![w; m],
        curvatures: vec![1.0 / radius; m],
        total_length,
        max_curvature: 1.0 / radius,
        polar_angles: thetas,
        radius_coeffs: vec![Complex64::new(radius, 0.0)],
    }
}

impl BoundaryData {
    /// Curve point at arbitrary polar angle (trigonometric interpolation).
    pub fn point_at_angle(&self, theta: f64) -> [f64; 2] {
        let r = fourier::trig_interpolate(&self.radius_coeffs, theta);
        [r * theta.cos(), r * theta.sin()]
    }

    /// Tangent, outward normal and curvature at arbitrary polar angle.
    pub fn frame_at_angle(&self, theta: f64) -> ([f64; 2], [f64; 2], f64) {
        let curve = PolarCurve {
            coeffs: self.radius_coeffs.clone(),
        };
        curve.tangent_normal_curvature(theta)
    }

    /// Metric speed `|dγ/dθ|` at arbitrary polar angle.
    pub fn speed_at_angle(&self, theta: f64) -> f64 {
        let curve = PolarCurve {
            coeffs: self.radius_coeffs.clone(),
        };
        curve.speed(theta)
    }
}
