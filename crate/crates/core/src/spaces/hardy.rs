//! Weighted Hardy boundary norm and distances to the subspaces of
//! functions vanishing to prescribed order at the potential minimum.
//!
//! The subspace basis is `(z - z_min)^k · y^j` with `y = F⁻¹(z)`, evaluated
//! on the boundary where `y = e^{it}`, so no map inversion is ever needed.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::FluxPotential;

/// Boundary quadrature model for the weighted Hardy norm
/// `N_H(u)² = ∫_{∂Ω} |u|² ∂_n φ ds`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardyModel {
    /// Physical boundary nodes `z_i = F(e^{i t_i})`.
    pub nodes: Vec<Complex64>,
    /// Unit-circle angles `t_i` (equispaced).
    pub angles: Vec<f64>,
    /// Quadrature weights `(2π/M) ∂_ň φ̌(t_i)`; all positive.
    pub weights: Vec<f64>,
    pub z_min: Complex64,
    /// Number of subspace basis functions minus one (`j = 0..=truncation`).
    pub truncation: usize,
}

/// Projection of `(z - z_min)^n` onto the order-`k` vanishing subspace.
#[derive(Debug, Clone)]
pub struct HardyProjection {
    pub n: usize,
    pub k: usize,
    /// Squared distance `N_H((z-z_min)^n - Q)²`.
    pub dist_sq: f64,
    /// Coefficients of `Q(z) = (z - z_min)^k Σ_j c_j y^j`.
    pub coefficients: Vec<Complex64>,
}

impl HardyProjection {
    /// Evaluate `Q` at a disk point `y` through the map (`z = F(y)`).
    pub fn eval(&self, map: &crate::geometry::ConformalMap, z_min: Complex64, y: Complex64) -> Complex64 {
        let z = map.eval(y);
        let mut poly = Complex64::new(0.0, 0.0);
        for &c in self.coefficients.iter().rev() {
            poly = poly * y + c;
        }
        (z - z_min).powu(self.k as u32) * poly
    }
}

/// Build the boundary model from a solved potential.
pub fn build_hardy_model(potential: &FluxPotential, truncation: usize) -> Result<HardyModel> {
    let m = potential.theta_count;
    let angles = crate::numerics::fourier::angles(m);
    let weights: Vec<f64> = potential
        .boundary_dn_disk
        .iter()
        .map(|&d| d * 2.0 * std::f64::consts::PI / m as f64)
        .collect();
    if let Some(w) = weights.iter().find(|&&w| !(w > 0.0)) {
        return Err(Error::Basis(format!(
            "nonpositive Hardy quadrature weight {w:.3e}"
        )));
    }
    if m < 4 * (truncation + 1) {
        return Err(Error::Basis(format!(
            "boundary resolution {m} too small for Hardy truncation {truncation}"
        )));
    }
    let nodes: Vec<Complex64> = angles
        .iter()
        .map(|&t| potential.map.eval(Complex64::from_polar(1.0, t)))
        .collect();
    Ok(HardyModel {
        nodes,
        angles,
        weights,
        z_min: potential.z_min,
        truncation,
    })
}

/// `N_H(u)²` for boundary samples aligned with the model nodes.
pub fn hardy_norm(samples: &[Complex64], model: &HardyModel) -> Result<f64> {
    if samples.len() != model.nodes.len() {
        return Err(Error::InvalidArgument(format!(
            "sample count {} does not match the {} boundary nodes",
            samples.len(),
            model.nodes.len()
        )));
    }
    Ok(samples
        .iter()
        .zip(&model.weights)
        .map(|(s, &w)| w * s.norm_sqr())
        .sum())
}

impl HardyModel {
    /// Weighted least-squares projection of `(z - z_min)^n` onto
    /// `span{(z - z_min)^k y^j, j = 0..=truncation}` via orthogonal
    /// factorization of the weighted Vandermonde-type matrix.
    pub fn projection(&self, n: usize, k: usize) -> Result<HardyProjection> {
        if self.truncation < k + 10 {
            return Err(Error::Basis(format!(
                "Hardy truncation {} too small for order {k} (need at least {})",
                self.truncation,
                k + 10
            )));
        }
        let m = self.nodes.len();
        let cols = self.truncation + 1;
        let sqw: Vec<f64> = self.weights.iter().map(|w| w.sqrt()).collect();
        let a = DMatrix::from_fn(m, cols, |i, j| {
            let zk = (self.nodes[i] - self.z_min).powu(k as u32);
            let yj = Complex64::from_polar(1.0, self.angles[i] * j as f64);
            zk * yj * sqw[i]
        });
        let rhs = DVector::from_fn(m, |i, _| {
            (self.nodes[i] - self.z_min).powu(n as u32) * sqw[i]
        });
        let svd = a.clone().svd(true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if smin <= 1e-13 * smax {
            return Err(Error::Basis(format!(
                "Hardy basis is rank deficient (σ_min/σ_max = {:.3e})",
                smin / smax
            )));
        }
        let coeffs = svd
            .solve(&rhs, 1e-13 * smax)
            .map_err(|e| Error::Basis(e.to_string()))?;
        let resid = &a * &coeffs - rhs;
        let dist_sq = resid.norm_squared();
        Ok(HardyProjection {
            n,
            k,
            dist_sq,
            coefficients: coeffs.iter().copied().collect(),
        })
    }
}

/// `dist_H((z - z_min)^{k-1}, H²_k(Ω))`.
pub fn hardy_distance(k: usize, model: &HardyModel) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("order k must be at least 1".into()));
    }
    Ok(model.projection(k - 1, k)?.dist_sq.sqrt())
}
