//! The gauge Poisson problem `Δφ = B` on `Ω` with `φ = 0` on `∂Ω`, and the
//! landscape quantities the spectral asymptotics are built from: the
//! minimum `φ_min` and its location, the Hessian there, the boundary normal
//! derivative `∂_n φ` and the flux `Φ`.

mod landscape;
mod radial;
mod solver;

pub use landscape::landscape;
pub use radial::{potential_from_radial_data, radial_solve};
pub use solver::{solve_flux_potential, solve_flux_potential_with_map};

use nalgebra::Matrix2;
use num_complex::Complex64;
use std::fmt;
use std::sync::Arc;

use crate::geometry::ConformalMap;
use crate::numerics::{interp, signed_mode};

/// Positive magnetic field on the closure of the domain.
#[derive(Clone)]
pub struct MagneticField {
    eval: Arc<dyn Fn([f64; 2]) -> f64 + Send + Sync>,
    radial: Option<Arc<dyn Fn(f64) -> f64 + Send + Sync>>,
    descriptor: String,
}

impl MagneticField {
    pub fn constant(b: f64) -> Self {
        MagneticField {
            eval: Arc::new(move |_| b),
            radial: Some(Arc::new(move |_| b)),
            descriptor: format!("constant:{b:.17e}"),
        }
    }

    /// Radial profile `B(ρ)` with `ρ` the distance to the origin.
    pub fn radial(descriptor: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        let f = Arc::new(f);
        let g = f.clone();
        MagneticField {
            eval: Arc::new(move |x: [f64; 2]| g(x[0].hypot(x[1]))),
            radial: Some(f),
            descriptor: format!("radial:{}", descriptor.into()),
        }
    }

    /// General planar field `B(x1, x2)`.
    pub fn planar(descriptor: impl Into<String>, f: impl Fn([f64; 2]) -> f64 + Send + Sync + 'static) -> Self {
        MagneticField {
            eval: Arc::new(f),
            radial: None,
            descriptor: format!("planar:{}", descriptor.into()),
        }
    }

    pub fn eval(&self, x: [f64; 2]) -> f64 {
        (self.eval)(x)
    }

    pub fn radial_profile(&self) -> Option<&(dyn Fn(f64) -> f64 + Send + Sync)> {
        self.radial.as_deref()
    }

    pub fn is_radial(&self) -> bool {
        self.radial.is_some()
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
}

impl fmt::Debug for MagneticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MagneticField({})", self.descriptor)
    }
}

/// High-accuracy radial solution data on a disk of radius `R`.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct RadialData {
    pub radius: f64,
    pub rs: Vec<f64>,
    pub phi: Vec<f64>,
    pub dphi: Vec<f64>,
    pub phi_center: f64,
    pub dn_boundary: f64,
    pub flux: f64,
    pub b_center: f64,
}

impl RadialData {
    pub fn phi_at(&self, rho: f64) -> f64 {
        let rho = rho.clamp(0.0, self.radius);
        interp::lagrange_local(&self.rs, &self.phi, rho, 6)
    }

    pub fn dphi_at(&self, rho: f64) -> f64 {
        let rho = rho.clamp(0.0, self.radius);
        interp::lagrange_local(&self.rs, &self.dphi, rho, 6)
    }
}

/// Solved gauge potential with its landscape data.
///
/// All grid data live in the disk picture: the potential is pulled back
/// through the conformal map `F`, so `values[(j, i)]` is `φ̌(r_j, θ_i) =
/// φ(F(r_j e^{iθ_i}))` and the pencil weights downstream are built from
/// these values. Physical landscape quantities (`x_min`, `hessian`,
/// `∂_n φ`) are transformed back through `F`.
#[derive(Debug, Clone)]
pub struct FluxPotential {
    /// Interior radial nodes of the disk-picture grid (ascending).
    pub radial_nodes: Vec<f64>,
    /// Number of equispaced angular nodes.
    pub theta_count: usize,
    /// Fourier mode table `φ̂_m(r_j)`, slot-major.
    pub modes: Vec<Vec<Complex64>>,
    /// Nodal values `φ̌(r_j, θ_i)`, index `j * theta_count + i`.
    pub values: Vec<f64>,
    /// `∂_ň φ̌` on the unit circle at the angular nodes.
    pub boundary_dn_disk: Vec<f64>,
    /// `∂_n φ` at the physical boundary nodes `F(e^{iθ_i})`.
    pub boundary_dn_physical: Vec<f64>,
    pub phi_min: f64,
    /// Minimizer in disk coordinates.
    pub y_min: [f64; 2],
    /// Minimizer in physical coordinates.
    pub x_min: [f64; 2],
    pub z_min: Complex64,
    /// Hessian of `φ` at `x_min` (physical coordinates).
    pub hessian: Matrix2<f64>,
    /// Hessian of `φ̌` at `y_min` (disk coordinates).
    pub hessian_disk: Matrix2<f64>,
    /// `Φ = (1/2π) ∫_Ω B`.
    pub flux: f64,
    /// `(1/2π) ∫_{∂Ω} ∂_n φ`, for the flux-consistency diagnostic.
    pub flux_boundary: f64,
    pub map: ConformalMap,
    pub field: MagneticField,
    pub radial: Option<RadialData>,
    /// Grid minimum of the physical field.
    pub b0: f64,
    /// Linear-solve residual `‖Δφ̌ − B̌‖_∞` on the interior nodes.
    pub solve_residual: f64,
    pub warnings: Vec<String>,
}

impl FluxPotential {
    /// Evaluate `φ̌` anywhere on the closed unit disk.
    ///
    /// Radial interpolation is local cubic with a parity-correct extension
    /// through the origin and the exact zero boundary value at `r = 1`.
    pub fn eval_disk(&self, r: f64, theta: f64) -> f64 {
        if let Some(rad) = &self.radial {
            return rad.phi_at(r.min(1.0) * rad.radius);
        }
        let m = self.theta_count;
        let mut acc = Complex64::new(0.0, 0.0);
        for (slot, mode) in self.modes.iter().enumerate() {
            let k = signed_mode(slot, m);
            let f = self.mode_at(mode, k, r);
            acc += f * Complex64::new(0.0, k as f64 * theta).exp();
        }
        acc.re
    }

    /// Disk-picture gradient `(∂_r φ̌, (1/r) ∂_θ φ̌)`.
    pub fn gradient_disk(&self, r: f64, theta: f64) -> [f64; 2] {
        if let Some(rad) = &self.radial {
            return [rad.dphi_at(r * rad.radius) * rad.radius, 0.0];
        }
        let m = self.theta_count;
        let mut dr = Complex64::new(0.0, 0.0);
        let mut dth = Complex64::new(0.0, 0.0);
        for (slot, mode) in self.modes.iter().enumerate() {
            let k = signed_mode(slot, m);
            let phase = Complex64::new(0.0, k as f64 * theta).exp();
            dr += self.mode_deriv_at(mode, k, r) * phase;
            dth += self.mode_at(mode, k, r) * Complex64::new(0.0, k as f64) * phase;
        }
        [dr.re, dth.re / r.max(1e-12)]
    }

    fn mode_at(&self, mode: &[Complex64], k: i64, r: f64) -> Complex64 {
        let re: Vec<f64> = mode.iter().map(|c| c.re).collect();
        let im: Vec<f64> = mode.iter().map(|c| c.im).collect();
        Complex64::new(
            self.interp_radial(&re, k, r, false),
            self.interp_radial(&im, k, r, false),
        )
    }

    fn mode_deriv_at(&self, mode: &[Complex64], k: i64, r: f64) -> Complex64 {
        let re: Vec<f64> = mode.iter().map(|c| c.re).collect();
        let im: Vec<f64> = mode.iter().map(|c| c.im).collect();
        Complex64::new(
            self.interp_radial(&re, k, r, true),
            self.interp_radial(&im, k, r, true),
        )
    }

    fn interp_radial(&self, vals: &[f64], k: i64, r: f64, deriv: bool) -> f64 {
        // Extended node table: parity mirror through 0, Dirichlet 0 at r=1.
        let n = self.radial_nodes.len();
        let pad = 3.min(n);
        let mut xs = Vec::with_capacity(n + pad + 1);
        let mut ys = Vec::with_capacity(n + pad + 1);
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for p in (0..pad).rev() {
            xs.push(-self.radial_nodes[p]);
            ys.push(sign * vals[p]);
        }
        xs.extend_from_slice(&self.radial_nodes);
        ys.extend_from_slice(vals);
        xs.push(1.0);
        ys.push(0.0);
        if deriv {
            interp::lagrange_local_deriv(&xs, &ys, r, 4)
        } else {
            interp::lagrange_local(&xs, &ys, r, 4)
        }
    }

    /// Nodal value by index.
    pub fn value(&self, j: usize, i: usize) -> f64 {
        self.values[j * self.theta_count + i]
    }

    /// `θ₀`-style boundary data: `|F'(y)| ∂_n φ(F(y)) = ∂_ň φ̌(y)`.
    pub fn boundary_symmetry_samples(&self) -> &[f64] {
        &self.boundary_dn_disk
    }
}
