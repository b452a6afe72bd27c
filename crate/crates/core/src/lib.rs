//! Numerical laboratory for the low-lying spectrum of the semiclassical
//! Dirichlet-Pauli operator on bounded planar domains.
//!
//! The crate builds every ingredient of the sharp eigenvalue law
//! `lambda_k(h) ~ C(k) h^{1-k} exp(2 phi_min / h)`:
//!
//! * [`geometry`] — domains, boundary parametrizations, tubular collars and
//!   the numerical biholomorphism from the unit disk;
//! * [`potential`] — the gauge Poisson problem `Δφ = B`, `φ|∂Ω = 0` and its
//!   landscape (minimum, Hessian, normal derivative, flux);
//! * [`spaces`] — weighted Segal-Bargmann polynomials, the weighted Hardy
//!   boundary norm, distances to vanishing-order subspaces and the boundary
//!   symmetry ratio `θ₀`;
//! * [`operators`] — discrete weighted Cauchy-Riemann and Pauli quadratic
//!   forms, their eigensolvers and the radial separated-variables oracle;
//! * [`asymptotics`] — closed-form constants, predictions, boundary-layer
//!   profiles, variational trial-space bounds and concentration reports.

pub mod asymptotics;
pub mod error;
pub mod geometry;
pub mod numerics;
pub mod operators;
pub mod potential;
pub mod spaces;

pub use error::{Error, Result};

pub use nalgebra;
pub use num_complex;
