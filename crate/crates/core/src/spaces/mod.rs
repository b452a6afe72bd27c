//! The two weighted function-space norms behind the spectral constants:
//! the anisotropic Segal-Bargmann norm (Gaussian weight built from the
//! Hessian of the potential at its minimum) and the weighted Hardy boundary
//! norm (weight `∂_n φ`), together with the Szegő projection and the
//! boundary symmetry ratio `θ₀`.

mod bargmann;
mod hardy;

pub use bargmann::{bargmann_gram_schmidt, BargmannBasis};
pub use hardy::{build_hardy_model, hardy_distance, hardy_norm, HardyModel, HardyProjection};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::FluxPotential;

/// Szegő projection onto nonnegative Fourier modes: entries with negative
/// index are zeroed, the rest pass through unchanged.
pub fn szego_project(coeffs: &[(i64, num_complex::Complex64)]) -> Vec<(i64, num_complex::Complex64)> {
    coeffs
        .iter()
        .map(|&(n, c)| {
            if n < 0 {
                (n, num_complex::Complex64::new(0.0, 0.0))
            } else {
                (n, c)
            }
        })
        .collect()
}

/// Boundary symmetry data entering the lower-bound constant: the ratio of the
/// boundary minimum to the boundary maximum of `|F'(y)| ∂_n φ(F(y))`, plus
/// the minimum itself.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BoundarySymmetry {
    /// `θ₀ ∈ (0, 1]`.
    pub theta0: f64,
    /// `E = min_{∂D} |F'| ∂_n φ ∘ F`.
    pub e_min: f64,
    pub e_max: f64,
}

/// Compute `θ₀` and `E` from the solved potential's boundary samples.
pub fn theta0(potential: &FluxPotential) -> Result<BoundarySymmetry> {
    let samples = potential.boundary_symmetry_samples();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &s in samples {
        if !(s > 0.0) {
            return Err(Error::FieldHypothesis(format!(
                "boundary weight sample {s:.3e} is not positive (Hopf violation)"
            )));
        }
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok(BoundarySymmetry {
        theta0: lo / hi,
        e_min: lo,
        e_max: hi,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn szego_filters_negative_modes() {
        let inp = vec![
            (-1i64, Complex64::new(1.0, 0.0)),
            (0, Complex64::new(3.0, 0.0)),
            (2, Complex64::new(1.0, 0.0)),
        ];
        let out = szego_project(&inp);
        assert_eq!(out[0].1.norm(), 0.0);
        assert_eq!(out[1].1, inp[1].1);
        assert_eq!(out[2].1, inp[2].1);
        // Idempotent and a fixed point on nonnegative input.
        let twice = szego_project(&out);
        assert_eq!(twice, out);
    }

    #[test]
    fn szego_is_an_orthogonal_projection() {
        let inp: Vec<(i64, Complex64)> = (-6..=6)
            .map(|n| (n, Complex64::new(n as f64 * 0.3 + 1.0, (n * n) as f64 * 0.1)))
            .collect();
        let plus = szego_project(&inp);
        let total: f64 = inp.iter().map(|(_, c)| c.norm_sqr()).sum();
        let kept: f64 = plus.iter().map(|(_, c)| c.norm_sqr()).sum();
        let dropped: f64 = inp
            .iter()
            .zip(plus.iter())
            .map(|((_, a), (_, b))| (a - b).norm_sqr())
            .sum();
        assert!((total - kept - dropped).abs() < 1e-12 * total);
    }

    #[test]
    fn theta0_radial_is_one() {
        let p = crate::potential::radial_solve(&crate::potential::MagneticField::constant(1.0), 1.0)
            .unwrap();
        let sym = theta0(&p).unwrap();
        assert_eq!(sym.theta0, 1.0);
        assert!((sym.e_min - 0.5).abs() < 1e-12);
    }

    #[test]
    fn theta0_dilated_disk() {
        let p = crate::potential::radial_solve(&crate::potential::MagneticField::constant(1.0), 2.0)
            .unwrap();
        let sym = theta0(&p).unwrap();
        assert_eq!(sym.theta0, 1.0);
        // E = |F'| ∂_nφ = R · R/2 = 2.
        assert!((sym.e_min - 2.0).abs() < 1e-12);
    }
}
