//! Variational upper bound from the semiclassical trial space: scaled
//! Bargmann polynomials recentred at the minimum, corrected by their Hardy
//! projections and cut off by the optimal boundary-layer profile.

use num_complex::Complex64;

use super::layer::boundary_layer;
use crate::error::{Error, Result};
use crate::numerics::fourier;
use crate::operators::{rayleigh_ritz_bound, DiscreteForm, FormKind};
use crate::potential::FluxPotential;
use crate::spaces::{BargmannBasis, HardyModel};

/// Rayleigh-Ritz bound for `λ_k` of the assembled weighted form using the
/// `k`-dimensional trial family
/// `w_n = h^{-1/2} P_n((z - z_min)/√h) - h^{-(1+n)/2} Q_n(z)`, `n < k`,
/// multiplied by the optimal boundary cutoff with `ε = h |ln h|`.
///
/// The trial vectors are sampled into the form's own discrete space, so the
/// returned value is a guaranteed upper bound for the form's `k`-th
/// eigenvalue.
pub fn trial_space_upper_bound(
    form: &DiscreteForm,
    potential: &FluxPotential,
    bargmann: &BargmannBasis,
    hardy: &HardyModel,
    k: usize,
    use_hardy_projection: bool,
) -> Result<f64> {
    if form.kind != FormKind::WeightedDbar {
        return Err(Error::InvalidArgument(
            "trial bound applies to the weighted dbar form".into(),
        ));
    }
    if k == 0 || bargmann.n_max + 1 < k {
        return Err(Error::InvalidArgument(format!(
            "trial order k = {k} outside the basis range"
        )));
    }
    let h = form.h;
    let eps = (h * h.ln().abs()).clamp(1e-6, 0.5);
    let n = form.radial_nodes.len();
    let m = form.theta_count;
    let thetas = fourier::angles(m);
    let sqrt_h = h.sqrt();
    let z_min = potential.z_min;

    // Angular cutoff rate 2 ∂_ň φ̌ / h per boundary node, resampled to the
    // form's angular grid.
    let dn = &potential.boundary_dn_disk;
    let dn_at = |i: usize| -> f64 {
        if dn.len() == m {
            dn[i]
        } else {
            // Nearest-node resample (boundary data is smooth).
            let idx = (i * dn.len()) / m;
            dn[idx]
        }
    };

    let projections: Vec<Option<crate::spaces::HardyProjection>> = (0..k)
        .map(|nn| {
            if use_hardy_projection {
                hardy.projection(nn, k).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<_>>()?;

    let mut trial = Vec::with_capacity(k);
    for (nn, proj) in projections.iter().enumerate() {
        // Value-space samples χ̌(y) w_n(F(y)).
        let mut values = vec![Complex64::new(0.0, 0.0); n * m];
        for (j, &r) in form.radial_nodes.iter().enumerate() {
            for (i, &th) in thetas.iter().enumerate() {
                let y = Complex64::from_polar(r, th);
                let z = potential.map.eval(y);
                let p = bargmann.eval(nn, (z - z_min) / sqrt_h) / sqrt_h;
                let q = match proj {
                    Some(pr) => {
                        pr.eval(&potential.map, z_min, y)
                            * h.powf(-(1.0 + nn as f64) / 2.0)
                    }
                    None => Complex64::new(0.0, 0.0),
                };
                let t = 1.0 - r;
                let chi = if t >= eps {
                    1.0
                } else {
                    let alpha = 2.0 * dn_at(i) / h;
                    boundary_layer(alpha, eps)?.eval(t)
                };
                values[j * m + i] = chi * (p - q);
            }
        }
        // Slot-major mode space (matching the assembly layout).
        let mut vec_modes = vec![Complex64::new(0.0, 0.0); n * m];
        for j in 0..n {
            let row: Vec<Complex64> = (0..m).map(|i| values[j * m + i]).collect();
            let coeffs = fourier::dft_coefficients(&row);
            for slot in 0..m {
                vec_modes[slot * n + j] = coeffs[slot];
            }
        }
        trial.push(vec_modes);
    }

    rayleigh_ritz_bound(form, &trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{assemble_weighted_dbar, solve_lowest};
    use crate::potential::{radial_solve, MagneticField};
    use crate::spaces::{bargmann_gram_schmidt, build_hardy_model};

    #[test]
    fn bound_dominates_solver_and_tracks_prediction() {
        let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
        let basis = bargmann_gram_schmidt(&p.hessian, 4).unwrap();
        let hardy = build_hardy_model(&p, 16).unwrap();
        let mut last_ratio = f64::INFINITY;
        for &h in &[0.3, 0.2, 0.15] {
            let form = assemble_weighted_dbar(&p, h, 128, 16).unwrap();
            let solved = solve_lowest(&form, 1).unwrap();
            let bound = trial_space_upper_bound(&form, &p, &basis, &hardy, 1, true).unwrap();
            assert!(
                bound >= solved.pairs[0].value * (1.0 - 1e-10),
                "h = {h}: bound {bound} below eigenvalue {}",
                solved.pairs[0].value
            );
            let predicted = (2.0 * (-0.25) / h).exp();
            let ratio = bound / predicted;
            assert!(
                ratio < last_ratio * (1.0 + 1e-9),
                "ratio not decreasing at h = {h}: {ratio} vs {last_ratio}"
            );
            last_ratio = ratio;
        }
        assert!(last_ratio < 3.0, "final ratio {last_ratio}");
    }

    #[test]
    fn radial_projection_toggle_is_inert() {
        let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
        let basis = bargmann_gram_schmidt(&p.hessian, 4).unwrap();
        let hardy = build_hardy_model(&p, 16).unwrap();
        let form = assemble_weighted_dbar(&p, 0.2, 96, 16).unwrap();
        let with = trial_space_upper_bound(&form, &p, &basis, &hardy, 2, true).unwrap();
        let without = trial_space_upper_bound(&form, &p, &basis, &hardy, 2, false).unwrap();
        assert!(
            (with - without).abs() < 1e-8 * with.abs(),
            "projection should vanish in the radial case: {with} vs {without}"
        );
    }
}
