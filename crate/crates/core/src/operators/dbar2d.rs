//! Assembly of the weighted Cauchy-Riemann quadratic form on the pullback
//! polar grid: spectral in the angle, staggered (midpoint) differences in
//! the radius, parity conditions through the origin.
//!
//! The radial part of the shifted `∂̄` is evaluated at cell midpoints,
//! which keeps the discrete kernel faithful to the holomorphic one (node
//! collocation of first-derivative squares admits a spurious checkerboard
//! null vector). In mode space the operator shifts each angular mode up by
//! one, so the stiffness couples source modes `p, q` only through the
//! angular Fourier coefficients of the weight; radial weights decouple the
//! pencil into tridiagonal per-mode blocks.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DiscreteForm, FormKind, FormMatrices, ModeBlock};
use crate::error::{Error, Result};
use crate::numerics::banded::SymBanded;
use crate::numerics::fourier;
use crate::numerics::grid::RadialGrid;
use crate::numerics::signed_mode;
use crate::potential::FluxPotential;

/// Smallest admissible weight value; flooring keeps the mass matrix
/// positive definite when the Gaussian window underflows far from the
/// minimum.
const WEIGHT_FLOOR: f64 = 1e-290;

/// Nodes inside the cutoff layer demanded from the radial grid.
const LAYER_NODES: usize = 12;

/// Midpoint rings `ρ_t` between consecutive nodes, with the inner disk
/// center and the Dirichlet boundary midpoint included:
/// `ρ_0 = r_0/2`, `ρ_t = (r_{t-1}+r_t)/2`, `ρ_n = (r_{n-1}+1)/2`.
fn midpoint_rings(rs: &[f64]) -> Vec<f64> {
    let n = rs.len();
    let mut mids = Vec::with_capacity(n + 1);
    mids.push(0.5 * rs[0]);
    for t in 1..n {
        mids.push(0.5 * (rs[t - 1] + rs[t]));
    }
    mids.push(0.5 * (rs[n - 1] + 1.0));
    mids
}

/// Annular measures `∫ r dr` of the staggered intervals
/// `[0, r_0], [r_0, r_1], …, [r_{n-1}, 1]`.
fn interval_measures(rs: &[f64]) -> Vec<f64> {
    let n = rs.len();
    let mut q = Vec::with_capacity(n + 1);
    q.push(0.5 * rs[0] * rs[0]);
    for t in 1..n {
        q.push(0.5 * (rs[t] * rs[t] - rs[t - 1] * rs[t - 1]));
    }
    q.push(0.5 * (1.0 - rs[n - 1] * rs[n - 1]));
    q
}

/// Staggered radial factor of the shifted `∂̄` for mode `m`: a bidiagonal
/// `(n+1) × n` map from node values to midpoint values,
/// `(Zf)_t = (1/2)[(f_t - f_{t-1})/Δ_t - (m/ρ_t)(f_t + f_{t-1})/2]`,
/// with `f_{-1}` the center value (parity) and `f_n = 0` (Dirichlet).
struct ModeDbar {
    /// `lo[t] = Z[t][t-1]`, `hi[t] = Z[t][t]` for rows `t = 0..=n`
    /// (entries referring to out-of-range columns are zero).
    lo: Vec<f64>,
    hi: Vec<f64>,
}

fn mode_dbar(rs: &[f64], mids: &[f64], m: i64) -> ModeDbar {
    let n = rs.len();
    let mf = m as f64;
    let mut lo = vec![0.0; n + 1];
    let mut hi = vec![0.0; n + 1];
    // Row 0: inner disk; center value is f_0 for the flat mode, else 0.
    if m == 0 {
        hi[0] = 0.0;
    } else {
        // (1/2)[f_0/r_0 - (m/(r_0/2))·(f_0/2)] = (1/2)(1 - m) f_0 / r_0.
        hi[0] = 0.5 * (1.0 - mf) / rs[0];
    }
    for t in 1..n {
        let dt = rs[t] - rs[t - 1];
        let ang = 0.5 * mf / mids[t];
        lo[t] = 0.5 * (-1.0 / dt - ang);
        hi[t] = 0.5 * (1.0 / dt - ang);
    }
    // Boundary row: f at r = 1 vanishes.
    let dt = 1.0 - rs[n - 1];
    lo[n] = 0.5 * (-1.0 / dt - 0.5 * mf / mids[n]);
    ModeDbar { lo, hi }
}

/// Assemble the weighted `∂̄` form at semiclassical parameter `h`.
///
/// The numerator discretizes `4h² ∫ e^{-2(φ-φ_min)/h} |∂̄v|²` and the mass
/// `∫ e^{-2(φ-φ_min)/h} |F'|² |v|²`, both over the pullback disk, with
/// Dirichlet rows eliminated. Generalized eigenvalues are the physical
/// `λ_k(h)`.
pub fn assemble_weighted_dbar(
    potential: &FluxPotential,
    h: f64,
    n_r: usize,
    n_theta: usize,
) -> Result<DiscreteForm> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("h = {h} must be positive")));
    }
    if !n_theta.is_multiple_of(2) || n_theta < 8 {
        return Err(Error::Assembly(format!(
            "angular resolution {n_theta} must be even and at least 8"
        )));
    }
    let mut warnings = Vec::new();

    // Boundary-layer-resolving radial grid.
    let dn_min = potential
        .boundary_dn_disk
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    let layer = (h / dn_min).min(0.5);
    let grid = match RadialGrid::clustered(n_r, layer, LAYER_NODES) {
        Ok(g) => g,
        Err(e) => {
            warnings.push(format!(
                "boundary layer under-resolved: {e}; falling back to strong clustering"
            ));
            RadialGrid::with_sigma(n_r, 12.0)
        }
    };
    let rs = grid.nodes.clone();
    let n = rs.len();
    let m = n_theta;
    let thetas = fourier::angles(m);
    let mids = midpoint_rings(&rs);
    let measures = interval_measures(&rs);

    // Weight tables: numerator at midpoint rings, mass at node rings.
    let inv_h2 = 2.0 / h;
    let mut floored = false;
    let mut weight = |r: f64, th: f64| -> f64 {
        let phi = potential.eval_disk(r, th);
        let w = (-(phi - potential.phi_min) * inv_h2).exp();
        if w < WEIGHT_FLOOR {
            floored = true;
            WEIGHT_FLOOR
        } else {
            w
        }
    };
    let mut weight_num = vec![0.0f64; (n + 1) * m];
    for (t, &rho) in mids.iter().enumerate() {
        for (i, &th) in thetas.iter().enumerate() {
            weight_num[t * m + i] = weight(rho, th);
        }
    }
    let mut weight_mass = vec![0.0f64; n * m];
    for (j, &r) in rs.iter().enumerate() {
        for (i, &th) in thetas.iter().enumerate() {
            let fp = potential.map.deriv(Complex64::from_polar(r, th)).norm_sqr();
            weight_mass[j * m + i] = weight(r, th) * fp;
        }
    }
    if floored {
        warnings.push(format!(
            "weight window underflows double precision at h = {h}; \
             far-field weights floored at {WEIGHT_FLOOR:e}"
        ));
    }

    // Angular Fourier coefficients per ring.
    let fft_rows = |table: &[f64], rows: usize| -> Vec<Vec<Complex64>> {
        (0..rows)
            .map(|j| {
                let row: Vec<Complex64> = (0..m)
                    .map(|i| Complex64::new(table[j * m + i], 0.0))
                    .collect();
                fourier::dft_coefficients(&row)
            })
            .collect()
    };
    let wn_hat = fft_rows(&weight_num, n + 1);
    let wm_hat = fft_rows(&weight_mass, n);

    // Decoupling test: any angular variation in either weight?
    let mut coupled = false;
    'outer: for j in 0..n + 1 {
        let base = wn_hat[j][0].norm().max(1e-300);
        for slot in 1..m {
            if wn_hat[j][slot].norm() > 1e-13 * base {
                coupled = true;
                break 'outer;
            }
        }
        if j < n {
            let base = wm_hat[j][0].norm().max(1e-300);
            for slot in 1..m {
                if wm_hat[j][slot].norm() > 1e-13 * base {
                    coupled = true;
                    break 'outer;
                }
            }
        }
    }

    let two_pi = 2.0 * std::f64::consts::PI;
    let scale_num = 4.0 * h * h * two_pi;

    let matrices = if !coupled {
        // Radial weight: tridiagonal per-mode pencils.
        let mut blocks = Vec::with_capacity(m);
        for slot in 0..m {
            let mode = signed_mode(slot, m);
            let z = mode_dbar(&rs, &mids, mode);
            let mut stiffness = SymBanded::zeros(n, 1);
            for t in 0..=n {
                let c = scale_num * measures[t] * wn_hat[t][0].re;
                let pairs = [(t.wrapping_sub(1), z.lo[t]), (t, if t < n { z.hi[t] } else { 0.0 })];
                for &(a, va) in &pairs {
                    if va == 0.0 || a >= n {
                        continue;
                    }
                    for &(b, vb) in &pairs {
                        if vb == 0.0 || b >= n || b < a {
                            continue;
                        }
                        stiffness.add(a, b, c * va * vb);
                    }
                }
            }
            let mut mass = SymBanded::zeros(n, 0);
            for j in 0..n {
                mass.add(j, j, two_pi * grid.cell_weights[j] * wm_hat[j][0].re);
            }
            blocks.push(ModeBlock {
                mode,
                stiffness,
                mass,
                dof_nodes: rs.clone(),
            });
        }
        FormMatrices::Modes(blocks)
    } else {
        // Coupled weight: dense Hermitian pencil, slot-major layout.
        let dim = n * m;
        let mut s = DMatrix::<Complex64>::zeros(dim, dim);
        let mut mass = DMatrix::<Complex64>::zeros(dim, dim);
        let zs: Vec<ModeDbar> = (0..m)
            .map(|slot| mode_dbar(&rs, &mids, signed_mode(slot, m)))
            .collect();
        for p in 0..m {
            for q in 0..m {
                let dslot = (p + m - q) % m;
                for t in 0..=n {
                    let c = wn_hat[t][dslot] * (scale_num * measures[t]);
                    if c.norm() == 0.0 {
                        continue;
                    }
                    let pa = [
                        (t.wrapping_sub(1), zs[p].lo[t]),
                        (t, if t < n { zs[p].hi[t] } else { 0.0 }),
                    ];
                    let pb = [
                        (t.wrapping_sub(1), zs[q].lo[t]),
                        (t, if t < n { zs[q].hi[t] } else { 0.0 }),
                    ];
                    for &(a, va) in &pa {
                        if va == 0.0 || a >= n {
                            continue;
                        }
                        for &(b, vb) in &pb {
                            if vb == 0.0 || b >= n {
                                continue;
                            }
                            s[(p * n + a, q * n + b)] += c * va * vb;
                        }
                    }
                }
                for j in 0..n {
                    let c = wm_hat[j][dslot] * (two_pi * grid.cell_weights[j]);
                    if c.norm() > 0.0 {
                        mass[(p * n + j, q * n + j)] += c;
                    }
                }
            }
        }
        // Hermitian cleanup of rounding asymmetry.
        let sh = (s.clone() + s.adjoint()) * Complex64::new(0.5, 0.0);
        let mh = (mass.clone() + mass.adjoint()) * Complex64::new(0.5, 0.0);
        FormMatrices::Dense {
            stiffness: sh,
            mass: mh,
            slot_modes: (0..m).map(|slot| signed_mode(slot, m)).collect(),
        }
    };

    Ok(DiscreteForm {
        kind: FormKind::WeightedDbar,
        matrices,
        h,
        exponent_shift: 2.0 * potential.phi_min / h,
        radial_nodes: rs,
        cell_weights: grid.cell_weights,
        theta_count: m,
        weight_num,
        weight_mass,
        warnings,
    })
}
