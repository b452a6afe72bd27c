//! Cross-operator reports: the constant-field shift between the magnetic
//! Laplacian and the Pauli spin-down component, and ground-state
//! concentration around the potential minimum.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_legendre;
use crate::operators::{
    assemble_magnetic_laplacian, assemble_pauli_minus, radial_mode_solver, solve_lowest,
    DiscreteForm, EigenVector, FormKind, FormMatrices, SpectralResult,
};
use crate::potential::{FluxPotential, MagneticField};

/// Constant-field shift verification data.
#[derive(Debug, Clone)]
pub struct ShiftCheck {
    pub h: f64,
    pub b: f64,
    /// Largest relative entrywise defect of `S_lap - S_pauli - hB·M`.
    pub entry_defect: f64,
    /// Certified eigenvalue transfer error: with `|Δ| ≤ e·hB·|M|` entrywise
    /// and a positive tridiagonal mass, generalized eigenvalues move by at
    /// most `6·e·hB`.
    pub certified_shift_error: f64,
    /// `λ_k` of the Pauli form (equals `μ_k - hB` by the matrix identity).
    pub lambda: Vec<f64>,
    /// `μ_k` from an independent solve of the Laplacian form.
    pub mu_independent: Vec<f64>,
    /// Worst `|μ_k - λ_k - hB|` across the independent solves.
    pub independent_gap: f64,
}

/// Verify `μ_k = λ_k + hB` for a constant field by the exact matrix shift,
/// and cross-check with independent eigensolves of both pencils.
pub fn laplacian_shift_check(
    potential: &FluxPotential,
    h: f64,
    k: usize,
    n_elem: usize,
    modes: (i64, i64),
) -> Result<ShiftCheck> {
    // The exact shift identity needs a constant field.
    let profile = potential
        .field
        .radial_profile()
        .ok_or_else(|| Error::InvalidArgument("constant field required".into()))?;
    let b = profile(0.0);
    for i in 0..=64 {
        let r = potential.radial.as_ref().map_or(1.0, |r| r.radius) * i as f64 / 64.0;
        if (profile(r) - b).abs() > 1e-14 * b.abs() {
            return Err(Error::InvalidArgument(
                "shift check requires a constant field".into(),
            ));
        }
    }

    let pauli = assemble_pauli_minus(potential, h, n_elem, modes)?;
    let lap = assemble_magnetic_laplacian(potential, h, n_elem, modes)?;
    let (FormMatrices::Modes(pb), FormMatrices::Modes(lb)) = (&pauli.matrices, &lap.matrices)
    else {
        return Err(Error::Assembly("expected mode-decoupled forms".into()));
    };

    // Entrywise defect of S_lap - S_pauli - hB·M against the local entry
    // scale: the floating-point rendering of "same matrices up to an exact
    // diagonal shift" (large centrifugal entries set the local ulp).
    let mut entry_defect = 0.0f64;
    for (bp, bl) in pb.iter().zip(lb.iter()) {
        for d in 0..=1usize {
            for i in 0..bp.stiffness.bands[d].len() {
                let delta = bl.stiffness.bands[d][i] - bp.stiffness.bands[d][i];
                let want = h * b * bp.mass.bands[d][i];
                let scale = bl.stiffness.bands[d][i]
                    .abs()
                    .max(bp.stiffness.bands[d][i].abs())
                    .max(want.abs())
                    .max(1e-300);
                entry_defect = entry_defect.max((delta - want).abs() / scale);
            }
        }
    }
    let certified_shift_error = 6.0 * entry_defect * h * b;

    let lam = solve_lowest(&pauli, k)?;
    let mu = solve_lowest(&lap, k)?;
    let lambda: Vec<f64> = lam.pairs.iter().map(|p| p.value).collect();
    let mu_independent: Vec<f64> = mu.pairs.iter().map(|p| p.value).collect();
    let independent_gap = lambda
        .iter()
        .zip(&mu_independent)
        .map(|(l, m)| (m - l - h * b).abs())
        .fold(0.0, f64::max);

    Ok(ShiftCheck {
        h,
        b,
        entry_defect,
        certified_shift_error,
        lambda,
        mu_independent,
        independent_gap,
    })
}

/// Weighted ground-state mass fraction inside the ball
/// `|x - x_min| ≤ h^alpha`, from a solved weighted-form result.
/// Returns `(fraction, clipped)`; `clipped` is set when the ball sticks out
/// of the domain.
pub fn concentration_report(
    form: &DiscreteForm,
    result: &SpectralResult,
    potential: &FluxPotential,
    alpha: f64,
) -> Result<(f64, bool)> {
    if form.kind != FormKind::WeightedDbar {
        return Err(Error::InvalidArgument(
            "concentration is reported for the weighted form".into(),
        ));
    }
    let rho = form.h.powf(alpha);
    let ground = result
        .pairs
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty spectral result".into()))?;

    // Ball-exit check via the boundary distance in the disk picture.
    let dist_to_boundary = 1.0 - potential.y_min[0].hypot(potential.y_min[1]);
    let clipped = rho >= dist_to_boundary * potential.map.c1.max(1e-300);

    let n = form.radial_nodes.len();
    let m = form.theta_count;
    let thetas = crate::numerics::fourier::angles(m);
    let x_min = potential.x_min;
    let in_ball = |r: f64, th: f64| -> bool {
        let z = potential.map.eval(Complex64::from_polar(r, th));
        (z.re - x_min[0]).hypot(z.im - x_min[1]) <= rho
    };

    let (mut inside, mut total) = (0.0f64, 0.0f64);
    match &ground.vector {
        EigenVector::Radial(f) => {
            // Single angular mode: |v(r,θ)|² = |f(r)|².
            let mode = ground.mode.unwrap_or(0);
            let _ = mode;
            for j in 0..n {
                let w = form.cell_weights[j];
                for (i, &th) in thetas.iter().enumerate() {
                    let cell = w * form.weight_mass[j * m + i] / m as f64;
                    let massj = cell * f[j] * f[j];
                    total += massj;
                    if in_ball(form.radial_nodes[j], th) {
                        inside += massj;
                    }
                }
            }
        }
        EigenVector::Full(v) => {
            // Slot-major; reconstruct nodal values per ring.
            for j in 0..n {
                let coeffs: Vec<Complex64> = (0..m).map(|slot| v[slot * n + j]).collect();
                let row = crate::numerics::fourier::dft_values(&coeffs);
                let w = form.cell_weights[j];
                for (i, &th) in thetas.iter().enumerate() {
                    let cell = w * form.weight_mass[j * m + i] / m as f64;
                    let massj = cell * row[i].norm_sqr();
                    total += massj;
                    if in_ball(form.radial_nodes[j], th) {
                        inside += massj;
                    }
                }
            }
        }
    }
    if total <= 0.0 {
        return Err(Error::EigenSolve("ground state has no mass".into()));
    }
    Ok((inside / total, clipped))
}

/// Concentration fraction for radial fields on a disk straight from the
/// separated-variables ground state, with elementwise quadrature.
pub fn radial_concentration(
    field: &MagneticField,
    radius: f64,
    h: f64,
    alpha: f64,
    n_elem: usize,
) -> Result<(f64, bool)> {
    let rho = h.powf(alpha);
    let clipped = rho >= radius;
    let res = radial_mode_solver(field, radius, h, 1, (-2, 3), n_elem)?;
    let ground = &res.pairs[0];
    let EigenVector::Radial(f) = &ground.vector else {
        return Err(Error::EigenSolve("expected a radial ground state".into()));
    };
    let mode = ground.mode.unwrap_or(0);
    let rad_potential = crate::potential::radial_solve(field, radius)?;
    let rad = rad_potential.radial.as_ref().expect("radial data");

    // Rebuild the mesh the solver used; dof 0 is the center for mode 0.
    let layer = (h / rad.dn_boundary).min(0.4 * radius);
    let mesh = crate::operators::clustered_mesh(n_elem, radius, layer, 12)?;
    let center_dof = mode == 0;
    let value_at_point = |i: usize| -> f64 {
        // mesh point index -> dof value (Dirichlet zeros at the ends).
        if i == mesh.len() - 1 {
            0.0
        } else if i == 0 {
            if center_dof {
                f[0]
            } else {
                0.0
            }
        } else {
            f[if center_dof { i } else { i - 1 }]
        }
    };

    let (gx, gw) = gauss_legendre(4);
    let inv_h2 = 2.0 / h;
    let (mut inside, mut total) = (0.0f64, 0.0f64);
    for e in 0..mesh.len() - 1 {
        let (xl, xr) = (mesh[e], mesh[e + 1]);
        let (fl, fr) = (value_at_point(e), value_at_point(e + 1));
        let dx = xr - xl;
        for g in 0..gx.len() {
            let r = 0.5 * (xl + xr) + 0.5 * dx * gx[g];
            let w = 0.5 * dx * gw[g];
            let weight = (-(rad.phi_at(r) - rad.phi_center) * inv_h2).exp();
            let val = fl * (xr - r) / dx + fr * (r - xl) / dx;
            let massj = w * weight * val * val * r;
            total += massj;
            if r <= rho {
                inside += massj;
            }
        }
    }
    Ok((inside / total.max(f64::MIN_POSITIVE), clipped))
}
