//! Direct assembly of the Pauli spin-down and magnetic-Laplacian quadratic
//! forms on disks with radial fields (azimuthal gauge potential), per
//! angular mode with linear finite elements. The unweighted mass makes the
//! constant-field shift between the two forms an exact matrix identity.

use super::{DiscreteForm, FormKind, FormMatrices, ModeBlock};
use crate::error::{Error, Result};
use crate::numerics::banded::SymBanded;
use crate::numerics::quadrature::gauss_legendre;
use crate::potential::FluxPotential;

fn assemble_disk_form(
    potential: &FluxPotential,
    h: f64,
    n_elem: usize,
    modes: (i64, i64),
    subtract_field_term: bool,
) -> Result<DiscreteForm> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("h = {h} must be positive")));
    }
    let rad = potential.radial.as_ref().ok_or_else(|| {
        Error::Assembly(
            "direct Pauli assembly supports radial fields on disks; use the \
             gauge-equivalent weighted form for general domains"
                .into(),
        )
    })?;
    let profile = potential
        .field
        .radial_profile()
        .ok_or_else(|| Error::Assembly("radial field profile required".into()))?;
    let radius = rad.radius;

    // Eigenfunctions of these forms carry the e^{-(φ-φ_min)/h} window, so
    // the mesh needs the same boundary-layer clustering as the weighted
    // form.
    let layer = (h / rad.dn_boundary).min(0.4 * radius);
    let mesh = super::radial_modes::clustered_mesh(n_elem, radius, layer, 12)?;

    let (glx, glw) = gauss_legendre(4);
    let (lo, hi) = modes;
    let mut blocks = Vec::new();
    for m in lo..=hi {
        let n_pts = mesh.len() - 1;
        let center_dof = m == 0;
        let ndof = if center_dof { n_pts } else { n_pts - 1 };
        let dof_of_point = |i: usize| -> Option<usize> {
            if i == n_pts {
                None
            } else if i == 0 {
                if center_dof {
                    Some(0)
                } else {
                    None
                }
            } else {
                Some(if center_dof { i } else { i - 1 })
            }
        };
        let mut stiffness = SymBanded::zeros(ndof, 1);
        let mut mass = SymBanded::zeros(ndof, 1);
        for e in 0..n_pts {
            let (xl, xr) = (mesh[e], mesh[e + 1]);
            let dx = xr - xl;
            let mut ke = [[0.0f64; 2]; 2];
            let mut me = [[0.0f64; 2]; 2];
            for g in 0..glx.len() {
                let r = 0.5 * (xl + xr) + 0.5 * dx * glx[g];
                let w = 0.5 * dx * glw[g];
                let hat = [(xr - r) / dx, (r - xl) / dx];
                let dhat = [-1.0 / dx, 1.0 / dx];
                let a_r = rad.dphi_at(r);
                let mut v = (h * m as f64 / r - a_r).powi(2);
                if subtract_field_term {
                    v -= h * profile(r);
                }
                for a in 0..2 {
                    for b in 0..2 {
                        ke[a][b] += w * r * (h * h * dhat[a] * dhat[b] + v * hat[a] * hat[b]);
                        me[a][b] += w * r * hat[a] * hat[b];
                    }
                }
            }
            let pts = [e, e + 1];
            for a in 0..2 {
                let Some(ia) = dof_of_point(pts[a]) else { continue };
                for b in 0..2 {
                    let Some(ib) = dof_of_point(pts[b]) else { continue };
                    if ib >= ia {
                        stiffness.add(ia, ib, ke[a][b]);
                        mass.add(ia, ib, me[a][b]);
                    }
                }
            }
        }
        blocks.push(ModeBlock {
            mode: m,
            stiffness,
            mass,
            dof_nodes: mesh[..n_pts].to_vec(),
        });
    }

    Ok(DiscreteForm {
        kind: if subtract_field_term {
            FormKind::PauliMinus
        } else {
            FormKind::MagneticLaplacian
        },
        matrices: FormMatrices::Modes(blocks),
        h,
        exponent_shift: 0.0,
        radial_nodes: mesh,
        cell_weights: Vec::new(),
        theta_count: 1,
        weight_num: Vec::new(),
        weight_mass: Vec::new(),
        warnings: Vec::new(),
    })
}

/// `‖(p-A)u‖² - h ∫ B |u|²` with Dirichlet conditions and unweighted mass.
pub fn assemble_pauli_minus(
    potential: &FluxPotential,
    h: f64,
    n_elem: usize,
    modes: (i64, i64),
) -> Result<DiscreteForm> {
    assemble_disk_form(potential, h, n_elem, modes, true)
}

/// `‖(p-A)u‖²` with Dirichlet conditions and unweighted mass.
pub fn assemble_magnetic_laplacian(
    potential: &FluxPotential,
    h: f64,
    n_elem: usize,
    modes: (i64, i64),
) -> Result<DiscreteForm> {
    assemble_disk_form(potential, h, n_elem, modes, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::solve_lowest;
    use crate::potential::{radial_solve, MagneticField};

    #[test]
    fn exact_matrix_shift_for_constant_field() {
        let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
        let h = 0.2;
        let pauli = assemble_pauli_minus(&p, h, 150, (-2, 4)).unwrap();
        let lap = assemble_magnetic_laplacian(&p, h, 150, (-2, 4)).unwrap();
        let (FormMatrices::Modes(pb), FormMatrices::Modes(lb)) =
            (&pauli.matrices, &lap.matrices)
        else {
            panic!()
        };
        // S_lap - S_pauli = h·B·M entrywise, to rounding.
        for (bp, bl) in pb.iter().zip(lb.iter()) {
            for d in 0..=1usize {
                for i in 0..bp.stiffness.bands[d].len() {
                    let diff = bl.stiffness.bands[d][i] - bp.stiffness.bands[d][i];
                    let want = h * 1.0 * bp.mass.bands[d][i];
                    let scale = bl.stiffness.bands[d][i].abs().max(1.0);
                    assert!(
                        (diff - want).abs() < 1e-13 * scale,
                        "band {d} entry {i}: {diff} vs {want}"
                    );
                }
            }
        }
    }

    #[test]
    fn pauli_spectrum_nonnegative_and_positive_laplacian_gap() {
        let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
        let h = 0.2;
        let pauli = assemble_pauli_minus(&p, h, 200, (-2, 4)).unwrap();
        let res = solve_lowest(&pauli, 3).unwrap();
        for pair in &res.pairs {
            assert!(pair.value >= -1e-12, "negative Pauli eigenvalue {}", pair.value);
        }
        // μ_1 = λ_1 + h·B > h·B.
        let lap = assemble_magnetic_laplacian(&p, h, 200, (-2, 4)).unwrap();
        let mu = solve_lowest(&lap, 1).unwrap();
        assert!(mu.pairs[0].value > h);
    }

    #[test]
    fn general_domain_is_rejected() {
        let rf = crate::geometry::RadialFn::new("1+0.1*cos(2*s)", |s| 1.0 + 0.1 * (2.0 * s).cos());
        let spec = crate::geometry::DomainSpec::star_like(rf, 64);
        let p = crate::potential::solve_flux_potential(&spec, &MagneticField::constant(1.0), 64, 32)
            .unwrap();
        assert!(assemble_pauli_minus(&p, 0.2, 100, (-1, 1)).is_err());
    }
}
