//! The two operator routes to the same spectrum: the directly assembled
//! Pauli component and the gauge-equivalent weighted Cauchy-Riemann form
//! must converge to each other under refinement.

use paulilab::numerics::fit::richardson;
use paulilab::operators::{
    assemble_pauli_minus, assemble_weighted_dbar, radial_mode_solver, solve_lowest,
};
use paulilab::potential::{radial_solve, MagneticField};

#[test]
fn pauli_and_weighted_dbar_eigenvalues_converge_together() {
    let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
    let h = 0.2;
    let mut gaps = Vec::new();
    for level in 0..2u32 {
        let n = 150 << level;
        let pauli = assemble_pauli_minus(&p, h, n, (-2, 3)).unwrap();
        let dbar = assemble_weighted_dbar(&p, h, n, 8).unwrap();
        let a = solve_lowest(&pauli, 1).unwrap().lambda(1);
        let b = solve_lowest(&dbar, 1).unwrap().lambda(1);
        gaps.push((a - b).abs());
    }
    let ratio = gaps[0] / gaps[1];
    assert!(
        ratio >= 3.5,
        "gauge-equivalence gap should shrink ≥3.5x per refinement: {gaps:?}"
    );
}

#[test]
fn pauli_matches_oracle_at_matched_convergence() {
    // λ1(Pauli) = λ1(weighted form) in the continuum; compare the
    // Richardson-extrapolated Pauli value against the separated-variables
    // oracle.
    let field = MagneticField::constant(1.0);
    let p = radial_solve(&field, 1.0).unwrap();
    let h = 0.2;
    let p1 = solve_lowest(&assemble_pauli_minus(&p, h, 300, (-2, 3)).unwrap(), 1)
        .unwrap()
        .lambda(1);
    let p2 = solve_lowest(&assemble_pauli_minus(&p, h, 600, (-2, 3)).unwrap(), 1)
        .unwrap()
        .lambda(1);
    let pauli = richardson(p1, p2, 2.0);
    let o1 = radial_mode_solver(&field, 1.0, h, 1, (-2, 3), 300)
        .unwrap()
        .lambda(1);
    let o2 = radial_mode_solver(&field, 1.0, h, 1, (-2, 3), 600)
        .unwrap()
        .lambda(1);
    let oracle = richardson(o1, o2, 2.0);
    assert!(
        (pauli - oracle).abs() < 1e-6 * oracle,
        "Pauli {pauli} vs oracle {oracle}"
    );
}
