//! Spec-level invariants that cut across modules: the gauge curl identity,
//! conformal-map composition, the cutoff energy scale and cache
//! serialization of the function-space models.

use num_complex::Complex64;

use paulilab::asymptotics::{boundary_layer, cutoff_energy_scale};
use paulilab::geometry::{build_conformal_map, DomainSpec};
use paulilab::potential::{radial_solve, solve_flux_potential, MagneticField};
use paulilab::spaces::{bargmann_gram_schmidt, build_hardy_model, BargmannBasis, HardyModel};

/// `A = ∇φ^⊥` satisfies `∂₁A₂ - ∂₂A₁ = B` at interior nodes: the curl is
/// recovered from centered differences of the potential's gradient
/// evaluator and compared against the field.
#[test]
fn gauge_curl_recovers_the_field() {
    let field = MagneticField::radial("1+r^2", |r| 1.0 + r * r);
    let p = solve_flux_potential(&DomainSpec::unit_disk(64), &field, 192, 32).unwrap();
    // Cartesian gradient from the disk-picture one (unit disk: identical).
    let grad = |x: [f64; 2]| -> [f64; 2] {
        let r = x[0].hypot(x[1]);
        let th = x[1].atan2(x[0]);
        let g = p.gradient_disk(r, th);
        [
            g[0] * th.cos() - g[1] * th.sin(),
            g[0] * th.sin() + g[1] * th.cos(),
        ]
    };
    let delta = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..40 {
        let r = 0.15 + 0.6 * (i as f64 / 39.0);
        let th = 0.37 + i as f64;
        let x = [r * th.cos(), r * th.sin()];
        // A = (-∂₂φ, ∂₁φ): curl A = ∂₁A₂ - ∂₂A₁ = Δφ.
        let a = |y: [f64; 2]| {
            let g = grad(y);
            [-g[1], g[0]]
        };
        let d1a2 = (a([x[0] + delta, x[1]])[1] - a([x[0] - delta, x[1]])[1]) / (2.0 * delta);
        let d2a1 = (a([x[0], x[1] + delta])[0] - a([x[0], x[1] - delta])[0]) / (2.0 * delta);
        let curl = d1a2 - d2a1;
        worst = worst.max((curl - field.eval(x)).abs());
    }
    assert!(worst < 5e-4, "curl defect {worst}");
}

#[test]
fn unit_disk_map_composition_identity() {
    let map = build_conformal_map(&DomainSpec::unit_disk(64), 16).unwrap();
    let mut state = 0x853c49e6748fea9bu64;
    let mut rand01 = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    for _ in 0..100 {
        let r = rand01().sqrt() * 0.999;
        let th = rand01() * std::f64::consts::TAU;
        let y = Complex64::from_polar(r, th);
        // F = id on the unit disk: the inverse is trivially the identity.
        let fy = map.eval(y);
        assert!((fy - y).norm() < 1e-12);
    }
}

#[test]
fn cutoff_energy_scale_matches_the_layer_energy() {
    // Λ₀(h) = (2Ẽ/h) / (1 - e^{-2δ̃Ẽ/h}) is the layer energy at
    // α = 2Ẽ/h, ε = δ̃.
    for (h, e_tilde, delta_tilde) in [(0.2, 0.5, 1.0), (0.1, 0.75, 0.3)] {
        let lam = cutoff_energy_scale(h, e_tilde, delta_tilde);
        let profile = boundary_layer(2.0 * e_tilde / h, delta_tilde).unwrap();
        assert!((lam - profile.energy()).abs() < 1e-12 * lam);
        assert!(lam > 0.0);
    }
}

#[test]
fn bases_serialize_round_trip() {
    let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
    let basis = bargmann_gram_schmidt(&p.hessian, 6).unwrap();
    let text = serde_json::to_string(&basis).unwrap();
    let back: BargmannBasis = serde_json::from_str(&text).unwrap();
    assert_eq!(basis.norms_sq, back.norms_sq);
    assert_eq!(basis.coefficients, back.coefficients);

    let hardy = build_hardy_model(&p, 16).unwrap();
    let text = serde_json::to_string(&hardy).unwrap();
    let back: HardyModel = serde_json::from_str(&text).unwrap();
    assert_eq!(hardy.weights, back.weights);
    assert_eq!(hardy.nodes, back.nodes);
    assert_eq!(hardy.z_min, back.z_min);
}
