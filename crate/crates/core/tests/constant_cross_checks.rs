//! Independent routes to the spectral constants: a tensor-trapezoid
//! quadrature oracle for the Bargmann distances (exponentially accurate on
//! Gaussian integrands, entirely separate from the Gauss-Hermite path) and
//! the naive upper constant that the refined one can never exceed.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;

use paulilab::geometry::{DomainSpec, RadialFn};
use paulilab::potential::{radial_solve, solve_flux_potential, MagneticField};
use paulilab::spaces::{
    bargmann_gram_schmidt, build_hardy_model, hardy_distance, hardy_norm,
};

/// Monomial Gram matrix by tensor trapezoid over a box large enough for
/// the Gaussian tail to underflow the tolerance.
fn trapezoid_gram(h: &Matrix2<f64>, n_max: usize, n_pts: usize) -> Vec<Vec<Complex64>> {
    let lam_min = {
        let tr = h[(0, 0)] + h[(1, 1)];
        let det = h.determinant();
        0.5 * (tr - (tr * tr - 4.0 * det).sqrt())
    };
    let half = 9.0 / lam_min.sqrt();
    let step = 2.0 * half / n_pts as f64;
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n_max + 1]; n_max + 1];
    let mut powers = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for a in 0..=n_pts {
        let y1 = -half + a as f64 * step;
        let wa = if a == 0 || a == n_pts { 0.5 } else { 1.0 };
        for b in 0..=n_pts {
            let y2 = -half + b as f64 * step;
            let wb = if b == 0 || b == n_pts { 0.5 } else { 1.0 };
            let q = h[(0, 0)] * y1 * y1 + 2.0 * h[(0, 1)] * y1 * y2 + h[(1, 1)] * y2 * y2;
            let weight = wa * wb * step * step * (-q).exp();
            if weight == 0.0 {
                continue;
            }
            let z = Complex64::new(y1, y2);
            powers[0] = Complex64::new(1.0, 0.0);
            for n in 1..=n_max {
                powers[n] = powers[n - 1] * z;
            }
            for i in 0..=n_max {
                let ci = powers[i].conj() * weight;
                for j in 0..=n_max {
                    gram[i][j] += ci * powers[j];
                }
            }
        }
    }
    gram
}

/// `dist(z^n, span(1..z^{n-1}))` straight from a Gram matrix by normal
/// equations.
fn dist_from_gram(gram: &[Vec<Complex64>], n: usize) -> f64 {
    if n == 0 {
        return gram[0][0].re.sqrt();
    }
    let a = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
    let rhs = DVector::from_fn(n, |i, _| -gram[i][n]);
    let c = a.lu().solve(&rhs).expect("Gram system");
    let mut nsq = gram[n][n];
    for (j, cj) in c.iter().enumerate() {
        nsq += *cj * gram[n][j];
    }
    nsq.re.sqrt()
}

#[test]
fn bargmann_distances_match_trapezoid_oracle() {
    let h = Matrix2::new(0.8, 0.25, 0.25, 0.45);
    let basis = bargmann_gram_schmidt(&h, 4).unwrap();
    let gram = trapezoid_gram(&h, 4, 700);
    for n in 0..=4usize {
        let quadrature = basis.norm(n);
        let oracle = dist_from_gram(&gram, n);
        assert!(
            (quadrature - oracle).abs() < 1e-10 * oracle,
            "n = {n}: Gauss-Hermite {quadrature} vs trapezoid {oracle}"
        );
    }
}

/// The refined constant uses the distance to the vanishing-order subspace;
/// replacing it by the plain boundary norm can only grow it, with equality
/// exactly in the radial case.
#[test]
fn naive_constant_dominates_refined() {
    // Radial: equality.
    let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
    let model = build_hardy_model(&p, 16).unwrap();
    for k in 1..=3usize {
        let refined = hardy_distance(k, &model).unwrap();
        let target: Vec<Complex64> = model
            .nodes
            .iter()
            .map(|&z| (z - model.z_min).powu((k - 1) as u32))
            .collect();
        let naive = hardy_norm(&target, &model).unwrap().sqrt();
        assert!((refined - naive).abs() < 1e-10 * naive, "radial k = {k}");
    }

    // Off-center egg: strict inequality for k ≥ 2 (the projection bites).
    let rf = RadialFn::new("1+0.08*cos(s)", |s| 1.0 + 0.08 * s.cos());
    let spec = DomainSpec::star_like(rf, 256);
    let p = solve_flux_potential(&spec, &MagneticField::constant(1.0), 256, 192).unwrap();
    let model = build_hardy_model(&p, 24).unwrap();
    let mut some_strict = false;
    for k in 1..=3usize {
        let refined = hardy_distance(k, &model).unwrap();
        let target: Vec<Complex64> = model
            .nodes
            .iter()
            .map(|&z| (z - model.z_min).powu((k - 1) as u32))
            .collect();
        let naive = hardy_norm(&target, &model).unwrap().sqrt();
        assert!(refined <= naive * (1.0 + 1e-12), "k = {k}: {refined} vs {naive}");
        if refined < naive * (1.0 - 1e-6) {
            some_strict = true;
        }
    }
    assert!(some_strict, "projection should be active off-center");
}
