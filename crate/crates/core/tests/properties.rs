//! Cross-module property tests: Gram diagonality under random weights,
//! field-scaling covariance of the boundary norms, and code-path
//! equivalence of the mode-decoupled and dense pencil assemblies.

use nalgebra::Matrix2;
use num_complex::Complex64;
use proptest::prelude::*;

use paulilab::operators::{assemble_weighted_dbar, solve_lowest};
use paulilab::potential::{radial_solve, solve_flux_potential, MagneticField};
use paulilab::spaces::{bargmann_gram_schmidt, build_hardy_model, hardy_norm, theta0};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Gram matrix of the orthogonalized family stays diagonal for random
    /// positive definite weight matrices.
    #[test]
    fn bargmann_gram_diagonal_for_random_weights(
        a in 0.2f64..2.0,
        c in 0.2f64..2.0,
        t in -0.9f64..0.9,
    ) {
        // b² < ac keeps the matrix positive definite.
        let b = t * (a * c).sqrt();
        let h = Matrix2::new(a, b, b, c);
        let basis = bargmann_gram_schmidt(&h, 8).unwrap();
        prop_assert!(basis.gram_off_diagonal() < 1e-10,
            "off-diagonal {} for H = [{a}, {b}; {b}, {c}]", basis.gram_off_diagonal());
    }

    /// Szegő projection preserves the Parseval split.
    #[test]
    fn szego_parseval(coeffs in proptest::collection::vec((-8i64..8, -5.0f64..5.0, -5.0f64..5.0), 1..12)) {
        let series: Vec<(i64, Complex64)> = coeffs
            .into_iter()
            .map(|(n, re, im)| (n, Complex64::new(re, im)))
            .collect();
        let plus = paulilab::spaces::szego_project(&series);
        let total: f64 = series.iter().map(|(_, c)| c.norm_sqr()).sum();
        let kept: f64 = plus.iter().map(|(_, c)| c.norm_sqr()).sum();
        let dropped: f64 = series
            .iter()
            .zip(plus.iter())
            .map(|((_, a), (_, b))| (a - b).norm_sqr())
            .sum();
        prop_assert!((total - kept - dropped).abs() <= 1e-12 * total.max(1.0));
    }
}

/// Scaling the field by `c` scales `∂_n φ` (hence `N_H²`) by `c` and leaves
/// `θ₀` untouched.
#[test]
fn field_scaling_covariance() {
    let p1 = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
    let p3 = radial_solve(&MagneticField::constant(3.0), 1.0).unwrap();
    let m1 = build_hardy_model(&p1, 16).unwrap();
    let m3 = build_hardy_model(&p3, 16).unwrap();
    let ones = vec![Complex64::new(1.0, 0.0); m1.nodes.len()];
    let n1 = hardy_norm(&ones, &m1).unwrap();
    let n3 = hardy_norm(&ones, &m3).unwrap();
    assert!((n3 / n1 - 3.0).abs() < 1e-10, "N_H² ratio {}", n3 / n1);
    let t1 = theta0(&p1).unwrap();
    let t3 = theta0(&p3).unwrap();
    assert!((t1.theta0 - t3.theta0).abs() < 1e-12);
    assert!((t3.e_min / t1.e_min - 3.0).abs() < 1e-10);
}

/// A sub-detection-threshold angular perturbation must leave the spectrum
/// at the decoupled path's values: the dense and banded assemblies are the
/// same discretization.
#[test]
fn dense_and_banded_paths_agree() {
    let radial = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
    let eps = 1e-7;
    let perturbed = MagneticField::planar("1+eps*cos", move |x: [f64; 2]| 1.0 + eps * x[0]);
    let grid =
        solve_flux_potential(&paulilab::geometry::DomainSpec::unit_disk(64), &perturbed, 96, 16)
            .unwrap();
    let h = 0.25;
    let form_blocked = assemble_weighted_dbar(&radial, h, 48, 8).unwrap();
    let form_dense = assemble_weighted_dbar(&grid, h, 48, 8).unwrap();
    assert!(matches!(
        form_blocked.matrices,
        paulilab::operators::FormMatrices::Modes(_)
    ));
    assert!(matches!(
        form_dense.matrices,
        paulilab::operators::FormMatrices::Dense { .. }
    ));
    let a = solve_lowest(&form_blocked, 2).unwrap();
    let b = solve_lowest(&form_dense, 2).unwrap();
    for k in 1..=2 {
        let (x, y) = (a.lambda(k), b.lambda(k));
        assert!(
            (x - y).abs() < 1e-5 * x,
            "k = {k}: blocked {x} vs dense {y}"
        );
    }
}

/// Near-degenerate flagging on an exactly degenerate pencil.
#[test]
fn degenerate_pairs_are_flagged() {
    let p = radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
    let form = assemble_weighted_dbar(&p, 0.25, 48, 8).unwrap();
    let res = solve_lowest(&form, 3).unwrap();
    // Simple spectrum here: no flags at a tight threshold.
    assert!(res.near_degenerate_pairs(1e-10).is_empty());
    // Identity pencil: everything degenerate.
    let ident = {
        use paulilab::numerics::banded::SymBanded;
        let n = 10;
        let mut s = SymBanded::zeros(n, 0);
        let mut m = SymBanded::zeros(n, 0);
        for i in 0..n {
            s.add(i, i, 1.0);
            m.add(i, i, 1.0);
        }
        paulilab::operators::DiscreteForm {
            kind: paulilab::operators::FormKind::WeightedDbar,
            matrices: paulilab::operators::FormMatrices::Modes(vec![
                paulilab::operators::ModeBlock {
                    mode: 0,
                    stiffness: s,
                    mass: m,
                    dof_nodes: (0..n).map(|i| i as f64).collect(),
                },
            ]),
            h: 1.0,
            exponent_shift: 0.0,
            radial_nodes: vec![],
            cell_weights: vec![],
            theta_count: 1,
            weight_num: vec![],
            weight_mass: vec![],
            warnings: vec![],
        }
    };
    let res = solve_lowest(&ident, 3).unwrap();
    assert_eq!(res.near_degenerate_pairs(1e-10).len(), 2);
}
