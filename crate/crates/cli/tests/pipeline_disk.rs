//! Pipeline wiring for a scaled disk: the radius enters the constants
//! through `Φ = R²B/2` and the `R^{2k-2}` factor.

use std::path::PathBuf;

use paulilab_cli::config::parse_config;
use paulilab_cli::pipeline::{run_pipeline, Mode};

/// A genuinely planar field on the unit disk: the weight couples the
/// angular modes through the field rather than the geometry, the minimum
/// shifts off-center and the sweep runs on the dense pencil.
#[test]
fn planar_field_runs_the_dense_path() {
    let odir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("disk-planar");
    let body = format!(
        "kind = unit-disk\nfield = expression: 1 + 0.5*cos(x1)\nh = 0.25\nk_max = 1\n\
         n_theta = 128\noutput_dir = {}\ncache = off\n",
        odir.display()
    );
    let cfg = parse_config(&body).unwrap();
    let summary = run_pipeline(&cfg, Mode::Run).unwrap();
    assert!(summary.checks.is_empty());
    let sweep = std::fs::read_to_string(odir.join("sweep.csv")).unwrap();
    let row: Vec<&str> = sweep.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(row[8], "dense-hermitian", "solver column: {row:?}");
    // θ0 < 1: the asymmetric field breaks the boundary symmetry.
    let preds = std::fs::read_to_string(odir.join("predictions.csv")).unwrap();
    let prow: Vec<&str> = preds.lines().nth(1).unwrap().split(',').collect();
    let t0: f64 = prow[4].parse().unwrap();
    assert!(t0 > 0.0 && t0 < 1.0, "θ0 = {t0}");
    // Normalized λ1 lands near the computed constants even at this h.
    let nu: f64 = row[3].parse().unwrap();
    let c_sup: f64 = prow[1].parse().unwrap();
    assert!(nu > 0.1 * c_sup && nu < 3.0 * c_sup, "ν1 = {nu} vs C_sup = {c_sup}");
}

#[test]
fn dilated_disk_constants() {
    let odir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("disk-r2");
    let body = format!(
        "kind = disk\nR = 2.0\nfield = constant: 1.0\nh = 0.4, 0.3\nk_max = 2\n\
         output_dir = {}\ncache = off\n",
        odir.display()
    );
    let cfg = parse_config(&body).unwrap();
    run_pipeline(&cfg, Mode::Constants).unwrap();
    let text = std::fs::read_to_string(odir.join("predictions.csv")).unwrap();
    let mut lines = text.lines().skip(1);
    // k = 1: C = B Φ R⁰ / 2⁻¹ = 2Φ = 4.
    let row1: Vec<&str> = lines.next().unwrap().split(',').collect();
    let c1: f64 = row1[1].parse().unwrap();
    assert!((c1 - 4.0).abs() < 1e-8, "C(1) = {c1}");
    // k = 2: C = B² Φ R² / (2⁰·1!) = 2·4 = 8.
    let row2: Vec<&str> = lines.next().unwrap().split(',').collect();
    let c2: f64 = row2[1].parse().unwrap();
    assert!((c2 - 8.0).abs() < 1e-8, "C(2) = {c2}");
    // θ0 = 1 on the dilated disk.
    let t0: f64 = row2[4].parse().unwrap();
    assert_eq!(t0, 1.0);
}
