//! Pipeline orchestration: geometry → potential (cached) → bases (cached)
//! → predictions → spectral sweep → verification checks, with CSV/JSON
//! artifacts and a failure marker on partial output.

use std::collections::BTreeMap;

use std::time::Instant;

use num_complex::Complex64;
use rayon::prelude::*;

use paulilab::asymptotics::{
    boundary_layer, build_prediction, discrete_layer_minimum, laplacian_shift_check,
    predict_lambda, radial_concentration, radial_constant, trial_space_upper_bound,
    AsymptoticPrediction,
};
use paulilab::geometry::{build_conformal_map, ConformalMap};
use paulilab::numerics::fit;
use paulilab::operators::{
    assemble_weighted_dbar, cr_energy_identity_gap, gauge_identity_residual, radial_mode_solver,
    solve_lowest, SpectralResult,
};
use paulilab::potential::{
    radial_solve, solve_flux_potential_with_map, FluxPotential, MagneticField,
};
use paulilab::spaces::{
    bargmann_gram_schmidt, build_hardy_model, hardy_distance, theta0, BargmannBasis,
    BoundarySymmetry, HardyModel,
};

use crate::cache;
use crate::config::{RunConfig, SolverMode};
use crate::report::{self, CheckResult, PredictionRow, Summary, SweepRow};

#[derive(Debug)]
pub enum PipelineError {
    Numerical { stage: String, message: String },
    Io(std::io::Error),
}

impl std::fmt::Display for PipelineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PipelineError::Numerical { stage, message } => {
                write!(f, "stage '{stage}' failed: {message}")
            }
            PipelineError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

impl From<std::io::Error> for PipelineError {
    fn from(e: std::io::Error) -> Self {
        PipelineError::Io(e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Predictions + sweep.
    Run,
    /// Predictions + sweep + verification checks.
    Verify,
    /// Predictions only.
    Constants,
}

fn stage_err(stage: &str, e: impl std::fmt::Display) -> PipelineError {
    PipelineError::Numerical {
        stage: stage.into(),
        message: e.to_string(),
    }
}

struct Timer<'a> {
    stages: &'a mut BTreeMap<String, f64>,
    name: String,
    start: Instant,
}

impl<'a> Timer<'a> {
    fn start(stages: &'a mut BTreeMap<String, f64>, name: &str) -> Self {
        Timer {
            stages,
            name: name.to_string(),
            start: Instant::now(),
        }
    }
}

impl Drop for Timer<'_> {
    fn drop(&mut self) {
        self.stages
            .insert(self.name.clone(), self.start.elapsed().as_secs_f64());
    }
}

/// Everything the pipeline solved once; checks reuse these.
pub struct Solved {
    pub map: ConformalMap,
    pub field: MagneticField,
    /// Grid-based potential at config resolution.
    pub potential_grid: FluxPotential,
    /// Quadrature-backed radial potential when applicable, else the grid
    /// potential again.
    pub potential: FluxPotential,
    pub bargmann: BargmannBasis,
    pub hardy: HardyModel,
    pub symmetry: BoundarySymmetry,
    pub predictions: Vec<AsymptoticPrediction>,
    pub sweep: Vec<(f64, SpectralResult)>,
    pub is_radial_disk: bool,
}

pub fn run_pipeline(config: &RunConfig, mode: Mode) -> Result<Summary, PipelineError> {
    let out_dir = &config.output_dir;
    std::fs::create_dir_all(out_dir)?;
    let failed_marker = out_dir.join("FAILED");
    let _ = std::fs::remove_file(&failed_marker);

    let result = run_pipeline_inner(config, mode);
    if result.is_err() {
        let _ = std::fs::write(&failed_marker, format!("{:?}\n", result.as_ref().err()));
    }
    result
}

fn run_pipeline_inner(config: &RunConfig, mode: Mode) -> Result<Summary, PipelineError> {
    let mut stage_seconds = BTreeMap::new();
    let mut cache_hits = BTreeMap::new();
    let mut warnings: Vec<String> = Vec::new();
    let out_dir = config.output_dir.clone();
    let cache_dir = cache::cache_dir(&out_dir);
    let use_cache = config.cache;

    if config.solver == SolverMode::Iterative {
        warnings.push(
            "solver = iterative: banded pencils already use Sturm bisection; coupled \
             pencils fall back to the dense path"
                .into(),
        );
    }

    // Geometry.
    let spec = config.domain.spec(config.boundary_m);
    let map = {
        let _t = Timer::start(&mut stage_seconds, "geometry");
        build_conformal_map(&spec, config.n_theta.max(64)).map_err(|e| stage_err("geometry", e))?
    };
    let field = config.field.field();
    let is_radial_disk = config.domain.is_disk() && config.field.is_radial();

    // Potential (cached): quadrature-backed radial tables for radial
    // fields on disks, the polar grid solve otherwise.
    let pot_key = cache::content_key(&["potential", &config.numeric_descriptor()]);
    let (potential, pot_cached) = {
        let _t = Timer::start(&mut stage_seconds, "potential");
        if is_radial_disk {
            let cached = if use_cache {
                cache::load::<cache::RadialCache>(&cache_dir, &pot_key)
            } else {
                None
            };
            match cached {
                Some(data) => {
                    let (data, b0) = data.into_data();
                    (
                        paulilab::potential::potential_from_radial_data(data, field.clone(), b0),
                        true,
                    )
                }
                None => {
                    let radius = config.domain.radius();
                    let p = radial_solve(&field, radius)
                        .map_err(|e| stage_err("potential", e))?;
                    uniqueness_rescan(config, &map, &field, &p)?;
                    if use_cache {
                        cache::store(
                            &cache_dir,
                            &pot_key,
                            &cache::RadialCache::from_data(p.radial.as_ref().expect("radial"), p.b0),
                        )?;
                    }
                    (p, false)
                }
            }
        } else {
            let cached = if use_cache {
                cache::load::<cache::PotentialData>(&cache_dir, &pot_key)
            } else {
                None
            };
            match cached {
                Some(data) => (data.into_potential(map.clone(), field.clone()), true),
                None => {
                    let p =
                        solve_flux_potential_with_map(&map, &field, config.n_r, config.n_theta)
                            .map_err(|e| stage_err("potential", e))?;
                    uniqueness_rescan(config, &map, &field, &p)?;
                    if use_cache {
                        cache::store(
                            &cache_dir,
                            &pot_key,
                            &cache::PotentialData::from_potential(&p),
                        )?;
                    }
                    (p, false)
                }
            }
        }
    };
    cache_hits.insert("potential".into(), pot_cached);
    warnings.extend(potential.warnings.iter().cloned());
    let potential_grid = potential.clone();

    // Bases (cached).
    let basis_key = cache::content_key(&["bargmann", &config.numeric_descriptor()]);
    let (bargmann, bg_cached) = {
        let _t = Timer::start(&mut stage_seconds, "bases");
        let cached = if use_cache {
            cache::load::<BargmannBasis>(&cache_dir, &basis_key)
        } else {
            None
        };
        match cached {
            Some(b) => (b, true),
            None => {
                let b = bargmann_gram_schmidt(&potential.hessian, config.bargmann_n_max)
                    .map_err(|e| stage_err("bases", e))?;
                if use_cache {
                    cache::store(&cache_dir, &basis_key, &b)?;
                }
                (b, false)
            }
        }
    };
    cache_hits.insert("bargmann".into(), bg_cached);

    let hardy_key = cache::content_key(&["hardy", &config.numeric_descriptor()]);
    let (hardy, hd_cached) = {
        let cached = if use_cache {
            cache::load::<HardyModel>(&cache_dir, &hardy_key)
        } else {
            None
        };
        match cached {
            Some(hm) => (hm, true),
            None => {
                let hm = build_hardy_model(&potential, config.hardy_truncation)
                    .map_err(|e| stage_err("bases", e))?;
                if use_cache {
                    cache::store(&cache_dir, &hardy_key, &hm)?;
                }
                (hm, false)
            }
        }
    };
    cache_hits.insert("hardy".into(), hd_cached);

    // Predictions.
    let symmetry = theta0(&potential).map_err(|e| stage_err("constants", e))?;
    let radial_info = if is_radial_disk {
        let rad = potential.radial.as_ref().expect("radial data");
        Some((rad.b_center, rad.flux, rad.radius))
    } else {
        None
    };
    let mut predictions = Vec::new();
    {
        let _t = Timer::start(&mut stage_seconds, "constants");
        for k in 1..=config.k_max {
            predictions.push(
                build_prediction(k, &bargmann, &hardy, &symmetry, potential.phi_min, radial_info)
                    .map_err(|e| stage_err("constants", e))?,
            );
        }
        let rows: Vec<PredictionRow> = predictions
            .iter()
            .map(|p| PredictionRow {
                k: p.k,
                c_sup: p.c_sup,
                c_inf: p.c_inf,
                c_rad: p.c_rad,
                theta0: p.theta0,
            })
            .collect();
        report::write_predictions(&out_dir.join("predictions.csv"), &rows)?;
    }

    let mut summary = Summary {
        config: config.numeric_descriptor(),
        seed: config.seed,
        pass: true,
        checks: Vec::new(),
        stage_seconds: BTreeMap::new(),
        cache_hits: BTreeMap::new(),
        warnings: Vec::new(),
    };

    let solved = if mode == Mode::Constants {
        Solved {
            map,
            field,
            potential_grid,
            potential,
            bargmann,
            hardy,
            symmetry,
            predictions,
            sweep: Vec::new(),
            is_radial_disk,
        }
    } else {
        // Spectral sweep, fanned out over h.
        let radius = config.domain.radius();
        let sweep: Vec<(f64, SpectralResult)> = {
            let _t = Timer::start(&mut stage_seconds, "sweep");
            let field_ref = &field;
            let potential_ref = &potential;
            let results: Result<Vec<_>, _> = config
                .h_list
                .par_iter()
                .map(|&h| -> Result<(f64, SpectralResult), PipelineError> {
                    if is_radial_disk {
                        // Deeper h needs more elements (the excited modes
                        // converge second-order with an h-growing
                        // constant); Richardson over two meshes removes
                        // the leading error.
                        let n_elem = config
                            .n_r
                            .max(400)
                            .max((64.0 / h).ceil() as usize)
                            .min(6400);
                        let window = (-3, config.k_max as i64 + 3);
                        let coarse = radial_mode_solver(
                            field_ref,
                            radius,
                            h,
                            config.k_max,
                            window,
                            n_elem / 2,
                        )
                        .map_err(|e| stage_err("sweep", e))?;
                        let mut res = radial_mode_solver(
                            field_ref,
                            radius,
                            h,
                            config.k_max,
                            window,
                            n_elem,
                        )
                        .map_err(|e| stage_err("sweep", e))?;
                        for (fine, prev) in res.pairs.iter_mut().zip(coarse.pairs.iter()) {
                            if fine.mode == prev.mode {
                                fine.value = fit::richardson(prev.value, fine.value, 2.0);
                            }
                        }
                        Ok((h, res))
                    } else {
                        let (n_r_e, n_t_e) = dense_grid(config);
                        let form = assemble_weighted_dbar(potential_ref, h, n_r_e, n_t_e)
                            .map_err(|e| stage_err("sweep", e))?;
                        let res =
                            solve_lowest(&form, config.k_max).map_err(|e| stage_err("sweep", e))?;
                        Ok((h, res))
                    }
                })
                .collect();
            results?
        };

        let mut rows = Vec::new();
        for (h, res) in &sweep {
            for k in 1..=config.k_max.min(res.pairs.len()) {
                let nu = res.normalized(k);
                let lo = predictions[k - 1].c_inf * (1.0 - config.bracket_tol);
                let hi = predictions[k - 1].c_sup * (1.0 + config.bracket_tol);
                let flags = res.gauge_regime_flags(potential.b0);
                rows.push(SweepRow {
                    h: *h,
                    k,
                    log10_lambda: res.log_lambda(k) / std::f64::consts::LN_10,
                    lambda_normalized: nu,
                    bracket_lo: lo,
                    bracket_hi: hi,
                    in_bracket: nu >= lo && nu <= hi,
                    residual: res.pairs[k - 1].residual,
                    solver: res.solver.clone(),
                    grid: format!("n_r={},n_theta={}", config.n_r, config.n_theta),
                    gauge_regime_flag: flags.contains(&k),
                });
            }
        }
        report::write_sweep(&out_dir.join("sweep.csv"), &rows)?;

        Solved {
            map,
            field,
            potential_grid,
            potential,
            bargmann,
            hardy,
            symmetry,
            predictions,
            sweep,
            is_radial_disk,
        }
    };

    if mode == Mode::Verify {
        let _t = Timer::start(&mut stage_seconds, "verify");
        let checks = run_checks(config, &solved).map_err(|e| stage_err("verify", e))?;
        summary.pass = checks.iter().all(|c| c.pass);
        summary.checks = checks;
    }

    summary.stage_seconds = stage_seconds;
    summary.cache_hits = cache_hits;
    summary.warnings = warnings;
    report::write_summary(&out_dir.join("summary.json"), &summary)?;

    let mut log = String::new();
    for c in &summary.checks {
        log.push_str(&format!(
            "{} {}: {} — {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            c.detail
        ));
    }
    report::write_atomic(&out_dir.join("run.log"), log.as_bytes())?;
    Ok(summary)
}

/// Grid-solve the potential again at doubled radial resolution and require
/// the landscape to agree: the two-resolution uniqueness scan. Runs on
/// cache misses; a cached artifact already passed it.
fn uniqueness_rescan(
    config: &RunConfig,
    map: &ConformalMap,
    field: &MagneticField,
    p: &FluxPotential,
) -> Result<(), PipelineError> {
    let p2 = solve_flux_potential_with_map(map, field, 2 * config.n_r, 2 * config.n_theta)
        .map_err(|e| stage_err("potential", e))?;
    let dphi = (p.phi_min - p2.phi_min).abs();
    let dx = (p.x_min[0] - p2.x_min[0]).hypot(p.x_min[1] - p2.x_min[1]);
    if dphi > 1e-4 * p.phi_min.abs() || dx > 0.02 {
        return Err(stage_err(
            "potential",
            format!(
                "landscape unstable across resolutions (Δφ_min = {dphi:.3e}, Δx_min = {dx:.3e}); \
                 minimum uniqueness suspect at this resolution"
            ),
        ));
    }
    Ok(())
}

fn dense_grid(config: &RunConfig) -> (usize, usize) {
    // Keep the coupled Hermitian pencil at desk scale.
    let n_r = config.n_r.min(48);
    let n_t = config.n_theta.min(20).max(12);
    (n_r, if n_t.is_multiple_of(2) { n_t } else { n_t + 1 })
}

/// Distance of `x` to the interval `[lo, hi]`.
fn bracket_distance(x: f64, lo: f64, hi: f64) -> f64 {
    if x < lo {
        lo - x
    } else if x > hi {
        x - hi
    } else {
        0.0
    }
}

fn run_checks(config: &RunConfig, s: &Solved) -> paulilab::Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    checks.push(check_potential_oracle(config, s)?);
    checks.push(check_bargmann(config, s)?);
    checks.push(check_hardy(config, s)?);
    if s.is_radial_disk {
        checks.push(check_radial_constants(s)?);
    }
    if s.sweep.len() >= 4 {
        checks.push(check_slope(s)?);
        checks.push(check_bracket(config, s)?);
    }
    if s.is_radial_disk {
        checks.push(check_oracle_equivalence(config, s)?);
        checks.push(check_gauge_identity(s)?);
        checks.push(check_cr_identities(config, s)?);
    }
    checks.push(check_layer_oracle()?);
    if s.is_radial_disk && matches!(config.field, crate::config::FieldSpec::Constant(_)) {
        checks.push(check_laplacian_shift(config, s)?);
    }
    checks.push(check_variational_ordering(config, s)?);
    if s.is_radial_disk && concentration_in_regime(config, s) {
        checks.push(check_concentration(config, s)?);
    }
    if !config.domain.is_disk() {
        checks.push(check_nonradial_theta0(config, s)?);
    }
    Ok(checks)
}

/// Gauge potential vs the radial quadrature oracle, plus a grid-refinement
/// order study on a curvature-bearing radial field.
fn check_potential_oracle(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut detail = String::new();
    let mut pass = true;

    if s.is_radial_disk {
        let oracle = &s.potential;
        let grid = &solve_flux_potential_with_map(&s.map, &s.field, config.n_r, config.n_theta)?;
        let tol = 1e-6;
        let checks = [
            ("phi_min", grid.phi_min, oracle.phi_min),
            ("x_min", grid.x_min[0].hypot(grid.x_min[1]), 0.0),
            ("hess_xx", grid.hessian[(0, 0)], oracle.hessian[(0, 0)]),
            ("hess_xy", grid.hessian[(0, 1)], 0.0),
            ("dn", grid.boundary_dn_physical[0], oracle.boundary_dn_physical[0]),
            ("flux", grid.flux, oracle.flux),
        ];
        for (name, got, want) in checks {
            let err = (got - want).abs();
            if err > tol {
                pass = false;
            }
            detail.push_str(&format!("{name}: |Δ| = {err:.2e}; "));
        }
        let fc = (grid.flux - grid.flux_boundary).abs();
        if fc > 1e-6 {
            pass = false;
        }
        detail.push_str(&format!("flux consistency {fc:.2e}; "));
    } else {
        // Two-resolution stability for general domains.
        let p2 = solve_flux_potential_with_map(
            &s.map,
            &s.field,
            3 * config.n_r / 2,
            config.n_theta,
        )?;
        let dphi = (s.potential_grid.phi_min - p2.phi_min).abs();
        if dphi > 1e-6 {
            pass = false;
        }
        detail.push_str(&format!("phi_min stability {dphi:.2e}; "));
    }

    // Refinement order on B = 1 + r² (nonzero discretization error).
    let field = MagneticField::radial("1+r^2", |r| 1.0 + r * r);
    let oracle = radial_solve(&field, 1.0)?;
    let rad = oracle.radial.as_ref().expect("radial");
    let mut errs = Vec::new();
    for n_r in [96usize, 192] {
        let p = solve_flux_potential_with_map(
            &ConformalMap::identity(64),
            &field,
            n_r,
            16,
        )?;
        let mut err = 0.0f64;
        for (j, &r) in p.radial_nodes.iter().enumerate() {
            err = err.max((p.value(j, 0) - rad.phi_at(r)).abs());
        }
        errs.push(err);
    }
    let order = (errs[0] / errs[1]).log2();
    if order < 1.9 {
        pass = false;
    }
    detail.push_str(&format!("refinement order {order:.2}"));
    Ok(CheckResult::new(
        "gauge-potential",
        "gauge potential vs radial quadrature oracle; second-order refinement",
        pass,
        detail,
    )
    .with_value(order, 1.9))
}

fn check_bargmann(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    let gram = s.bargmann.gram_off_diagonal();
    if gram > 1e-10 {
        pass = false;
    }
    detail.push_str(&format!("Gram off-diagonal {gram:.2e}; "));
    if s.is_radial_disk {
        // Closed form π n! / c^{n+1}, c = B(0)/2.
        let c = s.potential.hessian[(0, 0)];
        let mut fact = 1.0;
        let mut worst = 0.0f64;
        for n in 0..=config.bargmann_n_max.min(5) {
            if n > 0 {
                fact *= n as f64;
            }
            let exact = std::f64::consts::PI * fact / c.powi(n as i32 + 1);
            let got = s.bargmann.norms_sq[n];
            worst = worst.max((got - exact).abs() / exact);
        }
        if worst > 1e-10 {
            pass = false;
        }
        detail.push_str(&format!("norms vs closed form {worst:.2e} rel"));
        return Ok(CheckResult::new(
            "bargmann-norms",
            "Segal-Bargmann norms: exact-degree quadrature vs closed form",
            pass,
            detail,
        )
        .with_value(worst, 1e-10));
    }
    Ok(CheckResult::new(
        "bargmann-norms",
        "Segal-Bargmann Gram diagonality",
        pass,
        detail,
    )
    .with_value(gram, 1e-10))
}

fn check_hardy(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    // Truncation convergence: double when the boundary sampling allows it,
    // otherwise grow to the largest supported truncation.
    let max_supported = s.potential.theta_count / 4 - 1;
    let bigger_n = (2 * config.hardy_truncation).min(max_supported);
    let bigger = build_hardy_model(&s.potential, bigger_n)?;
    let mut conv_worst = 0.0f64;
    for k in 1..=config.k_max.min(4) {
        let d1 = hardy_distance(k, &s.hardy)?;
        let d2 = hardy_distance(k, &bigger)?;
        conv_worst = conv_worst.max((d1 - d2).abs());
        if d2 > d1 * (1.0 + 1e-12) {
            pass = false;
            detail.push_str(&format!("monotonicity violated at k={k}; "));
        }
    }
    if conv_worst > 1e-8 {
        pass = false;
    }
    detail.push_str(&format!("truncation convergence {conv_worst:.2e}; "));

    if s.is_radial_disk {
        let rad = s.potential.radial.as_ref().expect("radial");
        let radius = rad.radius;
        let mut worst = 0.0f64;
        for k in 1..=4usize {
            let d = hardy_distance(k, &s.hardy)?;
            // dist² = 2π ∂_nφ R^{2k-1}; for the unit disk this is 2πΦ.
            let exact =
                2.0 * std::f64::consts::PI * rad.dn_boundary * radius.powi(2 * k as i32 - 1);
            worst = worst.max((d * d - exact).abs() / exact);
        }
        if worst > 1e-8 {
            pass = false;
        }
        detail.push_str(&format!("dist² vs boundary norm {worst:.2e} rel; "));
        let t0_err = (s.symmetry.theta0 - 1.0).abs();
        if t0_err > 1e-8 {
            pass = false;
        }
        detail.push_str(&format!("θ0 - 1 = {t0_err:.2e}"));
        return Ok(CheckResult::new(
            "hardy-constants",
            "weighted Hardy distances and θ0 in the radial case",
            pass,
            detail,
        )
        .with_value(worst, 1e-8));
    }
    Ok(CheckResult::new(
        "hardy-constants",
        "weighted Hardy distance truncation convergence",
        pass,
        detail,
    )
    .with_value(conv_worst, 1e-8))
}

fn check_radial_constants(s: &Solved) -> paulilab::Result<CheckResult> {
    let rad = s.potential.radial.as_ref().expect("radial");
    let mut pass = true;
    let mut worst = 0.0f64;
    for p in &s.predictions {
        let exact = radial_constant(p.k, rad.b_center, rad.flux, rad.radius);
        let e1 = (p.c_sup - exact).abs() / exact;
        let e2 = (p.c_inf - exact).abs() / exact;
        worst = worst.max(e1).max(e2);
        if e1 > 1e-8 || e2 > 1e-8 {
            pass = false;
        }
    }
    Ok(CheckResult::new(
        "radial-constants",
        "assembled C_sup = C_inf = C_rad against the closed radial formula",
        pass,
        format!("worst relative deviation {worst:.2e} over k = 1..{}", s.predictions.len()),
    )
    .with_value(worst, 1e-8))
}

/// The three smallest sweep values at or above `h = 0.06`: the local
/// Richardson window (`h ln λ` is non-monotone deeper in, so global fits
/// across the whole sweep would be poisoned).
fn richardson_window(hs: &[f64]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..hs.len()).filter(|&i| hs[i] >= 0.06).collect();
    if idx.len() < 3 {
        idx = (0..hs.len()).collect();
    }
    idx.sort_by(|&a, &b| hs[a].partial_cmp(&hs[b]).unwrap());
    idx.truncate(3);
    idx
}

fn check_slope(s: &Solved) -> paulilab::Result<CheckResult> {
    let hs: Vec<f64> = s.sweep.iter().map(|(h, _)| *h).collect();
    let ys: Vec<f64> = s.sweep.iter().map(|(_, r)| r.h * r.log_lambda(1)).collect();
    let win = richardson_window(&hs);
    let hw: Vec<f64> = win.iter().map(|&i| hs[i]).collect();
    let yw: Vec<f64> = win.iter().map(|&i| ys[i]).collect();
    let a = fit::extrapolate_linear(&hw, &yw);
    let target = 2.0 * s.potential.phi_min;
    let rel = (a - target).abs() / target.abs();
    Ok(CheckResult::new(
        "spectral-slope",
        "Richardson limit of h·ln λ1 equals 2φ_min",
        rel <= 0.05,
        format!(
            "fit {a:.5} vs 2φ_min = {target:.5} ({:.2}%) over h = {hw:?}",
            100.0 * rel
        ),
    )
    .with_value(rel, 0.05))
}

fn check_bracket(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    let hs: Vec<f64> = s.sweep.iter().map(|(h, _)| *h).collect();
    for k in 1..=config.k_max.min(3) {
        let pred = &s.predictions[k - 1];
        let lo = pred.c_inf * (1.0 - config.bracket_tol);
        let hi = pred.c_sup * (1.0 + config.bracket_tol);
        let nus: Vec<f64> = s.sweep.iter().map(|(_, r)| r.normalized(k)).collect();
        let n = nus.len();
        // Extrapolate over the three smallest h.
        let a = fit::extrapolate_sqrt(&hs[n - 3..], &nus[n - 3..]);
        let inside = a >= lo && a <= hi;
        if !inside {
            pass = false;
        }
        // Approach: overall and over the deep tail (the mid-sweep
        // excursion of the o(1) corrections is reported, not failed).
        let d: Vec<f64> = nus.iter().map(|&v| bracket_distance(v, lo, hi)).collect();
        let overall = d[0] + 1e-9 >= d[n - 1];
        let tail_monotone = d[n - 3..].windows(2).all(|w| w[0] + 1e-9 >= w[1]);
        if !overall || !tail_monotone {
            pass = false;
        }
        let excursion = d
            .windows(2)
            .map(|w| (w[1] - w[0]).max(0.0))
            .fold(0.0f64, f64::max);
        detail.push_str(&format!(
            "k={k}: extrapolated {a:.4} ∈ [{lo:.4}, {hi:.4}]? {inside}; tail monotone {tail_monotone}; max mid-sweep excursion {excursion:.3}; ",
        ));
    }
    Ok(CheckResult::new(
        "spectral-bracket",
        "normalized eigenvalues approach the [C_inf, C_sup] bracket",
        pass,
        detail,
    ))
}

fn check_oracle_equivalence(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let radius = config.domain.radius();
    let h = 0.25;
    let kk = 4usize;
    // 1D separated-variables FEM, Richardson over two meshes.
    let r1 = radial_mode_solver(&s.field, radius, h, kk, (-3, 8), 600)?;
    let r2 = radial_mode_solver(&s.field, radius, h, kk, (-3, 8), 1200)?;
    // 2D polar FD, Richardson over two grids.
    let f1 = assemble_weighted_dbar(&s.potential, h, 512, 16)?;
    let f2 = assemble_weighted_dbar(&s.potential, h, 1024, 16)?;
    let d1 = solve_lowest(&f1, kk)?;
    let d2 = solve_lowest(&f2, kk)?;
    let mut worst = 0.0f64;
    let mut detail = String::new();
    for k in 1..=kk {
        let one = fit::richardson(r1.pairs[k - 1].value, r2.pairs[k - 1].value, 2.0);
        let two = fit::richardson(d1.pairs[k - 1].value, d2.pairs[k - 1].value, 2.0);
        let rel = (one - two).abs() / one.abs();
        worst = worst.max(rel);
        detail.push_str(&format!("k={k}: {rel:.2e}; "));
    }
    Ok(CheckResult::new(
        "oracle-equivalence",
        "1D separated-variables FEM vs 2D polar FD eigenvalues",
        worst <= 1e-6,
        detail,
    )
    .with_value(worst, 1e-6))
}

fn check_gauge_identity(s: &Solved) -> paulilab::Result<CheckResult> {
    let radius = s.potential.radial.as_ref().expect("radial").radius;
    let bump = move |x: [f64; 2]| {
        let r = x[0].hypot(x[1]);
        let t = (r - 0.45 * radius) / (0.3 * radius);
        let b = if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp()
        };
        [
            Complex64::new(b, 0.4 * b),
            Complex64::new(-0.3 * b, 0.9 * b),
        ]
    };
    let h = 0.3;
    let r1 = gauge_identity_residual(&s.potential, h, &bump, 64, 32, None)?;
    let r2 = gauge_identity_residual(&s.potential, h, &bump, 128, 32, None)?;
    let order = (r1 / r2).log2();
    let w1 = gauge_identity_residual(&s.potential, h, &bump, 64, 32, Some([0.1, 0.0]))?;
    let w2 = gauge_identity_residual(&s.potential, h, &bump, 128, 32, Some([0.1, 0.0]))?;
    let control_ratio = w1 / w2;
    let pass = order >= 1.9 && control_ratio < 1.5;
    Ok(CheckResult::new(
        "gauge-identity",
        "gauge factorization residual refines at second order; perturbed gauge stalls",
        pass,
        format!("order {order:.2}; perturbed-gauge ratio {control_ratio:.3}"),
    )
    .with_value(order, 1.9))
}

fn check_cr_identities(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let radius = s.potential.radial.as_ref().expect("radial").radius;
    let h = 0.25;
    let bump = move |x: [f64; 2]| {
        let r = x[0].hypot(x[1]);
        let t = (r - 0.5 * radius) / (0.35 * radius);
        if t.abs() >= 1.0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0, -0.7) * (-1.0 / (1.0 - t * t)).exp()
        }
    };
    let g1 = cr_energy_identity_gap(&s.potential, h, &bump, 64, 32)?;
    let g2 = cr_energy_identity_gap(&s.potential, h, &bump, 128, 32)?;
    let o_plus = (g1.gap_plus.abs() / g2.gap_plus.abs()).log2();
    let o_minus = (g1.gap_minus.abs() / g2.gap_minus.abs()).log2();
    let mut pass = o_plus >= 1.9 && o_minus >= 1.9;

    // Magnetic lower bound on seeded random smooth Dirichlet functions.
    let mut state = config.seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1);
    let mut rand01 = move || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state >> 11) as f64 / (1u64 << 53) as f64
    };
    let mut violations = 0usize;
    for _ in 0..100 {
        let c: Vec<f64> = (0..8).map(|_| 2.0 * rand01() - 1.0).collect();
        let u = move |x: [f64; 2]| {
            let z = Complex64::new(x[0] / radius, x[1] / radius);
            let w = 1.0 - z.norm_sqr();
            Complex64::new(w, 0.0)
                * (Complex64::new(c[0], c[1])
                    + Complex64::new(c[2], c[3]) * z
                    + Complex64::new(c[4], c[5]) * z * z
                    + Complex64::new(c[6], c[7]) * z.conj())
        };
        let g = cr_energy_identity_gap(&s.potential, h, &u, 48, 16)?;
        // ‖(p-A)u‖² ≥ h∫B|u|² up to the discretization gap.
        if g.pa_energy - g.field_term < -(2.0 * g.gap_minus.abs() + 1e-10 * g.pa_energy) {
            violations += 1;
        }
    }
    if violations > 0 {
        pass = false;
    }
    Ok(CheckResult::new(
        "cr-identities",
        "Cauchy-Riemann energy identities refine at second order; magnetic lower bound",
        pass,
        format!(
            "orders ({o_plus:.2}, {o_minus:.2}); lower-bound violations {violations}/100"
        ),
    )
    .with_value(o_plus.min(o_minus), 1.9))
}

fn check_layer_oracle() -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    for (alpha, eps) in [(1.0, 1.0), (2.0, 1.0), (5.0, 0.5)] {
        let exact = boundary_layer(alpha, eps)?;
        let mut errs = Vec::new();
        let mut profile_errs = Vec::new();
        for n in [64usize, 128] {
            let (energy, rho) = discrete_layer_minimum(alpha, eps, n)?;
            errs.push((energy - exact.energy()).abs());
            let mut pe = 0.0f64;
            for (i, &r) in rho.iter().enumerate() {
                pe = pe.max((r - exact.eval(eps * i as f64 / n as f64)).abs());
            }
            profile_errs.push(pe);
        }
        let order = (errs[0] / errs[1]).log2();
        let profile_ok = profile_errs[1] < 1e-10
            || (profile_errs[0] / profile_errs[1]).log2() > 1.9;
        if order < 1.9 || !profile_ok {
            pass = false;
        }
        detail.push_str(&format!("(α={alpha}, ε={eps}): order {order:.2}; "));
    }
    Ok(CheckResult::new(
        "layer-oracle",
        "discrete boundary-layer minimizer converges to the closed form at order 2",
        pass,
        detail,
    ))
}

fn check_laplacian_shift(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    let check = laplacian_shift_check(&s.potential, 0.2, 1, 400, (-2, 3))?;
    if check.entry_defect > 1e-13 {
        pass = false;
    }
    if check.independent_gap > 1e-9 {
        pass = false;
    }
    if !(check.mu_independent[0] - check.b * 0.2 > 0.0) {
        pass = false;
    }
    detail.push_str(&format!(
        "entry defect {:.2e}; independent gap {:.2e}; ",
        check.entry_defect, check.independent_gap
    ));

    // Trend of h·ln(μ1 - Bh) = h·ln λ1(Pauli) toward 2φ_min, over the
    // same local Richardson window as the slope check. The unweighted
    // assembly carries an absolute O(Δ²) eigenvalue floor, so the trend is
    // only resolvable while e^{2φ_min/h} stays well above it.
    let all_h: Vec<f64> = s.sweep.iter().map(|(h, _)| *h).collect();
    let win = richardson_window(&all_h);
    let depth_limit = 11.0;
    let resolvable = win
        .iter()
        .all(|&i| 2.0 * s.potential.phi_min.abs() / all_h[i] <= depth_limit);
    if resolvable {
        let mut hs = Vec::new();
        let mut ys = Vec::new();
        for &i in &win {
            let h = all_h[i];
            let c = laplacian_shift_check(&s.potential, h, 1, config.n_r.max(400), (-2, 3))?;
            hs.push(h);
            ys.push(h * c.lambda[0].ln());
        }
        let a = fit::extrapolate_linear(&hs, &ys);
        let target = 2.0 * s.potential.phi_min;
        let rel = (a - target).abs() / target.abs();
        if rel > 0.05 {
            pass = false;
        }
        detail.push_str(&format!("shift trend {a:.5} vs {target:.5} ({:.2}%)", 100.0 * rel));
    } else {
        detail.push_str(
            "shift trend skipped: e^{2φ_min/h} below the unweighted assembly's \
             discretization floor on this sweep",
        );
    }
    Ok(CheckResult::new(
        "laplacian-shift",
        "magnetic Laplacian equals the Pauli component plus hB (constant field)",
        pass,
        detail,
    )
    .with_value(check.entry_defect, 1e-13))
}

fn check_variational_ordering(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    let mut ratios: Vec<(f64, f64)> = Vec::new();
    let hs: Vec<f64> = if s.is_radial_disk {
        s.sweep.iter().map(|(h, _)| *h).collect()
    } else {
        // Dense pencils are expensive; check ordering at the sweep end.
        vec![*config.h_list.last().unwrap()]
    };
    for &h in &hs {
        let (n_r_e, n_t_e) = if s.is_radial_disk {
            (config.n_r.max(256), 16)
        } else {
            dense_grid(config)
        };
        let form = assemble_weighted_dbar(&s.potential, h, n_r_e, n_t_e)?;
        let solved = solve_lowest(&form, config.k_max)?;
        for k in 1..=config.k_max {
            let bound = trial_space_upper_bound(&form, &s.potential, &s.bargmann, &s.hardy, k, true)?;
            let lam = solved.pairs[k - 1].value;
            if bound < lam * (1.0 - 1e-9) {
                pass = false;
                detail.push_str(&format!("ordering violated at h={h}, k={k}; "));
            }
            if k == 1 {
                let pred = predict_lambda(&s.predictions[0], h)?;
                ratios.push((h, bound / pred.log_lambda_sup.exp()));
            }
        }
    }
    if s.is_radial_disk {
        // Ratio to the prediction decreasing in h and within [1, 3] at the
        // deep end of the window. The comparison window scales with the
        // exponential depth 2|φ_min|/h ∈ [1.5, 3.5]; outside it either the
        // prediction is out of regime or it overshoots the bound itself.
        let depth = |h: f64| 2.0 * s.potential.phi_min.abs() / h;
        let window: Vec<&(f64, f64)> = ratios
            .iter()
            .filter(|(h, _)| depth(*h) >= 1.5 && depth(*h) <= 3.5)
            .collect();
        for w in window.windows(2) {
            if w[1].1 > w[0].1 * (1.0 + 1e-6) {
                pass = false;
                detail.push_str(&format!(
                    "ratio not decreasing between h={} and h={}; ",
                    w[0].0, w[1].0
                ));
            }
        }
        if let Some(&&(h, ratio)) = window.last() {
            if !(1.0 - 1e-9..=3.0).contains(&ratio) {
                pass = false;
                detail.push_str(&format!("ratio {ratio:.3} at h={h} outside [1, 3]; "));
            }
            detail.push_str(&format!("ratio {ratio:.3} at h={h}"));
        }
    }
    Ok(CheckResult::new(
        "variational-ordering",
        "trial-space bound dominates the solved eigenvalues and tracks the prediction",
        pass,
        detail,
    ))
}

/// Sweep values inside the concentration regime: the cutoff layer must be
/// thin relative to the domain (at larger `h` the ground state is shaped
/// by the cutoff, not the Gaussian window, and the fraction is
/// legitimately non-monotone).
fn concentration_window(config: &RunConfig, s: &Solved) -> Vec<f64> {
    let radius = config.domain.radius();
    let dn_min = s
        .potential
        .boundary_dn_physical
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // Layer width h/∂_nφ at most 12% of the radius.
    config
        .h_list
        .iter()
        .copied()
        .filter(|&h| h <= 0.12 * radius * dn_min)
        .collect()
}

fn concentration_in_regime(config: &RunConfig, s: &Solved) -> bool {
    concentration_window(config, s).len() >= 3
}

fn check_concentration(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let radius = config.domain.radius();
    let alpha = 0.4;
    let mut pass = true;
    let mut fractions = Vec::new();
    for h in concentration_window(config, s) {
        let (frac, clipped) =
            radial_concentration(&s.field, radius, h, alpha, config.n_r.max(300))?;
        if clipped {
            pass = false;
        }
        fractions.push((h, frac));
    }
    for w in fractions.windows(2) {
        if w[1].1 <= w[0].1 {
            pass = false;
        }
    }
    let (h_last, last) = *fractions.last().expect("window checked nonempty");
    // The Gaussian window predicts 1 - exp(-λ_min(Hess) h^{2α-1}); enforce
    // the 0.95 threshold exactly where that prediction says it is
    // attainable.
    let lam_min = {
        let h = &s.potential.hessian;
        let tr = h[(0, 0)] + h[(1, 1)];
        let det = h[(0, 0)] * h[(1, 1)] - h[(0, 1)] * h[(1, 0)];
        0.5 * (tr - (tr * tr - 4.0 * det).max(0.0).sqrt())
    };
    let predicted_last = 1.0 - (-lam_min * h_last.powf(2.0 * alpha - 1.0)).exp();
    let threshold_applies = predicted_last >= 0.95;
    if threshold_applies && last <= 0.95 {
        pass = false;
    }
    Ok(CheckResult::new(
        "concentration",
        "ground-state weighted mass concentrates in D(x_min, h^0.4) as h decreases",
        pass,
        format!(
            "fractions {:?}; final {last:.4} (window prediction {predicted_last:.4}, \
             threshold enforced: {threshold_applies})",
            fractions
                .iter()
                .map(|&(h, f)| format!("h={h}:{f:.3}"))
                .collect::<Vec<_>>()
        ),
    )
    .with_value(last, 0.95))
}

fn check_nonradial_theta0(config: &RunConfig, s: &Solved) -> paulilab::Result<CheckResult> {
    let mut pass = true;
    let mut detail = String::new();
    let t0 = s.symmetry.theta0;
    if !(t0 > 0.0 && t0 < 1.0) {
        pass = false;
    }
    // Stability across resolutions.
    let p2 = solve_flux_potential_with_map(
        &s.map,
        &s.field,
        3 * config.n_r / 2,
        3 * config.n_theta / 2,
    )?;
    let t0b = theta0(&p2)?.theta0;
    let dt = (t0 - t0b).abs();
    if dt > 1e-6 {
        pass = false;
    }
    detail.push_str(&format!("θ0 = {t0:.8}, resolution shift {dt:.2e}; "));

    // Normalized λ1 within the widened bracket at the sweep end.
    if let Some((h, res)) = s.sweep.last() {
        let nu = res.normalized(1);
        let lo = 0.7 * s.predictions[0].c_inf;
        let hi = 1.3 * s.predictions[0].c_sup;
        if !(nu >= lo && nu <= hi) {
            pass = false;
        }
        detail.push_str(&format!("ν1({h}) = {nu:.4} ∈ [{lo:.4}, {hi:.4}]"));
    }
    Ok(CheckResult::new(
        "nonradial-theta0",
        "boundary symmetry ratio stable across resolutions; λ1 within the widened bracket",
        pass,
        detail,
    )
    .with_value(t0, 1e-6))
}
