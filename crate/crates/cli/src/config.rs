//! Run configuration: a flat `key = value` text file, fully validated with
//! every violation reported (not just the first).

use std::collections::BTreeSet;
use std::path::PathBuf;

use paulilab::geometry::{DomainSpec, RadialFn};
use paulilab::numerics::grid::RadialGrid;
use paulilab::potential::MagneticField;

use crate::expr::{self, Bindings, Expr, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SolverMode {
    Dense,
    Iterative,
}

/// Magnetic field specification as written in the config.
#[derive(Debug, Clone)]
pub enum FieldSpec {
    Constant(f64),
    Radial { src: String, ast: Expr },
    Planar { src: String, ast: Expr },
}

impl FieldSpec {
    pub fn descriptor(&self) -> String {
        match self {
            FieldSpec::Constant(v) => format!("constant:{v:.17e}"),
            FieldSpec::Radial { src, .. } => format!("radial:{src}"),
            FieldSpec::Planar { src, .. } => format!("planar:{src}"),
        }
    }

    pub fn is_radial(&self) -> bool {
        !matches!(self, FieldSpec::Planar { .. })
    }

    /// Build the evaluator used by the solvers.
    pub fn field(&self) -> MagneticField {
        match self {
            FieldSpec::Constant(v) => MagneticField::constant(*v),
            FieldSpec::Radial { src, ast } => {
                let ast = ast.clone();
                MagneticField::radial(src.clone(), move |r| {
                    ast.eval(&Bindings { r, ..Default::default() })
                })
            }
            FieldSpec::Planar { src, ast } => {
                let ast = ast.clone();
                MagneticField::planar(src.clone(), move |x: [f64; 2]| {
                    ast.eval(&Bindings {
                        x1: x[0],
                        x2: x[1],
                        ..Default::default()
                    })
                })
            }
        }
    }
}

#[derive(Debug, Clone)]
pub enum DomainConfig {
    UnitDisk,
    Disk { radius: f64 },
    StarLike { src: String, ast: Expr },
}

impl DomainConfig {
    pub fn spec(&self, boundary_m: usize) -> DomainSpec {
        match self {
            DomainConfig::UnitDisk => DomainSpec::unit_disk(boundary_m),
            DomainConfig::Disk { radius } => DomainSpec::disk(*radius, boundary_m),
            DomainConfig::StarLike { src, ast } => {
                let ast = ast.clone();
                DomainSpec::star_like(
                    RadialFn::new(src.clone(), move |s| {
                        ast.eval(&Bindings { s, ..Default::default() })
                    }),
                    boundary_m,
                )
            }
        }
    }

    pub fn is_disk(&self) -> bool {
        !matches!(self, DomainConfig::StarLike { .. })
    }

    pub fn radius(&self) -> f64 {
        match self {
            DomainConfig::UnitDisk => 1.0,
            DomainConfig::Disk { radius } => *radius,
            DomainConfig::StarLike { .. } => 1.0,
        }
    }
}

/// Fully validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub domain: DomainConfig,
    pub field: FieldSpec,
    /// Strictly decreasing positive values.
    pub h_list: Vec<f64>,
    pub k_max: usize,
    pub n_r: usize,
    pub n_theta: usize,
    pub boundary_m: usize,
    pub bargmann_n_max: usize,
    pub hardy_truncation: usize,
    pub bracket_tol: f64,
    pub output_dir: PathBuf,
    pub cache: bool,
    pub solver: SolverMode,
    pub seed: u64,
    /// Positivity certificate: sampled minimum of the field over the
    /// closed domain.
    pub field_min: f64,
}

const KNOWN_KEYS: &[&str] = &[
    "kind",
    "R",
    "radius_fn",
    "field",
    "h",
    "k_max",
    "n_r",
    "n_theta",
    "boundary_m",
    "bargmann_n_max",
    "hardy_truncation",
    "bracket_tol",
    "output_dir",
    "cache",
    "solver",
    "seed",
];

/// Parse and validate a config file body. On failure, returns every
/// violation found.
pub fn parse_config(text: &str) -> Result<RunConfig, Vec<String>> {
    let mut errors = Vec::new();
    let mut pairs: Vec<(String, String)> = Vec::new();
    let mut seen = BTreeSet::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            errors.push(format!("line {}: expected 'key = value'", lineno + 1));
            continue;
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if !KNOWN_KEYS.contains(&key.as_str()) {
            errors.push(format!("line {}: unknown key '{key}'", lineno + 1));
            continue;
        }
        if !seen.insert(key.clone()) {
            errors.push(format!("line {}: duplicate key '{key}'", lineno + 1));
            continue;
        }
        pairs.push((key, value));
    }
    let get = |k: &str| pairs.iter().find(|(key, _)| key == k).map(|(_, v)| v.as_str());

    // Domain.
    let kind = get("kind").unwrap_or("unit-disk").to_string();
    let domain = match kind.as_str() {
        "unit-disk" => {
            if get("R").is_some() {
                errors.push("key 'R' is only valid for kind = disk".into());
            }
            if get("radius_fn").is_some() {
                errors.push("key 'radius_fn' is only valid for kind = star-like".into());
            }
            DomainConfig::UnitDisk
        }
        "disk" => {
            let radius = match get("R") {
                Some(v) => match v.parse::<f64>() {
                    Ok(r) if r > 0.0 && r.is_finite() => r,
                    Ok(r) => {
                        errors.push(format!("R = {r} must be positive"));
                        1.0
                    }
                    Err(_) => {
                        errors.push(format!("R = '{v}' is not a number"));
                        1.0
                    }
                },
                None => {
                    errors.push("kind = disk requires key 'R'".into());
                    1.0
                }
            };
            DomainConfig::Disk { radius }
        }
        "star-like" => match get("radius_fn") {
            Some(src) => match expr::parse(src) {
                Ok(ast) => {
                    let bad: Vec<Var> = ast
                        .variables()
                        .into_iter()
                        .filter(|v| *v != Var::S)
                        .collect();
                    if !bad.is_empty() {
                        errors.push(format!(
                            "radius_fn may only use the angle variable 's'; found {:?}",
                            bad.iter().map(|v| v.name()).collect::<Vec<_>>()
                        ));
                    }
                    DomainConfig::StarLike {
                        src: src.to_string(),
                        ast,
                    }
                }
                Err(e) => {
                    errors.push(format!("radius_fn: {e}"));
                    DomainConfig::UnitDisk
                }
            },
            None => {
                errors.push("kind = star-like requires key 'radius_fn'".into());
                DomainConfig::UnitDisk
            }
        },
        other => {
            errors.push(format!(
                "unknown kind '{other}' (expected unit-disk, disk or star-like)"
            ));
            DomainConfig::UnitDisk
        }
    };

    // Field.
    let field = match get("field") {
        Some(v) => {
            if let Some(rest) = v.strip_prefix("constant:") {
                match rest.trim().parse::<f64>() {
                    Ok(c) => FieldSpec::Constant(c),
                    Err(_) => {
                        errors.push(format!("field constant '{}' is not a number", rest.trim()));
                        FieldSpec::Constant(1.0)
                    }
                }
            } else if let Some(rest) = v.strip_prefix("radial:") {
                let src = rest.trim().to_string();
                match expr::parse(&src) {
                    Ok(ast) => {
                        let bad: Vec<Var> = ast
                            .variables()
                            .into_iter()
                            .filter(|v| *v != Var::R)
                            .collect();
                        if !bad.is_empty() {
                            errors.push(format!(
                                "radial field may only use 'r'; found {:?}",
                                bad.iter().map(|v| v.name()).collect::<Vec<_>>()
                            ));
                        }
                        FieldSpec::Radial { src, ast }
                    }
                    Err(e) => {
                        errors.push(format!("field radial: {e}"));
                        FieldSpec::Constant(1.0)
                    }
                }
            } else if let Some(rest) = v.strip_prefix("expression:") {
                let src = rest.trim().to_string();
                match expr::parse(&src) {
                    Ok(ast) => {
                        let bad: Vec<Var> = ast
                            .variables()
                            .into_iter()
                            .filter(|v| !matches!(v, Var::X1 | Var::X2))
                            .collect();
                        if !bad.is_empty() {
                            errors.push(format!(
                                "planar field may only use 'x1', 'x2'; found {:?}",
                                bad.iter().map(|v| v.name()).collect::<Vec<_>>()
                            ));
                        }
                        FieldSpec::Planar { src, ast }
                    }
                    Err(e) => {
                        errors.push(format!("field expression: {e}"));
                        FieldSpec::Constant(1.0)
                    }
                }
            } else {
                errors.push(format!(
                    "field '{v}' must start with 'constant:', 'radial:' or 'expression:'"
                ));
                FieldSpec::Constant(1.0)
            }
        }
        None => {
            errors.push("missing required key 'field'".into());
            FieldSpec::Constant(1.0)
        }
    };

    // h list.
    let mut h_list = Vec::new();
    match get("h") {
        Some(v) => {
            for part in v.split(',') {
                match part.trim().parse::<f64>() {
                    Ok(h) if h > 0.0 && h.is_finite() => h_list.push(h),
                    Ok(h) => errors.push(format!("h value {h} must be positive")),
                    Err(_) => errors.push(format!("h value '{}' is not a number", part.trim())),
                }
            }
            if h_list.windows(2).any(|w| w[0] <= w[1]) {
                errors.push("h must be strictly decreasing".into());
            }
            if h_list.is_empty() {
                errors.push("h list is empty".into());
            }
        }
        None => errors.push("missing required key 'h'".into()),
    }

    let parse_usize = |key: &str, default: usize, errors: &mut Vec<String>| -> usize {
        match get(key) {
            Some(v) => match v.parse::<usize>() {
                Ok(n) if n > 0 => n,
                _ => {
                    errors.push(format!("{key} = '{v}' must be a positive integer"));
                    default
                }
            },
            None => default,
        }
    };
    let k_max = parse_usize("k_max", 3, &mut errors);
    let n_r = parse_usize("n_r", 256, &mut errors);
    let n_theta = parse_usize("n_theta", 64, &mut errors);
    let boundary_m = parse_usize("boundary_m", 256, &mut errors);
    let bargmann_n_max = parse_usize("bargmann_n_max", 8, &mut errors);
    let hardy_truncation = parse_usize("hardy_truncation", 24, &mut errors);
    if n_theta % 2 != 0 {
        errors.push(format!("n_theta = {n_theta} must be even"));
    }
    if boundary_m % 2 != 0 {
        errors.push(format!("boundary_m = {boundary_m} must be even"));
    }
    if bargmann_n_max + 1 < k_max {
        errors.push(format!(
            "bargmann_n_max = {bargmann_n_max} too small for k_max = {k_max}"
        ));
    }
    if hardy_truncation < k_max + 10 {
        errors.push(format!(
            "hardy_truncation = {hardy_truncation} must be at least k_max + 10 = {}",
            k_max + 10
        ));
    }
    // Grid-backed potentials carry n_theta boundary samples; the Hardy
    // least squares needs 4(N+1) of them. Radial fields on disks go
    // through the quadrature oracle, whose boundary sampling is fixed.
    let grid_backed = kind == "star-like" || get("field").is_some_and(|v| v.starts_with("expression:"));
    if grid_backed && n_theta < 4 * (hardy_truncation + 1) {
        errors.push(format!(
            "n_theta = {n_theta} too small for hardy_truncation = {hardy_truncation} on a \
             grid-backed configuration (need at least {})",
            4 * (hardy_truncation + 1)
        ));
    }

    let bracket_tol = match get("bracket_tol") {
        Some(v) => match v.parse::<f64>() {
            Ok(t) if t > 0.0 && t < 1.0 => t,
            _ => {
                errors.push(format!("bracket_tol = '{v}' must be in (0, 1)"));
                0.25
            }
        },
        None => 0.25,
    };
    let output_dir = PathBuf::from(get("output_dir").unwrap_or("out"));
    let cache = match get("cache").unwrap_or("on") {
        "on" => true,
        "off" => false,
        other => {
            errors.push(format!("cache = '{other}' must be 'on' or 'off'"));
            true
        }
    };
    let solver = match get("solver").unwrap_or("dense") {
        "dense" => SolverMode::Dense,
        "iterative" => SolverMode::Iterative,
        other => {
            errors.push(format!("solver = '{other}' must be 'dense' or 'iterative'"));
            SolverMode::Dense
        }
    };
    let seed = match get("seed") {
        Some(v) => v.parse::<u64>().unwrap_or_else(|_| {
            errors.push(format!("seed = '{v}' must be a nonnegative integer"));
            0
        }),
        None => 0,
    };

    // Boundary-layer feasibility for the smallest h (proxy layer width
    // h_min; the assembly re-checks with the true normal derivative).
    if let Some(&h_min) = h_list.last() {
        if let Err(e) = RadialGrid::clustered(n_r, h_min.min(0.5), 12) {
            errors.push(format!("boundary-layer resolution check: {e}"));
        }
    }

    // Positivity certificate on a dense sample of the closed domain.
    let mut field_min = f64::INFINITY;
    if errors.is_empty() {
        let f = field.field();
        let spec = domain.spec(boundary_m);
        match paulilab::geometry::build_domain(&spec) {
            Ok(boundary) => {
                for i in 0..48 {
                    for jt in 0..48 {
                        let frac = i as f64 / 47.0;
                        let theta = 2.0 * std::f64::consts::PI * jt as f64 / 48.0;
                        let edge = boundary.point_at_angle(theta);
                        let x = [edge[0] * frac, edge[1] * frac];
                        let b = f.eval(x);
                        if !b.is_finite() {
                            errors.push(format!(
                                "field evaluates to {b} at ({:.3}, {:.3})",
                                x[0], x[1]
                            ));
                            break;
                        }
                        field_min = field_min.min(b);
                    }
                }
                if field_min <= 0.0 {
                    errors.push(format!(
                        "field hypothesis violated: sampled minimum {field_min:.6} is not positive"
                    ));
                }
            }
            Err(e) => errors.push(format!("domain construction: {e}")),
        }
    }

    if errors.is_empty() {
        Ok(RunConfig {
            domain,
            field,
            h_list,
            k_max,
            n_r,
            n_theta,
            boundary_m,
            bargmann_n_max,
            hardy_truncation,
            bracket_tol,
            output_dir,
            cache,
            solver,
            seed,
            field_min,
        })
    } else {
        Err(errors)
    }
}

impl RunConfig {
    /// Canonical content string for cache keying (everything that affects
    /// the numerics, none of the output plumbing).
    pub fn numeric_descriptor(&self) -> String {
        format!(
            "{}|{}|nr={}|nt={}|m={}|nb={}|ht={}",
            self.domain.spec(self.boundary_m).descriptor(),
            self.field.descriptor(),
            self.n_r,
            self.n_theta,
            self.boundary_m,
            self.bargmann_n_max,
            self.hardy_truncation,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_with_defaults() {
        let cfg = parse_config("kind = unit-disk\nfield = constant: 1\nh = 0.3, 0.2\nk_max = 2\n")
            .unwrap();
        assert_eq!(cfg.h_list, vec![0.3, 0.2]);
        assert_eq!(cfg.k_max, 2);
        assert_eq!(cfg.n_r, 256);
        assert_eq!(cfg.boundary_m, 256);
        assert!(cfg.cache);
        assert_eq!(cfg.solver, SolverMode::Dense);
        assert!((cfg.field_min - 1.0).abs() < 1e-12);
    }

    #[test]
    fn increasing_h_rejected() {
        let errs =
            parse_config("field = constant: 1\nh = 0.1, 0.2\n").unwrap_err();
        assert!(errs.iter().any(|e| e.contains("strictly decreasing")), "{errs:?}");
    }

    #[test]
    fn unknown_key_named() {
        let errs = parse_config("field = constant: 1\nh = 0.2\nwavelength = 3\n").unwrap_err();
        assert!(errs.iter().any(|e| e.contains("wavelength")), "{errs:?}");
    }

    #[test]
    fn all_violations_reported() {
        let errs = parse_config("kind = disk\nh = 0.1, 0.2\nk_max = 0\n").unwrap_err();
        // Missing R, missing field, non-monotone h, bad k_max.
        assert!(errs.len() >= 4, "{errs:?}");
    }

    #[test]
    fn positivity_certificate() {
        let cfg = parse_config(
            "kind = unit-disk\nfield = expression: 1 + 0.5*cos(x1)\nh = 0.3\nn_theta = 128\n",
        )
        .unwrap();
        assert!(cfg.field_min > 0.45, "min {}", cfg.field_min);

        let errs = parse_config(
            "kind = unit-disk\nfield = expression: x1\nh = 0.3\nn_theta = 128\n",
        )
        .unwrap_err();
        assert!(errs.iter().any(|e| e.contains("hypothesis")), "{errs:?}");
    }

    #[test]
    fn wrong_variable_rejected() {
        let errs = parse_config("field = radial: 1 + x1\nh = 0.3\n").unwrap_err();
        assert!(errs.iter().any(|e| e.contains("'r'")), "{errs:?}");
    }
}
