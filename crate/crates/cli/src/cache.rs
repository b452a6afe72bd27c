//! Content-hash keyed JSON cache for solved potentials and function-space
//! bases, so h-sweeps and repeated runs reuse the expensive stages.

use std::path::{Path, PathBuf};

use paulilab::nalgebra::Matrix2;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use paulilab::geometry::ConformalMap;
use paulilab::potential::{FluxPotential, MagneticField, RadialData};

use crate::hexvec;

/// Environment variable overriding the cache directory.
pub const CACHE_DIR_ENV: &str = "PAULILAB_CACHE_DIR";

pub fn cache_dir(output_dir: &Path) -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| output_dir.join("cache"))
}

/// Hex digest of a content descriptor.
pub fn content_key(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for p in parts {
        hasher.update(p.as_bytes());
        hasher.update([0u8]);
    }
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

pub fn load<T: for<'de> Deserialize<'de>>(dir: &Path, key: &str) -> Option<T> {
    let path = dir.join(format!("{key}.json"));
    let text = std::fs::read_to_string(path).ok()?;
    serde_json::from_str(&text).ok()
}

pub fn store<T: Serialize>(dir: &Path, key: &str, value: &T) -> std::io::Result<()> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("{key}.json"));
    let text = serde_json::to_string(value).expect("serializable cache value");
    std::fs::write(path, text)
}

pub fn clean(dir: &Path) -> std::io::Result<usize> {
    let mut removed = 0;
    if dir.is_dir() {
        for entry in std::fs::read_dir(dir)? {
            let entry = entry?;
            if entry.path().extension().is_some_and(|e| e == "json") {
                std::fs::remove_file(entry.path())?;
                removed += 1;
            }
        }
    }
    Ok(removed)
}

/// Serializable mirror of a solved potential (the conformal map and field
/// evaluators are reattached on load; they are cheap to rebuild and fully
/// determined by the config).
#[derive(Serialize, Deserialize)]
pub struct PotentialData {
    #[serde(with = "hexvec")]
    radial_nodes: Vec<f64>,
    theta_count: usize,
    /// Interleaved (re, im) pairs per mode, hex packed.
    #[serde(with = "hexvec::nested")]
    modes: Vec<Vec<f64>>,
    #[serde(with = "hexvec")]
    values: Vec<f64>,
    #[serde(with = "hexvec")]
    boundary_dn_disk: Vec<f64>,
    #[serde(with = "hexvec")]
    boundary_dn_physical: Vec<f64>,
    phi_min: f64,
    y_min: [f64; 2],
    x_min: [f64; 2],
    z_min: (f64, f64),
    hessian: [[f64; 2]; 2],
    hessian_disk: [[f64; 2]; 2],
    flux: f64,
    flux_boundary: f64,
    radial: Option<RadialData>,
    b0: f64,
    solve_residual: f64,
    warnings: Vec<String>,
}

impl PotentialData {
    pub fn from_potential(p: &FluxPotential) -> Self {
        PotentialData {
            radial_nodes: p.radial_nodes.clone(),
            theta_count: p.theta_count,
            modes: p
                .modes
                .iter()
                .map(|m| m.iter().flat_map(|c| [c.re, c.im]).collect())
                .collect(),
            values: p.values.clone(),
            boundary_dn_disk: p.boundary_dn_disk.clone(),
            boundary_dn_physical: p.boundary_dn_physical.clone(),
            phi_min: p.phi_min,
            y_min: p.y_min,
            x_min: p.x_min,
            z_min: (p.z_min.re, p.z_min.im),
            hessian: [
                [p.hessian[(0, 0)], p.hessian[(0, 1)]],
                [p.hessian[(1, 0)], p.hessian[(1, 1)]],
            ],
            hessian_disk: [
                [p.hessian_disk[(0, 0)], p.hessian_disk[(0, 1)]],
                [p.hessian_disk[(1, 0)], p.hessian_disk[(1, 1)]],
            ],
            flux: p.flux,
            flux_boundary: p.flux_boundary,
            radial: p.radial.clone(),
            b0: p.b0,
            solve_residual: p.solve_residual,
            warnings: p.warnings.clone(),
        }
    }

    pub fn into_potential(self, map: ConformalMap, field: MagneticField) -> FluxPotential {
        FluxPotential {
            radial_nodes: self.radial_nodes,
            theta_count: self.theta_count,
            modes: self
                .modes
                .into_iter()
                .map(|m| {
                    m.chunks_exact(2)
                        .map(|c| Complex64::new(c[0], c[1]))
                        .collect()
                })
                .collect(),
            values: self.values,
            boundary_dn_disk: self.boundary_dn_disk,
            boundary_dn_physical: self.boundary_dn_physical,
            phi_min: self.phi_min,
            y_min: self.y_min,
            x_min: self.x_min,
            z_min: Complex64::new(self.z_min.0, self.z_min.1),
            hessian: Matrix2::new(
                self.hessian[0][0],
                self.hessian[0][1],
                self.hessian[1][0],
                self.hessian[1][1],
            ),
            hessian_disk: Matrix2::new(
                self.hessian_disk[0][0],
                self.hessian_disk[0][1],
                self.hessian_disk[1][0],
                self.hessian_disk[1][1],
            ),
            flux: self.flux,
            flux_boundary: self.flux_boundary,
            map,
            field,
            radial: self.radial,
            b0: self.b0,
            solve_residual: self.solve_residual,
            warnings: self.warnings,
        }
    }
}

/// Compact mirror of the radial quadrature tables.
#[derive(Serialize, Deserialize)]
pub struct RadialCache {
    pub radius: f64,
    #[serde(with = "hexvec")]
    pub rs: Vec<f64>,
    #[serde(with = "hexvec")]
    pub phi: Vec<f64>,
    #[serde(with = "hexvec")]
    pub dphi: Vec<f64>,
    pub phi_center: f64,
    pub dn_boundary: f64,
    pub flux: f64,
    pub b_center: f64,
    pub b0: f64,
}

impl RadialCache {
    pub fn from_data(data: &RadialData, b0: f64) -> Self {
        RadialCache {
            radius: data.radius,
            rs: data.rs.clone(),
            phi: data.phi.clone(),
            dphi: data.dphi.clone(),
            phi_center: data.phi_center,
            dn_boundary: data.dn_boundary,
            flux: data.flux,
            b_center: data.b_center,
            b0,
        }
    }

    pub fn into_data(self) -> (RadialData, f64) {
        (
            RadialData {
                radius: self.radius,
                rs: self.rs,
                phi: self.phi,
                dphi: self.dphi,
                phi_center: self.phi_center,
                dn_boundary: self.dn_boundary,
                flux: self.flux,
                b_center: self.b_center,
            },
            self.b0,
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn keys_are_stable_and_distinct() {
        let a = content_key(&["domain", "field", "64"]);
        let b = content_key(&["domain", "field", "64"]);
        let c = content_key(&["domain", "field", "128"]);
        assert_eq!(a, b);
        assert_ne!(a, c);
        // Separator prevents boundary ambiguity.
        assert_ne!(content_key(&["ab", "c"]), content_key(&["a", "bc"]));
    }

    #[test]
    fn potential_round_trip() {
        let p = paulilab::potential::radial_solve(&MagneticField::constant(1.0), 1.0).unwrap();
        let dir = std::env::temp_dir().join("paulilab-cache-test");
        let _ = std::fs::remove_dir_all(&dir);
        let data = PotentialData::from_potential(&p);
        store(&dir, "k1", &data).unwrap();
        let loaded: PotentialData = load(&dir, "k1").unwrap();
        let p2 = loaded.into_potential(p.map.clone(), p.field.clone());
        assert_eq!(p.phi_min, p2.phi_min);
        assert_eq!(p.flux, p2.flux);
        assert_eq!(p.values, p2.values);
        assert_eq!(clean(&dir).unwrap(), 1);
    }
}
