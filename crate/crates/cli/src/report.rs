//! Deterministic CSV and JSON artifact writers. Numbers are written with
//! Rust's shortest round-trip formatting so identical runs produce
//! bit-identical bodies.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

#[derive(Debug, Clone, Serialize)]
pub struct PredictionRow {
    pub k: usize,
    pub c_sup: f64,
    pub c_inf: f64,
    pub c_rad: Option<f64>,
    pub theta0: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub h: f64,
    pub k: usize,
    pub log10_lambda: f64,
    pub lambda_normalized: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
    pub in_bracket: bool,
    pub residual: f64,
    pub solver: String,
    pub grid: String,
    /// Set when `λ_k ≥ 2 B₀ h`, outside the holomorphic-reduction regime.
    pub gauge_regime_flag: bool,
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_predictions(path: &Path, rows: &[PredictionRow]) -> std::io::Result<()> {
    let mut out = String::from("k,c_sup,c_inf,c_rad,theta0\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.k,
            r.c_sup,
            r.c_inf,
            fmt_opt(r.c_rad),
            r.theta0
        ));
    }
    write_atomic(path, out.as_bytes())
}

pub fn write_sweep(path: &Path, rows: &[SweepRow]) -> std::io::Result<()> {
    let mut out = String::from(
        "h,k,log10_lambda,lambda_normalized,bracket_lo,bracket_hi,in_bracket,residual,solver,grid,gauge_regime_flag\n",
    );
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{}\n",
            r.h,
            r.k,
            r.log10_lambda,
            r.lambda_normalized,
            r.bracket_lo,
            r.bracket_hi,
            r.in_bracket,
            r.residual,
            r.solver,
            r.grid,
            r.gauge_regime_flag
        ));
    }
    write_atomic(path, out.as_bytes())
}

/// One verification check outcome.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
}

impl CheckResult {
    pub fn new(id: &str, name: &str, pass: bool, detail: String) -> Self {
        CheckResult {
            id: id.into(),
            name: name.into(),
            pass,
            detail,
            value: None,
            tolerance: None,
        }
    }

    pub fn with_value(mut self, value: f64, tolerance: f64) -> Self {
        self.value = Some(value);
        self.tolerance = Some(tolerance);
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub config: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckResult>,
    pub stage_seconds: BTreeMap<String, f64>,
    pub cache_hits: BTreeMap<String, bool>,
    pub warnings: Vec<String>,
}

pub fn write_summary(path: &Path, summary: &Summary) -> std::io::Result<()> {
    let text = serde_json::to_string_pretty(summary).expect("serializable summary");
    write_atomic(path, text.as_bytes())
}

pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    {
        let mut f = std::fs::File::create(&tmp)?;
        f.write_all(bytes)?;
    }
    std::fs::rename(tmp, path)
}
