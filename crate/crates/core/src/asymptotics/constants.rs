//! The sharp spectral constants and the eigenvalue prediction
//! `λ_k(h) ≈ C(k) h^{1-k} e^{2φ_min/h}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spaces::{hardy_distance, BargmannBasis, BoundarySymmetry, HardyModel};

/// Everything needed to predict `λ_k(h)` for one `k`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct AsymptoticPrediction {
    pub k: usize,
    pub c_sup: f64,
    pub c_inf: f64,
    /// Closed-form radial constant when the configuration is radial.
    pub c_rad: Option<f64>,
    pub theta0: f64,
    pub phi_min: f64,
}

/// Prediction of `λ_k(h)` in log scale with the `[C_inf, C_sup]` bracket.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Prediction {
    pub h: f64,
    pub k: usize,
    /// `ln(C_sup h^{1-k} e^{2φ_min/h})`.
    pub log_lambda_sup: f64,
    pub log_lambda_inf: f64,
    /// The asymptotic law is only claimed for small `h`.
    pub out_of_regime: bool,
}

/// `C_sup(k) = 2 (dist_H((z-z_min)^{k-1}, H²_k) / N_B(P_{k-1}))²`.
pub fn constant_sup(k: usize, bargmann: &BargmannBasis, hardy: &HardyModel) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    if bargmann.n_max + 1 < k {
        return Err(Error::Basis(format!(
            "Bargmann basis order {} is missing degree {}",
            bargmann.n_max,
            k - 1
        )));
    }
    let dist_h = hardy_distance(k, hardy)?;
    let dist_b = bargmann.norm(k - 1);
    Ok(2.0 * (dist_h / dist_b).powi(2))
}

/// Radial closed form `B(0)^k Φ R^{2k-2} / (2^{k-2} (k-1)!)`.
pub fn radial_constant(k: usize, b_center: f64, flux: f64, radius: f64) -> f64 {
    let mut fact = 1.0;
    for j in 2..k {
        fact *= j as f64;
    }
    b_center.powi(k as i32) * flux * radius.powi(2 * k as i32 - 2) / (2f64.powi(k as i32 - 2) * fact)
}

/// Assemble the prediction record for one `k`.
pub fn build_prediction(
    k: usize,
    bargmann: &BargmannBasis,
    hardy: &HardyModel,
    symmetry: &BoundarySymmetry,
    phi_min: f64,
    radial: Option<(f64, f64, f64)>,
) -> Result<AsymptoticPrediction> {
    let c_sup = constant_sup(k, bargmann, hardy)?;
    Ok(AsymptoticPrediction {
        k,
        c_sup,
        c_inf: symmetry.theta0 * c_sup,
        c_rad: radial.map(|(b0, flux, r)| radial_constant(k, b0, flux, r)),
        theta0: symmetry.theta0,
        phi_min,
    })
}

/// Evaluate the prediction at `h` (log space).
pub fn predict_lambda(prediction: &AsymptoticPrediction, h: f64) -> Result<Prediction> {
    if !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("h = {h} must be positive")));
    }
    let base = (1.0 - prediction.k as f64) * h.ln() + 2.0 * prediction.phi_min / h;
    Ok(Prediction {
        h,
        k: prediction.k,
        log_lambda_sup: prediction.c_sup.ln() + base,
        log_lambda_inf: prediction.c_inf.ln() + base,
        out_of_regime: h > 0.5,
    })
}
