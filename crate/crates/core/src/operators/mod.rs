//! Discrete quadratic forms for the weighted Cauchy-Riemann problem and the
//! Pauli/magnetic-Laplacian operators, their eigensolvers, and pointwise
//! operator-identity probes.

mod dbar2d;
mod identities;
mod pauli;
mod radial_modes;
mod solve;

pub use dbar2d::assemble_weighted_dbar;
pub use identities::{cr_energy_identity_gap, gauge_identity_residual, CrEnergyGaps};
pub use pauli::{assemble_magnetic_laplacian, assemble_pauli_minus};
pub use radial_modes::{clustered_mesh, radial_mode_solver};
pub use solve::{rayleigh_ritz_bound, solve_lowest};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::numerics::banded::SymBanded;

/// Quadratic-form flavor carried by a [`DiscreteForm`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FormKind {
    /// `4h² ∫ e^{-2(φ-φ_min)/h} |∂̄v|²` against `∫ e^{-2(φ-φ_min)/h} |F'|² |v|²`.
    WeightedDbar,
    /// `‖(p-A)u‖² - h∫B|u|²` against the plain `L²` mass.
    PauliMinus,
    /// `‖(p-A)u‖²` against the plain `L²` mass.
    MagneticLaplacian,
}

/// One angular mode's radial pencil (real symmetric banded matrices).
#[derive(Debug, Clone)]
pub struct ModeBlock {
    pub mode: i64,
    pub stiffness: SymBanded,
    pub mass: SymBanded,
    /// Radial positions of the degrees of freedom.
    pub dof_nodes: Vec<f64>,
}

/// Matrix backend of a form: mode-decoupled banded pencils, or one dense
/// Hermitian pencil when the weight couples the angular modes.
#[derive(Debug, Clone)]
pub enum FormMatrices {
    Modes(Vec<ModeBlock>),
    Dense {
        stiffness: DMatrix<Complex64>,
        mass: DMatrix<Complex64>,
        /// Signed angular mode per slot (slot-major indexing
        /// `slot * n_r + j`).
        slot_modes: Vec<i64>,
    },
}

/// Assembled discrete pencil `(S, M)`. Generalized eigenvalues are the
/// physical eigenvalues; the `exp(-2(φ-φ_min)/h)` weight shift only
/// conditions the entries (maximum weight exactly 1) and is recorded in
/// `exponent_shift = 2 φ_min / h` for log-scale reporting.
#[derive(Debug, Clone)]
pub struct DiscreteForm {
    pub kind: FormKind,
    pub matrices: FormMatrices,
    pub h: f64,
    pub exponent_shift: f64,
    /// Radial grid of the assembly (pullback disk for the weighted form,
    /// physical disk for the Pauli forms).
    pub radial_nodes: Vec<f64>,
    pub cell_weights: Vec<f64>,
    pub theta_count: usize,
    /// Value-space numerator weight table (`n_r × n_theta`).
    pub weight_num: Vec<f64>,
    /// Value-space mass weight table (`n_r × n_theta`).
    pub weight_mass: Vec<f64>,
    pub warnings: Vec<String>,
}

impl DiscreteForm {
    pub fn dimension(&self) -> usize {
        match &self.matrices {
            FormMatrices::Modes(blocks) => blocks.iter().map(|b| b.stiffness.n).sum(),
            FormMatrices::Dense { stiffness, .. } => stiffness.nrows(),
        }
    }

    /// Largest Hermitian defect over both matrices (diagnostic).
    pub fn hermitian_defect(&self) -> f64 {
        match &self.matrices {
            FormMatrices::Modes(_) => 0.0,
            FormMatrices::Dense { stiffness, mass, .. } => {
                let defect = |m: &DMatrix<Complex64>| {
                    let d = m - m.adjoint();
                    d.iter().map(|c| c.norm()).fold(0.0, f64::max)
                };
                defect(stiffness).max(defect(mass))
            }
        }
    }
}

/// Eigenvector payload of one computed pair.
#[derive(Debug, Clone)]
pub enum EigenVector {
    /// Radial profile for a single angular mode.
    Radial(Vec<f64>),
    /// Slot-major full vector (`slot * n_r + j`).
    Full(Vec<Complex64>),
}

#[derive(Debug, Clone)]
pub struct EigenPair {
    /// Generalized eigenvalue of the pencil (the physical eigenvalue).
    pub value: f64,
    /// Angular mode when the pencil is mode-decoupled.
    pub mode: Option<i64>,
    /// `‖S v - λ M v‖ / ‖M v‖`.
    pub residual: f64,
    pub vector: EigenVector,
}

/// Ordered low eigenpairs of a discrete form.
#[derive(Debug, Clone)]
pub struct SpectralResult {
    pub h: f64,
    pub exponent_shift: f64,
    pub pairs: Vec<EigenPair>,
    pub solver: String,
}

impl SpectralResult {
    /// `ln λ_k` (1-based `k`).
    pub fn log_lambda(&self, k: usize) -> f64 {
        self.pairs[k - 1].value.ln()
    }

    /// `λ_k` itself (may underflow for very small `h`; prefer the log).
    pub fn lambda(&self, k: usize) -> f64 {
        self.pairs[k - 1].value
    }

    /// Normalized eigenvalue `h^{k-1} e^{-2φ_min/h} λ_k`, evaluated in log
    /// space.
    pub fn normalized(&self, k: usize) -> f64 {
        let ln = self.pairs[k - 1].value.ln() - self.exponent_shift
            + (k as f64 - 1.0) * self.h.ln();
        ln.exp()
    }

    /// Indices (1-based) whose eigenvalue leaves the regime `λ < 2 B₀ h`
    /// where the holomorphic reduction is valid.
    pub fn gauge_regime_flags(&self, b0: f64) -> Vec<usize> {
        self.pairs
            .iter()
            .enumerate()
            .filter(|(_, p)| p.value >= 2.0 * b0 * self.h)
            .map(|(i, _)| i + 1)
            .collect()
    }

    /// Consecutive (1-based) index pairs whose relative gap is below `rel`
    /// (near-degenerate, reported for diagnostics).
    pub fn near_degenerate_pairs(&self, rel: f64) -> Vec<(usize, usize)> {
        self.pairs
            .windows(2)
            .enumerate()
            .filter(|(_, w)| {
                (w[1].value - w[0].value).abs() <= rel * w[1].value.abs().max(w[0].value.abs())
            })
            .map(|(i, _)| (i + 1, i + 2))
            .collect()
    }
}
