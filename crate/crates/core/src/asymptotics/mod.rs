//! Closed-form spectral constants, eigenvalue predictions, boundary-layer
//! profiles, variational trial-space bounds and concentration reports.

mod constants;
mod layer;
mod reports;
mod trial;

pub use constants::{
    build_prediction, constant_sup, predict_lambda, radial_constant, AsymptoticPrediction,
    Prediction,
};
pub use layer::{
    boundary_layer, cutoff_energy_scale, discrete_layer_minimum, BoundaryLayerProfile,
};
pub use reports::{concentration_report, laplacian_shift_check, radial_concentration, ShiftCheck};
pub use trial::trial_space_upper_bound;
