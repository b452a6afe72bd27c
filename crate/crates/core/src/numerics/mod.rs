//! Shared numerical kernels: FFTs, quadrature rules, stretched grids,
//! local interpolation, banded eigensolvers and small fitting helpers.

pub mod banded;
pub mod fit;
pub mod fourier;
pub mod grid;
pub mod interp;
pub mod quadrature;

/// Signed Fourier mode index for slot `i` of an `m`-point FFT
/// (`0, 1, .., m/2-1, -m/2, .., -1`).
pub fn signed_mode(i: usize, m: usize) -> i64 {
    let i = i as i64;
    let m = m as i64;
    if 2 * i < m {
        i
    } else {
        i - m
    }
}
