//! Error type shared by all numerical modules.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("conformal map construction failed: {0}")]
    ConformalMap(String),

    #[error("tubular chart rejected: {0}")]
    TubularChart(String),

    #[error("magnetic field hypothesis violated: {0}")]
    FieldHypothesis(String),

    #[error("potential solve failed: {0}")]
    PotentialSolve(String),

    #[error("landscape extraction failed: {0}")]
    Landscape(String),

    #[error("basis construction failed: {0}")]
    Basis(String),

    #[error("quadrature did not converge: {0}")]
    Quadrature(String),

    #[error("operator assembly failed: {0}")]
    Assembly(String),

    #[error("eigensolver failed: {0}")]
    EigenSolve(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
