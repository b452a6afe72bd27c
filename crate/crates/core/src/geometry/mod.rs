//! Domains, boundary parametrizations, tubular collars and the numerical
//! biholomorphism from the unit disk.

mod boundary;
mod conformal;
mod tubular;

pub use boundary::{build_domain, BoundaryData};
pub use conformal::{build_conformal_map, ConformalMap};
pub use tubular::{tubular_chart, TubularChart};

use std::fmt;
use std::sync::Arc;

/// Smooth positive radius function of the polar angle, `r(s) > 0`.
#[derive(Clone)]
pub struct RadialFn {
    f: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    descriptor: String,
}

impl RadialFn {
    pub fn new(descriptor: impl Into<String>, f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        RadialFn {
            f: Arc::new(f),
            descriptor: descriptor.into(),
        }
    }

    pub fn eval(&self, s: f64) -> f64 {
        (self.f)(s)
    }

    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }
}

impl fmt::Debug for RadialFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RadialFn({})", self.descriptor)
    }
}

/// Domain geometry selector.
#[derive(Debug, Clone)]
pub enum DomainKind {
    UnitDisk,
    Disk { radius: f64 },
    StarLike { radius_fn: RadialFn },
}

/// A bounded, simply connected planar domain with a star-like smooth
/// boundary, plus the boundary resolution used by quadratures.
#[derive(Debug, Clone)]
pub struct DomainSpec {
    pub kind: DomainKind,
    /// Number of boundary nodes `M` (even, for FFT-based conjugation).
    pub boundary_nodes: usize,
}

impl DomainSpec {
    pub fn unit_disk(boundary_nodes: usize) -> Self {
        DomainSpec {
            kind: DomainKind::UnitDisk,
            boundary_nodes,
        }
    }

    pub fn disk(radius: f64, boundary_nodes: usize) -> Self {
        DomainSpec {
            kind: DomainKind::Disk { radius },
            boundary_nodes,
        }
    }

    pub fn star_like(radius_fn: RadialFn, boundary_nodes: usize) -> Self {
        DomainSpec {
            kind: DomainKind::StarLike { radius_fn },
            boundary_nodes,
        }
    }

    /// Disk radius when the domain is a (possibly scaled) disk.
    pub fn disk_radius(&self) -> Option<f64> {
        match &self.kind {
            DomainKind::UnitDisk => Some(1.0),
            DomainKind::Disk { radius } => Some(*radius),
            DomainKind::StarLike { .. } => None,
        }
    }

    /// Stable text form used for cache keys.
    pub fn descriptor(&self) -> String {
        match &self.kind {
            DomainKind::UnitDisk => format!("unit-disk;M={}", self.boundary_nodes),
            DomainKind::Disk { radius } => format!("disk;R={radius:.17e};M={}", self.boundary_nodes),
            DomainKind::StarLike { radius_fn } => format!(
                "star-like;r={};M={}",
                radius_fn.descriptor(),
                self.boundary_nodes
            ),
        }
    }

    pub(crate) fn validate(&self) -> crate::Result<()> {
        if self.boundary_nodes < 8 || !self.boundary_nodes.is_multiple_of(2) {
            return Err(crate::Error::InvalidDomain(format!(
                "boundary resolution M = {} must be even and at least 8",
                self.boundary_nodes
            )));
        }
        if let DomainKind::Disk { radius } = self.kind {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(crate::Error::InvalidDomain(format!(
                    "disk radius {radius} must be positive"
                )));
            }
        }
        Ok(())
    }
}
