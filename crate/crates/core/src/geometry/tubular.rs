//! Tubular collar coordinates `(s, t) ↦ γ(s) − t n(s)` near the boundary.

use super::{build_domain, BoundaryData, DomainSpec};
use crate::error::{Error, Result};

/// Injective collar chart of depth `t0` inside the boundary.
#[derive(Debug, Clone)]
pub struct TubularChart {
    pub boundary: BoundaryData,
    pub collar_depth: f64,
}

pub fn tubular_chart(spec: &DomainSpec, t0: f64) -> Result<TubularChart> {
    let boundary = build_domain(spec)?;
    let kappa_max = boundary.max_curvature;
    if !(t0 > 0.0) {
        return Err(Error::TubularChart(format!("collar depth {t0} must be positive")));
    }
    if t0 * kappa_max >= 1.0 {
        return Err(Error::TubularChart(format!(
            "collar depth {t0} exceeds the curvature bound 1/max|κ| = {:.6}",
            1.0 / kappa_max
        )));
    }
    Ok(TubularChart {
        boundary,
        collar_depth: t0,
    })
}

impl TubularChart {
    /// Forward map `(s, t) → x = γ(s) − t n(s)` with `s` arclength.
    pub fn to_cartesian(&self, s: f64, t: f64) -> [f64; 2] {
        let theta = self.angle_at_arclength(s);
        let p = self.boundary.point_at_angle(theta);
        let (_, n, _) = self.boundary.frame_at_angle(theta);
        [p[0] - t * n[0], p[1] - t * n[1]]
    }

    /// Jacobian factor of the chart, `1 − t κ(s)`.
    pub fn metric_factor(&self, s: f64, t: f64) -> f64 {
        let theta = self.angle_at_arclength(s);
        let (_, _, kappa) = self.boundary.frame_at_angle(theta);
        1.0 - t * kappa
    }

    /// Inverse map by Newton iteration on the tangency condition
    /// `(x − γ(s))·τ(s) = 0`. Fails outside the collar.
    pub fn from_cartesian(&self, x: [f64; 2]) -> Result<(f64, f64)> {
        // Initial guess: nearest boundary node.
        let mut best = 0usize;
        let mut best_d = f64::INFINITY;
        for (i, p) in self.boundary.points.iter().enumerate() {
            let d = (x[0] - p[0]).hypot(x[1] - p[1]);
            if d < best_d {
                best_d = d;
                best = i;
            }
        }
        let mut theta = self.boundary.polar_angles[best];
        for _ in 0..80 {
            let p = self.boundary.point_at_angle(theta);
            let (tau, n, kappa) = self.boundary.frame_at_angle(theta);
            let dx = [x[0] - p[0], x[1] - p[1]];
            let g = dx[0] * tau[0] + dx[1] * tau[1];
            let t = -(dx[0] * n[0] + dx[1] * n[1]);
            // d/ds of g with τ' = −κ n, converted to d/dθ via the speed.
            let dg_ds = -(1.0 - kappa * t);
            let speed = self.boundary.speed_at_angle(theta);
            let step = g / (dg_ds * speed);
            theta -= step;
            if step.abs() < 1e-15 {
                break;
            }
        }
        let p = self.boundary.point_at_angle(theta);
        let (tau, n, _) = self.boundary.frame_at_angle(theta);
        let dx = [x[0] - p[0], x[1] - p[1]];
        let g = dx[0] * tau[0] + dx[1] * tau[1];
        if g.abs() > 1e-9 * self.boundary.total_length {
            return Err(Error::TubularChart(
                "Newton inversion of the collar chart did not converge".into(),
            ));
        }
        let t = -(dx[0] * n[0] + dx[1] * n[1]);
        if !(t >= -1e-12 && t <= self.collar_depth * (1.0 + 1e-12)) {
            return Err(Error::TubularChart(format!(
                "point lies outside the collar (depth {t:.6})"
            )));
        }
        Ok((self.arclength_at_angle(theta), t.max(0.0)))
    }

    fn angle_at_arclength(&self, s: f64) -> f64 {
        // Newton on the arclength-to-angle relation using the node table as
        // the initial guess.
        let l = self.boundary.total_length;
        let s = s.rem_euclid(l);
        let m = self.boundary.points.len();
        let idx = ((s / l * m as f64) as usize).min(m - 1);
        let mut theta = self.boundary.polar_angles[idx];
        let mut s_here = self.boundary.arclengths[idx];
        for _ in 0..60 {
            let speed = self.boundary.speed_at_angle(theta);
            let step = (s - s_here) / speed;
            theta += step;
            if step.abs() < 1e-15 {
                break;
            }
            // Recompute the arclength increment by one Gauss panel.
            let (nodes, weights) =
                crate::numerics::quadrature::gauss_legendre_on(8, self.boundary.polar_angles[idx], theta);
            s_here = self.boundary.arclengths[idx]
                + nodes
                    .iter()
                    .zip(&weights)
                    .map(|(&th, &w)| w * self.boundary.speed_at_angle(th))
                    .sum::<f64>();
        }
        theta
    }

    fn arclength_at_angle(&self, theta: f64) -> f64 {
        // Arclength from node 0 by Gauss quadrature from the nearest node.
        let _ = self.boundary.points.len();
        let mut idx = 0;
        let mut best = f64::INFINITY;
        for (i, &a) in self.boundary.polar_angles.iter().enumerate() {
            let d = (theta - a).abs();
            if d < best {
                best = d;
                idx = i;
            }
        }
        let (nodes, weights) =
            crate::numerics::quadrature::gauss_legendre_on(8, self.boundary.polar_angles[idx], theta);
        let ds: f64 = nodes
            .iter()
            .zip(&weights)
            .map(|(&th, &w)| w * self.boundary.speed_at_angle(th))
            .sum();
        (self.boundary.arclengths[idx] + ds).rem_euclid(self.boundary.total_length)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadialFn;

    #[test]
    fn unit_disk_collar() {
        let chart = tubular_chart(&DomainSpec::unit_disk(64), 0.3).unwrap();
        let x = chart.to_cartesian(0.0, 0.1);
        assert!((x[0] - 0.9).abs() < 1e-13 && x[1].abs() < 1e-13);
        // Polar Jacobian.
        assert!((chart.metric_factor(1.3, 0.25) - 0.75).abs() < 1e-12);
    }

    #[test]
    fn depth_beyond_curvature_rejected() {
        let err = tubular_chart(&DomainSpec::unit_disk(64), 1.1).unwrap_err();
        let msg = format!("{err}");
        assert!(msg.contains("curvature"), "{msg}");
    }

    #[test]
    fn star_like_round_trip() {
        let rf = RadialFn::new("1+0.1*cos(2*s)", |s| 1.0 + 0.1 * (2.0 * s).cos());
        let spec = DomainSpec::star_like(rf, 256);
        let chart = tubular_chart(&spec, 0.2).unwrap();
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut rand01 = move || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..100 {
            let s = rand01() * chart.boundary.total_length;
            let t = 1e-3 + rand01() * (chart.collar_depth - 2e-3);
            let x = chart.to_cartesian(s, t);
            let (s2, t2) = chart.from_cartesian(x).unwrap();
            let x2 = chart.to_cartesian(s2, t2);
            let err = (x[0] - x2[0]).hypot(x[1] - x2[1]);
            assert!(err < 1e-10, "round trip error {err} at (s={s}, t={t})");
        }
    }
}
