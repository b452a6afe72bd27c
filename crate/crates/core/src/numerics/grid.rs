//! Radial grids on `(0, 1]` with smooth exponential clustering toward the
//! outer boundary, where the eigenfunction cutoff layer lives.

use crate::error::{Error, Result};

/// Interior radial nodes plus quadrature cell weights on the unit disk.
///
/// Nodes are `r_j = g((j + 1/2) / n)` for a smooth stretching `g` with
/// `g(0) = 0`, `g(1) = 1`; the boundary `r = 1` itself carries the Dirichlet
/// condition and is not an unknown. Cell weights integrate `∫ r dr` exactly
/// over the annular cells, so they sum to `1/2`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    pub nodes: Vec<f64>,
    /// `∫_cell r dr` for each node's annular cell.
    pub cell_weights: Vec<f64>,
    /// Stretching strength used (0 = uniform).
    pub sigma: f64,
}

fn stretch(xi: f64, sigma: f64) -> f64 {
    if sigma < 1e-12 {
        xi
    } else {
        1.0 - ((sigma * (1.0 - xi)).exp_m1()) / sigma.exp_m1()
    }
}

/// Fraction of `[0,1]` in `ξ` that maps into the boundary layer `[1-ell, 1]`.
fn layer_fraction(sigma: f64, ell: f64) -> f64 {
    if sigma < 1e-12 {
        ell
    } else {
        (1.0 + ell * sigma.exp_m1()).ln() / sigma
    }
}

impl RadialGrid {
    /// Uniform-in-`ξ` grid without clustering.
    pub fn uniform(n: usize) -> Self {
        Self::with_sigma(n, 0.0)
    }

    pub fn with_sigma(n: usize, sigma: f64) -> Self {
        assert!(n >= 4);
        let nodes: Vec<f64> = (0..n)
            .map(|j| stretch((j as f64 + 0.5) / n as f64, sigma))
            .collect();
        let mut edges = Vec::with_capacity(n + 1);
        edges.push(0.0);
        for j in 0..n - 1 {
            edges.push(0.5 * (nodes[j] + nodes[j + 1]));
        }
        edges.push(1.0);
        let cell_weights = (0..n)
            .map(|j| 0.5 * (edges[j + 1] * edges[j + 1] - edges[j] * edges[j]))
            .collect();
        RadialGrid {
            nodes,
            cell_weights,
            sigma,
        }
    }

    /// Grid with at least `min_nodes` nodes inside the boundary layer
    /// `[1-ell, 1]`, clustered as gently as that constraint allows.
    pub fn clustered(n: usize, ell: f64, min_nodes: usize) -> Result<Self> {
        assert!(ell > 0.0 && ell <= 1.0);
        let need = min_nodes as f64 / n as f64;
        if need >= 0.6 {
            return Err(Error::InvalidArgument(format!(
                "radial grid with {n} nodes cannot place {min_nodes} nodes in the boundary \
                 layer; increase the radial resolution to at least {}",
                (min_nodes as f64 / 0.3).ceil() as usize
            )));
        }
        // Keep at least a quarter of the nodes in the layer when feasible.
        let target = need.max(0.25_f64.min(3.0 * need));
        if layer_fraction(0.0, ell) >= target {
            return Ok(Self::uniform(n));
        }
        // layer_fraction is increasing in sigma; bisect.
        let mut lo = 0.0_f64;
        let mut hi = 1.0_f64;
        while layer_fraction(hi, ell) < target {
            hi *= 2.0;
            if hi > 1e4 {
                return Err(Error::InvalidArgument(format!(
                    "boundary layer width {ell:.3e} unresolvable with {n} radial nodes; \
                     increase the radial resolution"
                )));
            }
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if layer_fraction(mid, ell) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self::with_sigma(n, hi))
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Number of nodes with `r >= 1 - ell`.
    pub fn nodes_in_layer(&self, ell: f64) -> usize {
        self.nodes.iter().filter(|&&r| r >= 1.0 - ell).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_half() {
        for grid in [RadialGrid::uniform(17), RadialGrid::clustered(64, 0.05, 12).unwrap()] {
            let s: f64 = grid.cell_weights.iter().sum();
            assert!((s - 0.5).abs() < 1e-14);
            assert!(grid.nodes.windows(2).all(|w| w[0] < w[1]));
            assert!(grid.nodes[0] > 0.0 && *grid.nodes.last().unwrap() < 1.0);
        }
    }

    #[test]
    fn clustering_hits_layer_budget() {
        let g = RadialGrid::clustered(64, 0.02, 12).unwrap();
        assert!(g.nodes_in_layer(0.02) >= 12);
    }

    #[test]
    fn infeasible_layer_is_rejected() {
        assert!(RadialGrid::clustered(16, 1e-4, 12).is_err());
    }
}
