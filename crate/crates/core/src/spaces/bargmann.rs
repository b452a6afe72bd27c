//! Monic polynomials orthogonal under the anisotropic Gaussian weight
//! `exp(-H(y,y))`, obtained by Gram-Schmidt on the monomials with moments
//! computed by exact-degree Gauss-Hermite quadrature in principal axes.

use nalgebra::{DMatrix, DVector, Matrix2};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::quadrature::gauss_hermite;

/// Monic orthogonal family `P_n(Z) = Z^n + Σ_{j<n} b_{n,j} Z^j` with the
/// squared norms `N_B(P_n)²`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BargmannBasis {
    /// Gaussian weight matrix (row-major), symmetric positive definite.
    pub hessian: [[f64; 2]; 2],
    pub n_max: usize,
    /// `coefficients[n][j]`, `j < n`.
    pub coefficients: Vec<Vec<Complex64>>,
    /// `N_B(P_n)²`.
    pub norms_sq: Vec<f64>,
    /// Monomial Gram matrix `⟨z^m, z^n⟩`, kept for diagnostics.
    monomial_gram: Vec<Vec<Complex64>>,
}

/// Gram-Schmidt on `(1, Z, Z², …)` under `∫ u v̄ e^{-H(y,y)} dy`.
pub fn bargmann_gram_schmidt(hessian: &Matrix2<f64>, n_max: usize) -> Result<BargmannBasis> {
    let asym = (hessian[(0, 1)] - hessian[(1, 0)]).abs();
    if asym > 1e-12 * hessian.norm() {
        return Err(Error::Basis(format!(
            "weight matrix must be symmetric (asymmetry {asym:.3e})"
        )));
    }
    let eig = hessian.symmetric_eigen();
    let (mu1, mu2) = (eig.eigenvalues[0], eig.eigenvalues[1]);
    if mu1 <= 0.0 || mu2 <= 0.0 {
        return Err(Error::Basis(format!(
            "weight matrix must be positive definite (eigenvalues {mu1:.3e}, {mu2:.3e})"
        )));
    }
    let q = eig.eigenvectors;

    // Exact-degree rule: monomial products have per-axis degree ≤ 2 n_max.
    let n_gh = n_max + 2;
    let (x, w) = gauss_hermite(n_gh);

    // Quadrature in principal axes: y = Q (x_a/√μ1, x_b/√μ2).
    let mut gram = vec![vec![Complex64::new(0.0, 0.0); n_max + 1]; n_max + 1];
    let scale = 1.0 / (mu1 * mu2).sqrt();
    let mut powers = vec![Complex64::new(0.0, 0.0); n_max + 1];
    for a in 0..n_gh {
        for b in 0..n_gh {
            let u1 = x[a] / mu1.sqrt();
            let u2 = x[b] / mu2.sqrt();
            let y1 = q[(0, 0)] * u1 + q[(0, 1)] * u2;
            let y2 = q[(1, 0)] * u1 + q[(1, 1)] * u2;
            let z = Complex64::new(y1, y2);
            let weight = w[a] * w[b] * scale;
            powers[0] = Complex64::new(1.0, 0.0);
            for n in 1..=n_max {
                powers[n] = powers[n - 1] * z;
            }
            for m in 0..=n_max {
                let cm = powers[m].conj() * weight;
                for n in 0..=n_max {
                    gram[m][n] += cm * powers[n];
                }
            }
        }
    }

    // Monic Gram-Schmidt from the moment matrix.
    let mut coefficients = Vec::with_capacity(n_max + 1);
    let mut norms_sq = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let coeffs = if n == 0 {
            Vec::new()
        } else {
            let a = DMatrix::from_fn(n, n, |i, j| gram[i][j]);
            let rhs = DVector::from_fn(n, |i, _| -gram[i][n]);
            let lu = a.lu();
            let sol = lu.solve(&rhs).ok_or_else(|| {
                Error::Basis(format!("moment system is singular at degree {n}"))
            })?;
            sol.iter().copied().collect::<Vec<Complex64>>()
        };
        let mut nsq = gram[n][n];
        for (j, c) in coeffs.iter().enumerate() {
            nsq += *c * gram[n][j];
        }
        if nsq.re <= 0.0 {
            return Err(Error::Basis(format!(
                "nonpositive squared norm {:.3e} at degree {n}",
                nsq.re
            )));
        }
        coefficients.push(coeffs);
        norms_sq.push(nsq.re);
    }

    Ok(BargmannBasis {
        hessian: [
            [hessian[(0, 0)], hessian[(0, 1)]],
            [hessian[(1, 0)], hessian[(1, 1)]],
        ],
        n_max,
        coefficients,
        norms_sq,
        monomial_gram: gram,
    })
}

impl BargmannBasis {
    pub fn hessian_matrix(&self) -> Matrix2<f64> {
        Matrix2::new(
            self.hessian[0][0],
            self.hessian[0][1],
            self.hessian[1][0],
            self.hessian[1][1],
        )
    }

    /// Evaluate `P_n(z)`.
    pub fn eval(&self, n: usize, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0); // leading monic term
        for j in (0..n).rev() {
            acc = acc * z + self.coefficients[n][j];
        }
        acc
    }

    /// `N_B(P_n)` (this equals `dist_B(z^n, span(1..z^{n-1}))`).
    pub fn norm(&self, n: usize) -> f64 {
        self.norms_sq[n].sqrt()
    }

    /// Largest relative off-diagonal entry of the Gram matrix of the `P_n`.
    pub fn gram_off_diagonal(&self) -> f64 {
        let n = self.n_max;
        let pn_gram = |a: usize, b: usize| -> Complex64 {
            // ⟨P_a, P_b⟩ from the monomial moments.
            let mut acc = Complex64::new(0.0, 0.0);
            let ca = &self.coefficients[a];
            let cb = &self.coefficients[b];
            for i in 0..=a {
                let ci = if i == a {
                    Complex64::new(1.0, 0.0)
                } else {
                    ca[i]
                };
                for j in 0..=b {
                    let cj = if j == b {
                        Complex64::new(1.0, 0.0)
                    } else {
                        cb[j]
                    };
                    acc += ci.conj() * cj * self.monomial_gram[i][j];
                }
            }
            acc
        };
        let mut worst = 0.0f64;
        for a in 0..=n {
            for b in 0..=n {
                if a == b {
                    continue;
                }
                let g = pn_gram(a, b).norm();
                worst = worst.max(g / (self.norms_sq[a] * self.norms_sq[b]).sqrt());
            }
        }
        worst
    }

    /// Largest off-leading coefficient magnitude (vanishes for radial
    /// weights, where the monomials are already orthogonal).
    pub fn max_coefficient(&self) -> f64 {
        self.coefficients
            .iter()
            .flat_map(|c| c.iter().map(|x| x.norm()))
            .fold(0.0, f64::max)
    }
}
