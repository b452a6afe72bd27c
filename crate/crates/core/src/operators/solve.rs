//! Generalized eigensolvers for assembled forms: Sturm bisection on the
//! banded per-mode pencils, dense Hermitian solve for coupled pencils.

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::{DiscreteForm, EigenPair, EigenVector, FormMatrices, SpectralResult};
use crate::error::{Error, Result};
use crate::numerics::banded::lowest_pairs;

const RESIDUAL_TOL: f64 = 1e-8;

/// The `k` smallest generalized eigenpairs of a form, ordered by value with
/// angular-mode index as the deterministic tie-breaker.
pub fn solve_lowest(form: &DiscreteForm, k: usize) -> Result<SpectralResult> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let dim = form.dimension();
    if k > dim {
        return Err(Error::EigenSolve(format!(
            "requested {k} eigenvalues from a dimension-{dim} pencil"
        )));
    }

    let mut pairs: Vec<EigenPair> = Vec::new();
    let solver;
    match &form.matrices {
        FormMatrices::Modes(blocks) => {
            solver = "banded-sturm".to_string();
            for block in blocks {
                let want = k.min(block.stiffness.n);
                let found = lowest_pairs(&block.stiffness, &block.mass, want)?;
                for p in found {
                    pairs.push(EigenPair {
                        value: p.value,
                        mode: Some(block.mode),
                        residual: p.residual,
                        vector: EigenVector::Radial(p.vector),
                    });
                }
            }
        }
        FormMatrices::Dense {
            stiffness, mass, ..
        } => {
            solver = "dense-hermitian".to_string();
            let chol = mass.clone().cholesky().ok_or_else(|| {
                Error::EigenSolve("mass matrix is not positive definite".into())
            })?;
            let l = chol.l();
            // T = L⁻¹ S L⁻ᴴ.
            let a = l.solve_lower_triangular(stiffness).ok_or_else(|| {
                Error::EigenSolve("triangular solve failed".into())
            })?;
            let t = l
                .solve_lower_triangular(&a.adjoint())
                .ok_or_else(|| Error::EigenSolve("triangular solve failed".into()))?
                .adjoint();
            let t = (t.clone() + t.adjoint()) * Complex64::new(0.5, 0.0);
            let eig = t.symmetric_eigen();
            let mut order: Vec<usize> = (0..dim).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
            for &idx in order.iter().take(k + 2) {
                let y = eig.eigenvectors.column(idx).into_owned();
                // v = L⁻ᴴ y.
                let v = l
                    .adjoint()
                    .solve_upper_triangular(&y)
                    .ok_or_else(|| Error::EigenSolve("back-substitution failed".into()))?;
                let sv = stiffness * &v;
                let mv = mass * &v;
                let lam = eig.eigenvalues[idx];
                let mut rnum = 0.0;
                let mut rden = 0.0;
                for i in 0..dim {
                    rnum += (sv[i] - mv[i] * Complex64::new(lam, 0.0)).norm_sqr();
                    rden += mv[i].norm_sqr();
                }
                pairs.push(EigenPair {
                    value: lam,
                    mode: None,
                    residual: (rnum / rden.max(f64::MIN_POSITIVE)).sqrt(),
                    vector: EigenVector::Full(v.iter().copied().collect()),
                });
            }
        }
    }

    pairs.sort_by(|a, b| {
        a.value
            .partial_cmp(&b.value)
            .unwrap()
            .then_with(|| a.mode.unwrap_or(0).cmp(&b.mode.unwrap_or(0)))
    });
    pairs.truncate(k);

    for (i, p) in pairs.iter().enumerate() {
        if p.residual > RESIDUAL_TOL {
            return Err(Error::EigenSolve(format!(
                "eigenpair {} residual {:.3e} exceeds {RESIDUAL_TOL:e}",
                i + 1,
                p.residual
            )));
        }
    }

    Ok(SpectralResult {
        h: form.h,
        exponent_shift: form.exponent_shift,
        pairs,
        solver,
    })
}

/// Rayleigh-Ritz value of the pencil restricted to the span of the given
/// trial vectors (slot-major for dense pencils): the largest eigenvalue of
/// the projected `k×k` pencil, a guaranteed upper bound for the form's
/// `k`-th eigenvalue.
pub fn rayleigh_ritz_bound(form: &DiscreteForm, trial: &[Vec<Complex64>]) -> Result<f64> {
    let k = trial.len();
    if k == 0 {
        return Err(Error::InvalidArgument("empty trial family".into()));
    }
    let dim = form.dimension();
    for t in trial {
        if t.len() != dim {
            return Err(Error::InvalidArgument(format!(
                "trial vector length {} does not match pencil dimension {dim}",
                t.len()
            )));
        }
    }
    let apply = |v: &[Complex64], use_stiffness: bool| -> Vec<Complex64> {
        match &form.matrices {
            FormMatrices::Modes(blocks) => {
                let mut out = vec![Complex64::new(0.0, 0.0); dim];
                let mut offset = 0;
                for block in blocks {
                    let n = block.stiffness.n;
                    let mat = if use_stiffness { &block.stiffness } else { &block.mass };
                    let re: Vec<f64> = (0..n).map(|j| v[offset + j].re).collect();
                    let im: Vec<f64> = (0..n).map(|j| v[offset + j].im).collect();
                    let yre = mat.matvec(&re);
                    let yim = mat.matvec(&im);
                    for j in 0..n {
                        out[offset + j] = Complex64::new(yre[j], yim[j]);
                    }
                    offset += n;
                }
                out
            }
            FormMatrices::Dense { stiffness, mass, .. } => {
                let vv = nalgebra::DVector::from_column_slice(v);
                let y = if use_stiffness { stiffness * vv } else { mass * vv };
                y.iter().copied().collect()
            }
        }
    };

    let mut a = DMatrix::<Complex64>::zeros(k, k);
    let mut b = DMatrix::<Complex64>::zeros(k, k);
    for j in 0..k {
        let sv = apply(&trial[j], true);
        let mv = apply(&trial[j], false);
        for i in 0..k {
            let mut aij = Complex64::new(0.0, 0.0);
            let mut bij = Complex64::new(0.0, 0.0);
            for l in 0..dim {
                aij += trial[i][l].conj() * sv[l];
                bij += trial[i][l].conj() * mv[l];
            }
            a[(i, j)] = aij;
            b[(i, j)] = bij;
        }
    }
    // Condition check on the trial Gram matrix.
    let bh = (b.clone() + b.adjoint()) * Complex64::new(0.5, 0.0);
    let svd = bh.clone().svd(false, false);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if !(smin > smax * 1e-12) {
        return Err(Error::Assembly(format!(
            "trial vectors are numerically dependent (Gram condition {:.3e})",
            smax / smin.max(f64::MIN_POSITIVE)
        )));
    }
    let chol = bh
        .cholesky()
        .ok_or_else(|| Error::Assembly("trial Gram matrix not positive definite".into()))?;
    let l = chol.l();
    let t = l
        .solve_lower_triangular(&a)
        .and_then(|x| l.solve_lower_triangular(&x.adjoint()))
        .ok_or_else(|| Error::EigenSolve("projected solve failed".into()))?
        .adjoint();
    let t = (t.clone() + t.adjoint()) * Complex64::new(0.5, 0.0);
    let eig = t.symmetric_eigen();
    Ok(eig.eigenvalues.iter().cloned().fold(f64::NEG_INFINITY, f64::max))
}
