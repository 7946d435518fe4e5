//! One-sided (Hestenes) Jacobi SVD for small dense complex matrices.
//!
//! Columns of a working copy are rotated pairwise until mutually orthogonal;
//! the column norms are then the singular values. The right factor accumulates
//! the same rotations. This is slow for large matrices but the matrices here
//! are at most a few dozen rows, and Jacobi keeps small singular values
//! accurate relative to the column scaling.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projlin::CMat;

const MAX_SWEEPS: usize = 80;

/// Factorization `input = u * diag(sigma) * v^H`.
#[derive(Debug, Clone)]
pub struct SvdTriple {
    pub u: CMat,
    pub sigma: Vec<f64>,
    pub v: CMat,
}

impl SvdTriple {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn reconstruct(&self) -> CMat {
        let n = self.dim();
        let mut us = self.u.clone();
        for j in 0..n {
            let s = Complex64::new(self.sigma[j], 0.0);
            for i in 0..us.nrows() {
                us[(i, j)] *= s;
            }
        }
        us * self.v.adjoint()
    }
}

/// Singular value decomposition of a square complex matrix.
pub fn svd(m: &CMat) -> Result<SvdTriple> {
    // columns below this squared norm are rounding noise; rotating them cannot
    // change the singular values at working precision
    jacobi(m, (f64::EPSILON * m.norm()).powi(2))
}

/// SVD for matrices of the form `G D` with `G` well conditioned and `D`
/// diagonal, however strongly graded: every column pair is rotated to
/// relative precision, so small singular values and their vectors keep
/// full relative accuracy.
pub fn svd_graded(m: &CMat) -> Result<SvdTriple> {
    jacobi(m, 0.0)
}

fn jacobi(m: &CMat, noise: f64) -> Result<SvdTriple> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch {
            expected: m.nrows(),
            found: m.ncols(),
        });
    }
    if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::NumericalFailure("non-finite matrix entry".into()));
    }
    let n = m.nrows();
    if n == 0 {
        return Ok(SvdTriple {
            u: CMat::zeros(0, 0),
            sigma: vec![],
            v: CMat::zeros(0, 0),
        });
    }

    // an exact power-of-two rescaling keeps squared column norms in range
    let peak = m.iter().map(|z| z.re.abs().max(z.im.abs())).fold(0.0, f64::max);
    let scale = if peak > 0.0 { 2f64.powi(-(peak.log2().round() as i32)) } else { 1.0 };
    let noise = noise * scale * scale;
    let mut a = m * Complex64::new(scale, 0.0);
    let mut v = CMat::identity(n, n);
    let tol = f64::EPSILON * n as f64;

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n - 1 {
            for j in i + 1..n {
                let mut alpha = 0.0;
                let mut beta = 0.0;
                let mut gamma = Complex64::new(0.0, 0.0);
                for r in 0..n {
                    let ai = a[(r, i)];
                    let aj = a[(r, j)];
                    alpha += ai.norm_sqr();
                    beta += aj.norm_sqr();
                    gamma += ai.conj() * aj;
                }
                let g = gamma.norm();
                if g == 0.0 || g <= tol * alpha.sqrt() * beta.sqrt() || (noise > 0.0 && alpha.min(beta) <= noise) {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                // columns (i, j) <- (i, j) * [[c, s e^{i phi}], [-s e^{-i phi}, c]]
                let sp = phase * s;
                let sm = phase.conj() * s;
                rotate_columns(&mut a, i, j, c, sp, sm);
                rotate_columns(&mut v, i, j, c, sp, sm);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        let fro = m.norm();
        return Err(Error::NumericalFailure(format!(
            "Jacobi SVD did not converge after {MAX_SWEEPS} sweeps (dim {n}, Frobenius norm {fro:e})"
        )));
    }

    let mut order: Vec<(usize, f64)> = (0..n).map(|j| (j, a.column(j).norm())).collect();
    order.sort_by(|x, y| y.1.total_cmp(&x.1).then(x.0.cmp(&y.0)));

    let mut u = CMat::zeros(n, n);
    let mut vs = CMat::zeros(n, n);
    let mut sigma = Vec::with_capacity(n);
    let smax = order[0].1;
    for (k, &(j, s)) in order.iter().enumerate() {
        sigma.push(s / scale);
        vs.set_column(k, &v.column(j));
        if s > 0.0 && s > smax * 1e-300 {
            let col = a.column(j) / Complex64::new(s, 0.0);
            u.set_column(k, &col);
        }
    }
    // Re-orthonormalize u; columns lost to rounding (tiny or zero sigma) are
    // replaced by completions from the standard basis.
    complete_unitary(&mut u);
    Ok(SvdTriple { u, sigma, v: vs })
}

fn rotate_columns(m: &mut CMat, i: usize, j: usize, c: f64, sp: Complex64, sm: Complex64) {
    for r in 0..m.nrows() {
        let xi = m[(r, i)];
        let xj = m[(r, j)];
        m[(r, i)] = xi * c - sm * xj;
        m[(r, j)] = sp * xi + xj * c;
    }
}

fn complete_unitary(u: &mut CMat) {
    let n = u.nrows();
    for k in 0..n {
        let mut col = u.column(k).clone_owned();
        gram_schmidt_step(u, k, &mut col);
        let norm = col.norm();
        if norm > 0.5 {
            u.set_column(k, &(col / Complex64::new(norm, 0.0)));
            continue;
        }
        // lost to rounding (tiny or zero sigma): complete from the standard basis
        let mut best = DVector::<Complex64>::zeros(n);
        for e in 0..n {
            let mut cand = DVector::<Complex64>::zeros(n);
            cand[e] = Complex64::new(1.0, 0.0);
            gram_schmidt_step(u, k, &mut cand);
            if cand.norm() > best.norm() {
                best = cand;
            }
        }
        let bn = best.norm();
        u.set_column(k, &(best / Complex64::new(bn, 0.0)));
    }
}

fn gram_schmidt_step(u: &CMat, k: usize, col: &mut DVector<Complex64>) {
    for _ in 0..2 {
        for p in 0..k {
            let proj = u.column(p).dotc(col);
            *col -= u.column(p) * proj;
        }
    }
}

/// Singular values only.
pub fn singular_values(m: &CMat) -> Result<Vec<f64>> {
    Ok(svd(m)?.sigma)
}

#[allow(dead_code)]
pub(crate) fn is_unitary(m: &DMatrix<Complex64>, tol: f64) -> bool {
    let n = m.ncols();
    (m.adjoint() * m - CMat::identity(n, n)).norm() < tol
}
