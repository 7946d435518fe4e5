use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projlin::{self, c, CMat, CVec, Flag, ProjPoint, ProjSubspace};

use super::{binomial, check_degree};

/// The osculating flag of the curve at `psi(base_point)`: step `d` is spanned
/// by the curve point and its first `d - 1` derivatives, `d = 1..=n`.
#[derive(Debug, Clone)]
pub struct OsculatingFlag {
    pub base_point: ProjPoint,
    pub flag: Flag,
    /// Unit covector of the top step (the osculating hyperplane).
    pub covector: CVec,
}

impl OsculatingFlag {
    pub fn hyperplane(&self) -> &ProjSubspace {
        self.flag.steps().last().unwrap()
    }

    pub fn step(&self, d: usize) -> &ProjSubspace {
        &self.flag.steps()[d - 1]
    }
}

/// Derivatives of orders `0..orders` of the curve in the affine chart around `p`. With
/// `|x| >= |y|` the chart is `t -> (C(n,j) t^j)`, otherwise
/// `s -> (C(n,j) s^{n-j})`; either way the parameter has modulus at most one.
fn chart_derivatives(p: &ProjPoint, n: usize, orders: usize) -> Vec<CVec> {
    let (x, y) = (p.coords()[0], p.coords()[1]);
    let forward = x.norm() >= y.norm();
    let t = if forward { y / x } else { x / y };
    let falling = |e: usize, k: usize| -> f64 { (0..k).map(|i| (e - i) as f64).product() };
    (0..orders)
        .map(|k| {
            CVec::from_fn(n + 1, |j, _| {
                let e = if forward { j } else { n - j };
                if e < k {
                    return c(0.0, 0.0);
                }
                t.powu((e - k) as u32) * (binomial(n, j) * falling(e, k))
            })
        })
        .collect()
}

pub fn osculating_flag(p: &ProjPoint, n: usize) -> Result<OsculatingFlag> {
    check_degree(n)?;
    if p.coords().len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.coords().len(),
        });
    }
    let derivs = chart_derivatives(p, n, n);
    let full = ProjSubspace::from_spanning(&CMat::from_columns(&derivs))?;
    // from_spanning orthonormalizes columns in order, so leading column blocks
    // span the nested steps exactly
    let steps = (1..=n)
        .map(|d| ProjSubspace::from_spanning(&full.basis().columns(0, d).clone_owned()))
        .collect::<Result<Vec<_>>>()?;
    let flag = Flag::new(steps)?;
    Ok(OsculatingFlag {
        base_point: p.clone(),
        flag,
        covector: hyperplane_covector(p, n),
    })
}

pub fn osculating_hyperplane(p: &ProjPoint, n: usize) -> Result<ProjSubspace> {
    Ok(osculating_flag(p, n)?.hyperplane().clone())
}

/// Closed-form unit covector of the osculating hyperplane at `[x0:y0]`:
/// `nu_j = (-y0)^{n-j} x0^j`, for which `sum_j nu_j C(n,j) x^{n-j} y^j`
/// equals `(x0 y - y0 x)^n`.
pub fn hyperplane_covector(p: &ProjPoint, n: usize) -> CVec {
    let (x0, y0) = (p.coords()[0], p.coords()[1]);
    let nu = CVec::from_fn(n + 1, |j, _| (-y0).powu((n - j) as u32) * x0.powu(j as u32));
    projlin::normalize_projective(&nu)
        .expect("covector of a unit point is nonzero")
        .into_coords()
}

/// Largest relative Taylor coefficient of order below `n` of the pairing
/// `t -> <nu, psi(t)>` expanded around the base parameter. Zero iff the
/// covector's hyperplane meets the curve only at `base`, with multiplicity `n`.
pub fn tangency_defect(nu: &CVec, base: &ProjPoint, n: usize) -> f64 {
    let derivs = chart_derivatives(base, n, n + 1);
    let mut taylor: Vec<f64> = Vec::with_capacity(n + 1);
    let mut fact = 1.0;
    for (k, dk) in derivs.iter().enumerate() {
        if k > 0 {
            fact *= k as f64;
        }
        let s: Complex64 = nu.iter().zip(dk.iter()).map(|(a, b)| a * b).sum();
        taylor.push(s.norm() / fact);
    }
    let top = taylor.iter().cloned().fold(0.0, f64::max);
    if top == 0.0 {
        return 0.0;
    }
    taylor[..n].iter().cloned().fold(0.0, f64::max) / top
}
