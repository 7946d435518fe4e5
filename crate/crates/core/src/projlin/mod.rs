//! Projective numerical linear algebra over `C^{k+1}`.
//!
//! Points of `CP^k` are stored as canonical unit vectors, projective subspaces
//! as orthonormal spanning matrices. Hyperplanes can be handed around either as
//! a `ProjSubspace` of codimension one or as the dual unit covector that
//! annihilates it.

mod svd;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub use svd::{singular_values, svd, svd_graded, SvdTriple};

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

/// Default relative threshold for declaring a singular gap.
pub const DEFAULT_GAP_TOL: f64 = 1e-6;

const ZERO_NORM: f64 = 1e-300;
const PHASE_TOL: f64 = 1e-12;

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// A point of `CP^k` given by a canonical homogeneous coordinate vector: unit
/// norm, with the first coordinate of modulus above `1e-12` real and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjPoint {
    coords: CVec,
}

impl ProjPoint {
    pub fn coords(&self) -> &CVec {
        &self.coords
    }

    pub fn into_coords(self) -> CVec {
        self.coords
    }

    /// Ambient projective dimension `k` of `CP^k`.
    pub fn dim_ambient(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn from_slice(v: &[Complex64]) -> Result<Self> {
        normalize_projective(&CVec::from_column_slice(v))
    }

    /// Standard basis point `[e_i]` (0-based) of `CP^k`.
    pub fn basis(k: usize, i: usize) -> Self {
        let mut v = CVec::zeros(k + 1);
        v[i] = c(1.0, 0.0);
        ProjPoint { coords: v }
    }
}

/// Canonical representative of the projective class of `v`.
pub fn normalize_projective(v: &CVec) -> Result<ProjPoint> {
    let norm = v.norm();
    if !(norm > ZERO_NORM) || !norm.is_finite() {
        return Err(Error::ZeroVector { norm });
    }
    let mut w = v / c(norm, 0.0);
    let lead = w
        .iter()
        .find(|z| z.norm() > PHASE_TOL)
        .copied()
        .unwrap_or(c(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    w *= phase;
    // the leading entry is real up to rounding; pin it
    if let Some(z) = w.iter_mut().find(|z| z.norm() > PHASE_TOL) {
        *z = c(z.norm(), 0.0);
    }
    Ok(ProjPoint { coords: w })
}

fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch { expected, found });
    }
    Ok(())
}

/// Fubini-Study chordal distance `sqrt(1 - |<p,q>|^2)`.
pub fn chordal_distance(p: &ProjPoint, q: &ProjPoint) -> Result<f64> {
    check_dim(p.coords.len(), q.coords.len())?;
    Ok(chordal_unit(&p.coords, &q.coords))
}

/// Chordal distance between two unit vectors, no checks. Evaluated as the
/// norm of the component of `q` orthogonal to `p`, which keeps full relative
/// precision for nearby points.
pub(crate) fn chordal_unit(p: &CVec, q: &CVec) -> f64 {
    let ip = p.dotc(q);
    let mut acc = 0.0;
    for (a, b) in p.iter().zip(q.iter()) {
        acc += (b - a * ip).norm_sqr();
    }
    acc.sqrt().min(1.0)
}

/// A projective subspace given by an orthonormal `(k+1) x d` spanning matrix.
#[derive(Debug, Clone)]
pub struct ProjSubspace {
    basis: CMat,
}

impl ProjSubspace {
    /// Orthonormalizes the columns of `m` (modified Gram-Schmidt, twice). Fails
    /// if the columns are numerically dependent.
    pub fn from_spanning(m: &CMat) -> Result<Self> {
        let (rows, cols) = m.shape();
        if cols == 0 || cols > rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                found: cols,
            });
        }
        let mut q = m.clone();
        for k in 0..cols {
            let mut col = q.column(k).clone_owned();
            let orig = col.norm();
            for _ in 0..2 {
                for p in 0..k {
                    let proj = q.column(p).dotc(&col);
                    col -= q.column(p) * proj;
                }
            }
            let nrm = col.norm();
            if !(nrm > 1e-13 * orig.max(ZERO_NORM)) || nrm < ZERO_NORM {
                return Err(Error::NumericalFailure(format!(
                    "spanning column {k} is linearly dependent on its predecessors"
                )));
            }
            q.set_column(k, &(col / c(nrm, 0.0)));
        }
        Ok(ProjSubspace { basis: q })
    }

    /// Wraps a matrix already known to have orthonormal columns.
    pub(crate) fn from_orthonormal(basis: CMat) -> Self {
        debug_assert!(
            (basis.adjoint() * &basis - CMat::identity(basis.ncols(), basis.ncols())).norm() < 1e-8
        );
        ProjSubspace { basis }
    }

    /// Span of standard basis vectors with the given 0-based indices.
    pub fn coordinate(k: usize, indices: &[usize]) -> Self {
        let mut b = CMat::zeros(k + 1, indices.len());
        for (col, &i) in indices.iter().enumerate() {
            b[(i, col)] = c(1.0, 0.0);
        }
        ProjSubspace { basis: b }
    }

    /// The hyperplane annihilated by the covector `nu`, i.e. `{x : sum nu_j x_j = 0}`.
    pub fn hyperplane_from_covector(nu: &CVec) -> Result<Self> {
        let normal = nu.map(|z| z.conj());
        let dim = normal.len();
        let normal = normalize_projective(&normal)?.into_coords();
        let comp = orthogonal_complement(&CMat::from_columns(&[normal]))?;
        debug_assert_eq!(comp.ncols(), dim - 1);
        Ok(ProjSubspace { basis: comp })
    }

    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Linear dimension `d` (number of spanning vectors).
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    /// Projective dimension `d - 1`.
    pub fn proj_dim(&self) -> usize {
        self.basis.ncols() - 1
    }

    pub fn ambient(&self) -> usize {
        self.basis.nrows()
    }

    /// Orthogonal projector `B B^H`.
    pub fn projector(&self) -> CMat {
        &self.basis * self.basis.adjoint()
    }

    /// Dual unit covector of a hyperplane: `nu` with `sum nu_j x_j = 0` on the
    /// subspace. Returns `None` unless the subspace has codimension one.
    pub fn dual_covector(&self) -> Option<CVec> {
        if self.dim() + 1 != self.ambient() {
            return None;
        }
        let normal = orthogonal_complement(&self.basis).ok()?;
        let v = normalize_projective(&normal.column(0).clone_owned()).ok()?;
        Some(v.into_coords().map(|z| z.conj()))
    }

    /// Image under a linear map, re-orthonormalized.
    pub fn transform(&self, m: &CMat) -> Result<Self> {
        check_dim(self.ambient(), m.ncols())?;
        ProjSubspace::from_spanning(&(m * &self.basis))
    }

    pub fn contains_point(&self, p: &ProjPoint, tol: f64) -> bool {
        point_subspace_distance(p, self).is_ok_and(|d| d < tol)
    }

    /// Largest distance from a unit vector of `self` to `other`, i.e. the sine
    /// of the largest principal angle of `self` relative to `other`.
    pub fn containment_gap(&self, other: &ProjSubspace) -> Result<f64> {
        check_dim(self.ambient(), other.ambient())?;
        let residual = &self.basis - other.projector() * &self.basis;
        Ok(svd(&square_pad(&residual))?.sigma[0].min(1.0))
    }
}

/// Orthonormal basis of the orthogonal complement of the column space of `b`
/// (assumed orthonormal).
fn orthogonal_complement(b: &CMat) -> Result<CMat> {
    let (n, d) = b.shape();
    let p = CMat::identity(n, n) - b * b.adjoint();
    let s = svd(&p)?;
    Ok(s.u.columns(0, n - d).clone_owned())
}

fn square_pad(m: &CMat) -> CMat {
    let (r, cols) = m.shape();
    let n = r.max(cols);
    let mut out = CMat::zeros(n, n);
    out.view_mut((0, 0), (r, cols)).copy_from(m);
    out
}

/// A chain of subspaces with strictly increasing dimension.
#[derive(Debug, Clone)]
pub struct Flag {
    steps: Vec<ProjSubspace>,
}

impl Flag {
    /// Builds a flag, checking the nesting of consecutive steps to `1e-8`.
    pub fn new(steps: Vec<ProjSubspace>) -> Result<Self> {
        for w in steps.windows(2) {
            if w[1].dim() <= w[0].dim() {
                return Err(Error::PreconditionViolated(
                    "flag dimensions must strictly increase".into(),
                ));
            }
            let gap = w[0].containment_gap(&w[1])?;
            if gap > 1e-8 {
                return Err(Error::PreconditionViolated(format!(
                    "flag step of dimension {} is not contained in the next (gap {gap:e})",
                    w[0].dim()
                )));
            }
        }
        Ok(Flag { steps })
    }

    pub fn steps(&self) -> &[ProjSubspace] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Step with linear dimension `d`, if present.
    pub fn step_of_dim(&self, d: usize) -> Option<&ProjSubspace> {
        self.steps.iter().find(|s| s.dim() == d)
    }

    pub fn transform(&self, m: &CMat) -> Result<Self> {
        let steps = self
            .steps
            .iter()
            .map(|s| s.transform(m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Flag { steps })
    }
}

/// A singular gap `sigma_{p+1} / sigma_p` (1-based `p`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gap {
    pub p: usize,
    pub ratio: f64,
}

fn invertible_sigma(m: &CMat) -> Result<SvdTriple> {
    let s = svd(m)?;
    let smax = s.sigma[0];
    let smin = *s.sigma.last().unwrap();
    if !(smax > 0.0) || smin <= smax * 1e3 * f64::EPSILON * (s.dim() as f64) {
        return Err(Error::SingularInput {
            ratio: if smax > 0.0 { smin / smax } else { 0.0 },
        });
    }
    Ok(s)
}

/// Consecutive singular ratios; the returned list holds only the indices with
/// `ratio < 1 - gap_tol`.
pub fn singular_gaps(m: &CMat, gap_tol: f64) -> Result<Vec<Gap>> {
    let s = invertible_sigma(m)?;
    Ok(gaps_from_sigma(&s.sigma, gap_tol))
}

pub fn gaps_from_sigma(sigma: &[f64], gap_tol: f64) -> Vec<Gap> {
    sigma
        .windows(2)
        .enumerate()
        .map(|(i, w)| Gap {
            p: i + 1,
            ratio: w[1] / w[0],
        })
        .filter(|g| g.ratio < 1.0 - gap_tol)
        .collect()
}

fn gap_ratio(sigma: &[f64], p: usize) -> Result<f64> {
    if p == 0 || p >= sigma.len() {
        return Err(Error::DimensionMismatch {
            expected: sigma.len() - 1,
            found: p,
        });
    }
    Ok(sigma[p] / sigma[p - 1])
}

/// `U_p(M)`: span of the `p` leading left singular vectors.
pub fn dominant_subspace(m: &CMat, p: usize, gap_tol: f64) -> Result<ProjSubspace> {
    let s = svd(m)?;
    dominant_from_svd(&s, p, gap_tol)
}

pub fn dominant_from_svd(s: &SvdTriple, p: usize, gap_tol: f64) -> Result<ProjSubspace> {
    let ratio = gap_ratio(&s.sigma, p)?;
    if !(ratio < 1.0 - gap_tol) {
        return Err(Error::NoGap { p, ratio });
    }
    Ok(ProjSubspace::from_orthonormal(s.u.columns(0, p).clone_owned()))
}

/// `S_{N-p}(M) = U_{N-p}(M^{-1})`: span of the trailing `N - p` right singular
/// vectors.
pub fn repelling_subspace(m: &CMat, p: usize, gap_tol: f64) -> Result<ProjSubspace> {
    let s = invertible_sigma(m)?;
    repelling_from_svd(&s, p, gap_tol)
}

pub fn repelling_from_svd(s: &SvdTriple, p: usize, gap_tol: f64) -> Result<ProjSubspace> {
    let ratio = gap_ratio(&s.sigma, p)?;
    if !(ratio < 1.0 - gap_tol) {
        return Err(Error::NoGap { p, ratio });
    }
    let n = s.dim();
    Ok(ProjSubspace::from_orthonormal(
        s.v.columns(p, n - p).clone_owned(),
    ))
}

/// Frobenius distance of orthogonal projectors scaled into `[0, 1]`.
pub fn subspace_distance(a: &ProjSubspace, b: &ProjSubspace) -> Result<f64> {
    check_dim(a.ambient(), b.ambient())?;
    check_dim(a.dim(), b.dim())?;
    let d = a.dim().min(a.ambient() - a.dim());
    if d == 0 {
        return Ok(0.0);
    }
    let diff = (a.projector() - b.projector()).norm();
    Ok((diff / (2.0 * d as f64).sqrt()).min(1.0))
}

/// Chordal distance from `p` to its orthogonal projection onto `s`.
pub fn point_subspace_distance(p: &ProjPoint, s: &ProjSubspace) -> Result<f64> {
    check_dim(p.coords.len(), s.ambient())?;
    Ok(point_subspace_unit(&p.coords, &s.basis))
}

pub(crate) fn point_subspace_unit(p: &CVec, basis: &CMat) -> f64 {
    let coeff = basis.adjoint() * p;
    (p - basis * coeff).norm().min(1.0)
}

/// Distance from a unit vector to the hyperplane with unit covector `nu`.
pub(crate) fn point_hyperplane_unit(p: &CVec, nu: &CVec) -> f64 {
    let mut s = c(0.0, 0.0);
    for (a, b) in nu.iter().zip(p.iter()) {
        s += a * b;
    }
    s.norm().min(1.0)
}

/// Smallest singular value of `[A | B]`; positive iff the spans are
/// complementary (when `dim A + dim B = ambient`).
pub fn transversality(a: &ProjSubspace, b: &ProjSubspace) -> Result<f64> {
    check_dim(a.ambient(), b.ambient())?;
    let n = a.ambient();
    let mut stacked = CMat::zeros(n, a.dim() + b.dim());
    stacked.view_mut((0, 0), (n, a.dim())).copy_from(&a.basis);
    stacked
        .view_mut((0, a.dim()), (n, b.dim()))
        .copy_from(&b.basis);
    let s = svd(&square_pad(&stacked))?;
    let k = a.dim() + b.dim();
    Ok(s.sigma[k.min(n) - 1])
}
