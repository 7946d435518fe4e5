//! Elements of PSL(2,C), stored as a fixed SL(2,C) lift, and finitely
//! generated groups of them.

mod limit_set;
pub mod presets;
mod words;

use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::projlin::{self, c, CMat, CVec, ProjPoint};

pub use limit_set::{limit_set_cp1, Cp1LimitPoint, Cp1LimitSet, DEFAULT_DEDUP_TOL};
pub use words::{
    count_reduced_words, enumerate_words, enumerate_words_capped, parse_word, AssertedClass,
    GroupSpec, GroupWord, DEFAULT_WORD_CAP,
};

pub type Mat2 = Matrix2<Complex64>;

const DET_TOL: f64 = 1e-12;
const IDENTITY_TOL: f64 = 1e-10;
const PARABOLIC_TOL: f64 = 1e-9;
const REAL_TRACE_TOL: f64 = 1e-9;

/// Width of the band `|tr^2 - 4| < 1e-6` in which parabolic and nearby
/// elliptic/loxodromic elements are numerically hard to tell apart.
pub const PARABOLIC_BAND: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementType {
    Identity,
    Elliptic,
    Parabolic,
    Loxodromic,
}

impl ElementType {
    pub fn as_str(self) -> &'static str {
        match self {
            ElementType::Identity => "identity",
            ElementType::Elliptic => "elliptic",
            ElementType::Parabolic => "parabolic",
            ElementType::Loxodromic => "loxodromic",
        }
    }
}

impl fmt::Display for ElementType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FixedPointRole {
    Attracting,
    Repelling,
    Neutral,
}

#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub point: ProjPoint,
    pub role: FixedPointRole,
}

/// A determinant-one 2x2 complex matrix, optionally labelled by a word.
#[derive(Debug, Clone, PartialEq)]
pub struct MoebiusElement {
    mat: Mat2,
    label: Option<String>,
}

fn det(m: &Mat2) -> Complex64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

impl MoebiusElement {
    /// Checks `det = 1` to `1e-12`, relative to the squared entry scale for
    /// large matrices.
    pub fn new(mat: Mat2) -> Result<Self> {
        if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NumericalFailure("non-finite matrix entry".into()));
        }
        let d = det(&mat);
        let scale = mat.norm_squared().max(1.0);
        if (d - 1.0).norm() > DET_TOL * scale {
            return Err(Error::PreconditionViolated(format!(
                "determinant {d} differs from 1"
            )));
        }
        Ok(MoebiusElement { mat, label: None })
    }

    /// Rescales by a square root of the determinant.
    pub fn from_unnormalized(mat: Mat2) -> Result<Self> {
        let d = det(&mat);
        if !(d.norm() > 1e-300) {
            return Err(Error::SingularInput { ratio: 0.0 });
        }
        let s = d.sqrt();
        MoebiusElement::new(mat / s)
    }

    pub fn from_entries(a: Complex64, b: Complex64, cc: Complex64, d: Complex64) -> Result<Self> {
        MoebiusElement::new(Mat2::new(a, b, cc, d))
    }

    /// Product or other derived matrix whose determinant is one up to
    /// accumulated rounding.
    pub(crate) fn from_product(mat: Mat2, label: Option<String>) -> Self {
        MoebiusElement { mat, label }
    }

    pub fn identity() -> Self {
        MoebiusElement {
            mat: Mat2::identity(),
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn mat(&self) -> &Mat2 {
        &self.mat
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn det(&self) -> Complex64 {
        det(&self.mat)
    }

    pub fn trace(&self) -> Complex64 {
        self.mat[(0, 0)] + self.mat[(1, 1)]
    }

    pub fn inverse(&self) -> Self {
        let m = &self.mat;
        MoebiusElement {
            mat: Mat2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]),
            label: None,
        }
    }

    pub fn compose(&self, other: &MoebiusElement) -> Self {
        MoebiusElement {
            mat: self.mat * other.mat,
            label: None,
        }
    }

    pub fn conjugate_by(&self, b: &MoebiusElement) -> Self {
        b.compose(self).compose(&b.inverse())
    }

    /// `A^m` by repeated squaring; negative exponents use the inverse. Entries
    /// grow like `sigma_1^|m|`, so keep `|m|` modest.
    pub fn power(&self, m: i64) -> Self {
        let mut base = if m < 0 { self.inverse().mat } else { self.mat };
        let mut acc = Mat2::identity();
        let mut e = m.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        MoebiusElement { mat: acc, label: None }
    }

    /// `A^m` rescaled to unit Frobenius norm, by repeated squaring. Negative
    /// exponents use the inverse. Suitable for any `m` without overflow.
    /// Parabolic elements use the exact form `+-(I + mN)`, since repeated
    /// squaring of a near-unipotent matrix loses about `m eps` relative
    /// accuracy.
    pub fn normalized_power(&self, m: i64) -> Mat2 {
        if classify(self) == ElementType::Parabolic {
            let sign = if self.trace().re >= 0.0 { 1.0 } else { -1.0 };
            let nil = self.mat * c(sign, 0.0) - Mat2::identity();
            let p = (Mat2::identity() + nil * c(m as f64, 0.0)) * c(sign.powi((m % 2) as i32), 0.0);
            return p / c(p.norm(), 0.0);
        }
        let base = if m < 0 { self.inverse().mat } else { self.mat };
        let mut base = base / c(base.norm(), 0.0);
        let mut acc = Mat2::identity() / c(2f64.sqrt(), 0.0);
        let mut e = m.unsigned_abs();
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
                acc /= c(acc.norm(), 0.0);
            }
            base *= base;
            base /= c(base.norm(), 0.0);
            e >>= 1;
        }
        acc
    }

    pub fn as_cmat(&self) -> CMat {
        CMat::from_fn(2, 2, |i, j| self.mat[(i, j)])
    }
}

/// Trace-based classification.
pub fn classify(a: &MoebiusElement) -> ElementType {
    let m = a.mat();
    let id = Mat2::identity();
    let max_dev = |x: Mat2| x.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max_dev(m - id) <= IDENTITY_TOL || max_dev(m + id) <= IDENTITY_TOL {
        return ElementType::Identity;
    }
    let tr = a.trace();
    let tr2 = tr * tr;
    if (tr2 - 4.0).norm() < PARABOLIC_TOL {
        return ElementType::Parabolic;
    }
    if tr.im.abs() < REAL_TRACE_TOL && tr.re.abs() < 2.0 {
        return ElementType::Elliptic;
    }
    ElementType::Loxodromic
}

/// True when `|tr^2 - 4|` falls in the numerically ambiguous band.
pub fn in_parabolic_band(a: &MoebiusElement) -> bool {
    let tr = a.trace();
    (tr * tr - 4.0).norm() < PARABOLIC_BAND
}

fn eigenvector(m: &Mat2, lambda: Complex64) -> Result<ProjPoint> {
    // rows of A - lambda I are (a - l, b) and (c, d - l); either null vector candidate works
    let v1 = CVec::from_vec(vec![m[(0, 1)], lambda - m[(0, 0)]]);
    let v2 = CVec::from_vec(vec![lambda - m[(1, 1)], m[(1, 0)]]);
    let v = if v1.norm() >= v2.norm() { v1 } else { v2 };
    projlin::normalize_projective(&v)
}

/// Fixed points in CP^1 with their dynamical roles.
pub fn fixed_points(a: &MoebiusElement) -> Result<Vec<FixedPoint>> {
    let kind = classify(a);
    let m = a.mat();
    let tr = a.trace();
    match kind {
        ElementType::Identity => Err(Error::IdentityElement),
        ElementType::Parabolic => {
            let lambda = tr / 2.0;
            Ok(vec![FixedPoint {
                point: eigenvector(m, lambda)?,
                role: FixedPointRole::Neutral,
            }])
        }
        ElementType::Elliptic | ElementType::Loxodromic => {
            let disc = (tr * tr - 4.0).sqrt();
            let mut l1 = (tr + disc) / 2.0;
            let mut l2 = (tr - disc) / 2.0;
            // the smaller root loses precision by cancellation; recover it from l1 l2 = 1
            if l1.norm() >= l2.norm() {
                l2 = l1.inv();
            } else {
                l1 = l2.inv();
            }
            if kind == ElementType::Elliptic {
                return Ok(vec![
                    FixedPoint {
                        point: eigenvector(m, l1)?,
                        role: FixedPointRole::Neutral,
                    },
                    FixedPoint {
                        point: eigenvector(m, l2)?,
                        role: FixedPointRole::Neutral,
                    },
                ]);
            }
            let (big, small) = if l1.norm() >= l2.norm() { (l1, l2) } else { (l2, l1) };
            Ok(vec![
                FixedPoint {
                    point: eigenvector(m, big)?,
                    role: FixedPointRole::Attracting,
                },
                FixedPoint {
                    point: eigenvector(m, small)?,
                    role: FixedPointRole::Repelling,
                },
            ])
        }
    }
}

/// Attracting and repelling fixed points of a loxodromic element.
pub fn attracting_repelling(a: &MoebiusElement) -> Result<(ProjPoint, ProjPoint)> {
    if classify(a) != ElementType::Loxodromic {
        return Err(Error::PreconditionViolated(format!(
            "element is {}, not loxodromic",
            classify(a)
        )));
    }
    let mut fps = fixed_points(a)?.into_iter();
    let att = fps.next().unwrap().point;
    let rep = fps.next().unwrap().point;
    Ok((att, rep))
}

pub fn act(a: &MoebiusElement, p: &ProjPoint) -> Result<ProjPoint> {
    if p.coords().len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.coords().len(),
        });
    }
    let m = a.mat();
    let x = p.coords();
    let v = CVec::from_vec(vec![
        m[(0, 0)] * x[0] + m[(0, 1)] * x[1],
        m[(1, 0)] * x[0] + m[(1, 1)] * x[1],
    ]);
    projlin::normalize_projective(&v)
}

/// `A = u diag(sigma1, 1/sigma1) v` with `u, v` in SU(2).
#[derive(Debug, Clone)]
pub struct Kak2 {
    pub u: Mat2,
    pub sigma1: f64,
    pub v: Mat2,
}

impl Kak2 {
    pub fn reconstruct(&self) -> Mat2 {
        let a = Mat2::new(c(self.sigma1, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 / self.sigma1, 0.0));
        self.u * a * self.v
    }
}

pub fn kak2(a: &MoebiusElement) -> Result<Kak2> {
    let s = projlin::svd(&a.as_cmat())?;
    let big_u = Mat2::from_fn(|i, j| s.u[(i, j)]);
    let vh = Mat2::from_fn(|i, j| s.v[(j, i)].conj());
    let delta = det(&big_u);
    let delta = delta / delta.norm();
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let u = big_u * Mat2::new(one, zero, zero, delta.conj());
    let v = Mat2::new(one, zero, zero, delta) * vh;
    let sigma1 = s.sigma[0].max(1.0);
    Ok(Kak2 { u, sigma1, v })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(a: (f64, f64), b: (f64, f64), cc: (f64, f64), d: (f64, f64)) -> MoebiusElement {
        MoebiusElement::from_entries(c(a.0, a.1), c(b.0, b.1), c(cc.0, cc.1), c(d.0, d.1)).unwrap()
    }

    fn diag2() -> MoebiusElement {
        m((2., 0.), (0., 0.), (0., 0.), (0.5, 0.))
    }

    fn unipotent() -> MoebiusElement {
        m((1., 0.), (1., 0.), (0., 0.), (1., 0.))
    }

    fn rot(t: f64) -> MoebiusElement {
        m((t.cos(), 0.), (-t.sin(), 0.), (t.sin(), 0.), (t.cos(), 0.))
    }

    fn pt(x: (f64, f64), y: (f64, f64)) -> ProjPoint {
        ProjPoint::from_slice(&[c(x.0, x.1), c(y.0, y.1)]).unwrap()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&unipotent()), ElementType::Parabolic);
        assert_eq!(classify(&diag2()), ElementType::Loxodromic);
        assert_eq!(classify(&rot(0.3)), ElementType::Elliptic);
        assert_eq!(classify(&MoebiusElement::identity()), ElementType::Identity);
        let minus = m((-1., 0.), (0., 0.), (0., 0.), (-1., 0.));
        assert_eq!(classify(&minus), ElementType::Identity);
        // complex trace of modulus < 2 is still loxodromic
        let lox = m((0.5, 0.5), (0., 0.), (0., 0.), (1., -1.));
        assert_eq!(classify(&lox), ElementType::Loxodromic);
    }

    #[test]
    fn rejects_bad_determinant() {
        assert!(MoebiusElement::from_entries(c(2., 0.), c(0., 0.), c(0., 0.), c(1., 0.)).is_err());
        let e = MoebiusElement::from_unnormalized(Mat2::new(
            c(2., 0.),
            c(0., 0.),
            c(0., 0.),
            c(1., 0.),
        ))
        .unwrap();
        assert!((e.det() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn fixed_points_diagonal() {
        let fp = fixed_points(&diag2()).unwrap();
        assert_eq!(fp.len(), 2);
        assert_eq!(fp[0].role, FixedPointRole::Attracting);
        assert_eq!(fp[0].point, ProjPoint::basis(1, 0));
        assert_eq!(fp[1].role, FixedPointRole::Repelling);
        assert_eq!(fp[1].point, ProjPoint::basis(1, 1));
    }

    #[test]
    fn fixed_points_parabolic_and_identity() {
        let fp = fixed_points(&unipotent()).unwrap();
        assert_eq!(fp.len(), 1);
        assert_eq!(fp[0].role, FixedPointRole::Neutral);
        assert_eq!(fp[0].point, ProjPoint::basis(1, 0));
        assert!(matches!(
            fixed_points(&MoebiusElement::identity()),
            Err(Error::IdentityElement)
        ));
        let fp = fixed_points(&rot(0.3)).unwrap();
        assert!(fp.iter().all(|f| f.role == FixedPointRole::Neutral));
    }

    #[test]
    fn fixed_points_conjugated() {
        let b = m((1., 0.), (1., 0.), (1., 0.), (2., 0.));
        let g = diag2().conjugate_by(&b);
        let fp = fixed_points(&g).unwrap();
        let att = act(&b, &ProjPoint::basis(1, 0)).unwrap();
        let rep = act(&b, &ProjPoint::basis(1, 1)).unwrap();
        assert!(projlin::chordal_distance(&fp[0].point, &att).unwrap() < 1e-14);
        assert!(projlin::chordal_distance(&fp[1].point, &rep).unwrap() < 1e-14);
    }

    #[test]
    fn act_examples() {
        let p = act(&diag2(), &pt((1., 0.), (1., 0.))).unwrap();
        assert!(projlin::chordal_distance(&p, &pt((4., 0.), (1., 0.))).unwrap() < 1e-15);
        let q = pt((0.3, -1.), (2., 0.5));
        assert_eq!(act(&MoebiusElement::identity(), &q).unwrap(), q);
    }

    #[test]
    fn kak2_examples() {
        let k = kak2(&diag2()).unwrap();
        assert!((k.sigma1 - 2.0).abs() < 1e-15);
        assert!((k.reconstruct() - diag2().mat()).norm() < 1e-14);

        let k = kak2(&rot(0.7)).unwrap();
        assert!((k.sigma1 - 1.0).abs() < 1e-14);

        // [[2,1],[0,1/2]]: sigma1^2 is the larger root of s^2 - (4+1+1/4) s + 1
        let a = m((2., 0.), (1., 0.), (0., 0.), (0.5, 0.));
        let t = 5.25f64;
        let s1 = ((t + (t * t - 4.0).sqrt()) / 2.0).sqrt();
        let k = kak2(&a).unwrap();
        assert!((k.sigma1 - s1).abs() < 1e-14);
        assert!((k.reconstruct() - a.mat()).norm() < 1e-10);
        for w in [k.u, k.v] {
            assert!((det(&w) - 1.0).norm() < 1e-14);
            assert!((w.adjoint() * w - Mat2::identity()).norm() < 1e-14);
        }
    }

    #[test]
    fn normalized_power_matches_direct() {
        let g = unipotent();
        let p = g.normalized_power(5);
        // [[1,5],[0,1]] / sqrt(27)
        let want = Mat2::new(c(1., 0.), c(5., 0.), c(0., 0.), c(1., 0.)) / c(27f64.sqrt(), 0.0);
        assert!((p - want).norm() < 1e-15);
        let q = g.normalized_power(-2);
        let want = Mat2::new(c(1., 0.), c(-2., 0.), c(0., 0.), c(1., 0.)) / c(6f64.sqrt(), 0.0);
        assert!((q - want).norm() < 1e-15);
    }
}
