//! Random inputs for property checks: group elements of prescribed type,
//! points of CP^1, and exactly unimodular Gaussian-rational matrices.

use std::f64::consts::{PI, TAU};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::moebius::{Mat2, MoebiusElement};
use crate::projlin::{self, c, CVec, ProjPoint};
use crate::veronese::GaussRat;

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    c(normal(rng), normal(rng))
}

fn unit_phase<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.random_range(0.0..TAU))
}

/// Haar-random element of SU(2).
pub fn su2<R: Rng + ?Sized>(rng: &mut R) -> Mat2 {
    let (a, b) = loop {
        let a = complex_normal(rng);
        let b = complex_normal(rng);
        let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
        if r > 1e-8 {
            break (a / r, b / r);
        }
    };
    Mat2::new(a, -b.conj(), b, a.conj())
}

/// `k1 diag(s, 1/s) k2` with Haar `k1, k2` and `s` uniform in `[1, smax]`;
/// its singular values are `s` and `1/s`.
pub fn conjugator<R: Rng + ?Sized>(rng: &mut R, smax: f64) -> MoebiusElement {
    let s = rng.random_range(1.0..=smax);
    let d = Mat2::new(c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 / s, 0.0));
    MoebiusElement::from_product(su2(rng) * d * su2(rng), None)
}

fn conjugated<R: Rng + ?Sized>(rng: &mut R, core: Mat2) -> MoebiusElement {
    let b = conjugator(rng, 2.0);
    MoebiusElement::from_product(b.mat() * core * b.inverse().mat(), None)
}

/// Conjugate of `diag(l, 1/l)` with `|l|` in `[1.1, 3]` and random argument.
pub fn loxodromic<R: Rng + ?Sized>(rng: &mut R) -> MoebiusElement {
    let l = Complex64::from_polar(rng.random_range(1.1..=3.0), rng.random_range(0.0..TAU));
    conjugated(rng, Mat2::new(l, c(0.0, 0.0), c(0.0, 0.0), l.inv()))
}

/// Conjugate of a rotation by angle `2 theta`, `theta` in `(0.1, pi - 0.1)`.
pub fn elliptic<R: Rng + ?Sized>(rng: &mut R) -> MoebiusElement {
    let e = Complex64::from_polar(1.0, rng.random_range(0.1..PI - 0.1));
    conjugated(rng, Mat2::new(e, c(0.0, 0.0), c(0.0, 0.0), e.conj()))
}

/// Conjugate of `+-[[1, t], [0, 1]]` with `|t|` in `[0.5, 2]`.
pub fn parabolic<R: Rng + ?Sized>(rng: &mut R) -> MoebiusElement {
    let t = rng.random_range(0.5..=2.0) * unit_phase(rng);
    let sign = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let core = Mat2::new(c(sign, 0.0), t, c(0.0, 0.0), c(sign, 0.0));
    conjugated(rng, core)
}

/// Gaussian matrix rescaled to determinant one.
pub fn sl2<R: Rng + ?Sized>(rng: &mut R) -> MoebiusElement {
    loop {
        let m = Mat2::from_fn(|_, _| complex_normal(rng));
        if let Ok(e) = MoebiusElement::from_unnormalized(m) {
            if e.mat().norm() < 1e3 {
                return e;
            }
        }
    }
}

/// Unitarily invariant random point of CP^1.
pub fn cp1_point<R: Rng + ?Sized>(rng: &mut R) -> ProjPoint {
    loop {
        let v = CVec::from_fn(2, |_, _| complex_normal(rng));
        if let Ok(p) = projlin::normalize_projective(&v) {
            return p;
        }
    }
}

/// Unitarily invariant random point of CP^k.
pub fn cpn_point<R: Rng + ?Sized>(rng: &mut R, k: usize) -> ProjPoint {
    loop {
        let v = CVec::from_fn(k + 1, |_, _| complex_normal(rng));
        if let Ok(p) = projlin::normalize_projective(&v) {
            return p;
        }
    }
}

/// `count` points of CP^1 with pairwise chordal distance at least `min_sep`,
/// by rejection.
pub fn separated_cp1_points<R: Rng + ?Sized>(
    rng: &mut R,
    count: usize,
    min_sep: f64,
) -> Vec<ProjPoint> {
    let mut out: Vec<ProjPoint> = Vec::with_capacity(count);
    while out.len() < count {
        let p = cp1_point(rng);
        if out
            .iter()
            .all(|q| projlin::chordal_unit(p.coords(), q.coords()) >= min_sep)
        {
            out.push(p);
        }
    }
    out
}

fn small_rational<R: Rng + ?Sized>(rng: &mut R) -> BigRational {
    let num: i64 = rng.random_range(-9..=9);
    let den: i64 = rng.random_range(1..=7);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn small_gauss<R: Rng + ?Sized>(rng: &mut R) -> GaussRat {
    Complex::new(small_rational(rng), small_rational(rng))
}

/// Random `[[a, b], [c, (1 + bc)/a]]` with small Gaussian-rational `a != 0`,
/// `b`, `c`; exactly unimodular.
pub fn gauss_rational_sl2<R: Rng + ?Sized>(rng: &mut R) -> [[GaussRat; 2]; 2] {
    let a = loop {
        let a = small_gauss(rng);
        if !a.is_zero() {
            break a;
        }
    };
    let b = small_gauss(rng);
    let cc = small_gauss(rng);
    let d = (GaussRat::one() + b.clone() * cc.clone()) / a.clone();
    [[a, b], [cc, d]]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{classify, ElementType};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn samplers_produce_their_class() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            assert_eq!(classify(&loxodromic(&mut rng)), ElementType::Loxodromic);
            assert_eq!(classify(&elliptic(&mut rng)), ElementType::Elliptic);
            assert_eq!(classify(&parabolic(&mut rng)), ElementType::Parabolic);
            let u = su2(&mut rng);
            assert!((u.adjoint() * u - Mat2::identity()).norm() < 1e-14);
        }
    }

    #[test]
    fn gauss_rational_is_unimodular() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..50 {
            let [[a, b], [cc, d]] = gauss_rational_sl2(&mut rng);
            assert!((a * d - b * cc).is_one());
        }
    }

    #[test]
    fn separation_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let pts = separated_cp1_points(&mut rng, 9, 0.05);
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                assert!(projlin::chordal_distance(&pts[i], &pts[j]).unwrap() >= 0.05);
            }
        }
    }
}
