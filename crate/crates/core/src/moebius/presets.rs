//! Named sample groups used by the CLI and the test suites.

use num_complex::Complex64;

use crate::error::Result;
use crate::projlin::c;

use super::{AssertedClass, GroupSpec, Mat2, MoebiusElement};

/// Conjugator of the second Schottky generator.
pub fn schottky_conjugator() -> MoebiusElement {
    MoebiusElement::from_entries(c(1., 0.), c(1., 0.), c(1., 0.), c(2., 0.)).unwrap()
}

fn diag(lambda: Complex64) -> Result<MoebiusElement> {
    MoebiusElement::new(Mat2::new(lambda, c(0., 0.), c(0., 0.), lambda.inv()))
}

/// `<diag(lambda, 1/lambda)>`, generator `g`.
pub fn cyclic_loxodromic(lambda: f64, n: usize) -> Result<GroupSpec> {
    cyclic_loxodromic_complex(c(lambda, 0.0), n)
}

pub fn cyclic_loxodromic_complex(lambda: Complex64, n: usize) -> Result<GroupSpec> {
    GroupSpec::new(
        vec![("g".into(), diag(lambda)?)],
        AssertedClass::CyclicLoxodromic,
        n,
    )
}

/// `<[[1,1],[0,1]]>`, generator `g`.
pub fn cyclic_parabolic(n: usize) -> Result<GroupSpec> {
    let g = MoebiusElement::from_entries(c(1., 0.), c(1., 0.), c(0., 0.), c(1., 0.))?;
    GroupSpec::new(vec![("g".into(), g)], AssertedClass::Other, n)
}

/// `<[[cos t, -sin t], [sin t, cos t]]>`, generator `g`.
pub fn rotation(theta: f64, n: usize) -> Result<GroupSpec> {
    let (s, co) = theta.sin_cos();
    let g = MoebiusElement::from_entries(c(co, 0.), c(-s, 0.), c(s, 0.), c(co, 0.))?;
    GroupSpec::new(vec![("g".into(), g)], AssertedClass::Other, n)
}

/// Generators `a = diag(3, 1/3)` and `b = B a B^{-1}` with `B = [[1,1],[1,2]]`.
///
/// `a` pairs the disks `|z| < 0.2` and `|z| > 1.8`; `b` pairs their `B`-images
/// `B{|w| < 0.6}` and `B{|w| > 5.4}`, the disks over the real intervals
/// `[2/7, 8/13]` and `[32/37, 22/17]`. The four disks are disjoint, so the
/// group is a classical Schottky group.
pub fn schottky_pair(n: usize) -> Result<GroupSpec> {
    let a = diag(c(3.0, 0.0))?;
    let b = a.conjugate_by(&schottky_conjugator());
    let b = MoebiusElement::from_unnormalized(*b.mat())?;
    GroupSpec::new(
        vec![("a".into(), a), ("b".into(), b)],
        AssertedClass::Schottky,
        n,
    )
}

/// Two hyperbolic elements of SL(2,Z): `a = [[2,1],[1,1]]`, `b = [[1,1],[1,2]]`.
pub fn fuchsian_sample(n: usize) -> Result<GroupSpec> {
    let a = MoebiusElement::from_entries(c(2., 0.), c(1., 0.), c(1., 0.), c(1., 0.))?;
    let b = MoebiusElement::from_entries(c(1., 0.), c(1., 0.), c(1., 0.), c(2., 0.))?;
    GroupSpec::new(
        vec![("a".into(), a), ("b".into(), b)],
        AssertedClass::Fuchsian,
        n,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{act, classify, ElementType};
    use crate::projlin::ProjPoint;

    fn affine(z: Complex64) -> ProjPoint {
        ProjPoint::from_slice(&[z, c(1., 0.)]).unwrap()
    }

    fn coord(p: &ProjPoint) -> Complex64 {
        p.coords()[0] / p.coords()[1]
    }

    #[test]
    fn presets_classify() {
        let s = schottky_pair(2).unwrap();
        assert!(s.generators().all(|g| classify(g) == ElementType::Loxodromic));
        let f = fuchsian_sample(2).unwrap();
        assert!(f.generators().all(|g| classify(g) == ElementType::Loxodromic));
        assert_eq!(classify(cyclic_parabolic(2).unwrap().generator(0)), ElementType::Parabolic);
        assert_eq!(classify(rotation(0.3, 2).unwrap().generator(0)), ElementType::Elliptic);
    }

    #[test]
    fn schottky_ping_pong() {
        let s = schottky_pair(2).unwrap();
        let on_circle = |z: Complex64, lo: f64, hi: f64| {
            let centre = (lo + hi) / 2.0;
            ((z - centre).norm() - (hi - lo) / 2.0).abs() < 1e-12
        };
        for k in 0..64 {
            let t = k as f64 / 64.0 * std::f64::consts::TAU;
            let (sin, cos) = t.sin_cos();
            let image = coord(&act(s.generator(0), &affine(c(0.2 * cos, 0.2 * sin))).unwrap());
            assert!((image.norm() - 1.8).abs() < 1e-12);

            let z = coord(&act(&schottky_conjugator(), &affine(c(0.6 * cos, 0.6 * sin))).unwrap());
            assert!(on_circle(z, 2.0 / 7.0, 8.0 / 13.0));
            let bz = coord(&act(s.generator(1), &affine(z)).unwrap());
            assert!(on_circle(bz, 32.0 / 37.0, 22.0 / 17.0));
        }
        // disjointness of the four disks along the real axis
        let gaps = [(0.2, 2.0 / 7.0), (8.0 / 13.0, 32.0 / 37.0), (22.0 / 17.0, 1.8)];
        assert!(gaps.iter().all(|(a, b)| a < b));
    }
}
