use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use veronese_core::projlin::{
    self, c, chordal_distance, normalize_projective, CMat, CVec, ProjPoint, ProjSubspace,
};
use veronese_core::sample;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(r: &mut ChaCha8Rng, rows: usize, cols: usize) -> CMat {
    DMatrix::from_fn(rows, cols, |_, _| {
        c(StandardNormal.sample(&mut *r), StandardNormal.sample(&mut *r))
    })
}

fn haar_unitary(r: &mut ChaCha8Rng, k: usize) -> CMat {
    gaussian(r, k, k).qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn normalization_ignores_scale(seed in any::<u64>(), k in 2usize..9, mag in -6.0f64..6.0, arg in 0.0f64..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let v = gaussian(&mut r, k, 1).column(0).into_owned();
        let p = normalize_projective(&v).unwrap();
        let q = normalize_projective(&(v * c(10f64.powf(mag), 0.0) * c(0.0, arg).exp())).unwrap();
        prop_assert!(chordal_distance(&p, &q).unwrap() < 1e-14);
        prop_assert!((p.coords().norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn chordal_distance_is_a_unitarily_invariant_metric(seed in any::<u64>(), k in 2usize..7) {
        let mut r = rng(seed);
        let p = sample::cpn_point(&mut r, k - 1);
        let q = sample::cpn_point(&mut r, k - 1);
        let s = sample::cpn_point(&mut r, k - 1);
        let d = |a: &ProjPoint, b: &ProjPoint| chordal_distance(a, b).unwrap();
        prop_assert!(d(&p, &p) < 1e-7);
        prop_assert!((d(&p, &q) - d(&q, &p)).abs() < 1e-15);
        prop_assert!(d(&p, &q) <= 1.0 + 1e-15);
        // sin of the Fubini-Study angle is not subadditive, the angle is
        let ang = |a, b| d(a, b).asin();
        prop_assert!(ang(&p, &s) <= ang(&p, &q) + ang(&q, &s) + 1e-12);
        let u = haar_unitary(&mut r, k);
        let up = normalize_projective(&(&u * p.coords())).unwrap();
        let uq = normalize_projective(&(&u * q.coords())).unwrap();
        prop_assert!((d(&up, &uq) - d(&p, &q)).abs() < 1e-12);
    }

    #[test]
    fn svd_reconstructs_with_orthonormal_factors(seed in any::<u64>(), k in 1usize..12) {
        let mut r = rng(seed);
        let m = gaussian(&mut r, k, k);
        let s = projlin::svd(&m).unwrap();
        prop_assert_eq!(s.sigma.len(), k);
        prop_assert!(s.sigma.windows(2).all(|w| w[0] >= w[1]));
        prop_assert!((s.reconstruct() - &m).norm() < 1e-12 * m.norm());
        prop_assert!((s.u.adjoint() * &s.u - CMat::identity(k, k)).norm() < 1e-12);
        prop_assert!((s.v.adjoint() * &s.v - CMat::identity(k, k)).norm() < 1e-12);
    }

    #[test]
    fn graded_svd_keeps_relative_accuracy(seed in any::<u64>(), k in 2usize..7) {
        // U D with U unitary has singular values exactly the grading
        let mut r = rng(seed);
        let u = haar_unitary(&mut r, k);
        let grade: Vec<f64> = (0..k).map(|i| 1e-5f64.powi(i as i32)).collect();
        let m = CMat::from_fn(k, k, |i, j| u[(i, j)] * grade[j]);
        let s = projlin::svd_graded(&m).unwrap();
        for (sv, g) in s.sigma.iter().zip(&grade) {
            prop_assert!((sv / g - 1.0).abs() < 1e-12, "sigma {:?}", s.sigma);
        }
    }

    #[test]
    fn subspace_distance_and_transversality(seed in any::<u64>(), k in 3usize..8) {
        let mut r = rng(seed);
        let dim = 1 + (seed as usize) % (k - 1);
        let a = ProjSubspace::from_spanning(&gaussian(&mut r, k, dim)).unwrap();
        let b = ProjSubspace::from_spanning(&gaussian(&mut r, k, k - dim)).unwrap();
        prop_assert!(projlin::subspace_distance(&a, &a).unwrap() < 1e-7);
        let t = projlin::transversality(&a, &b).unwrap();
        prop_assert!(t > 0.0 && t <= 1.0 + 1e-12);
        let u = haar_unitary(&mut r, k);
        let ua = a.transform(&u).unwrap();
        let ub = b.transform(&u).unwrap();
        prop_assert!((projlin::transversality(&ua, &ub).unwrap() - t).abs() < 1e-10);
        // points of a subspace sit at distance zero from it
        let x: CVec = a.basis() * gaussian(&mut r, dim, 1).column(0);
        let p = normalize_projective(&x).unwrap();
        prop_assert!(projlin::point_subspace_distance(&p, &a).unwrap() < 1e-7);
        prop_assert!(a.contains_point(&p, 1e-10));
    }
}

#[test]
fn coordinate_subspaces_are_orthogonal_complements() {
    let a = ProjSubspace::coordinate(4, &[0, 1]);
    let b = ProjSubspace::coordinate(4, &[2, 3, 4]);
    assert!((projlin::transversality(&a, &b).unwrap() - 1.0).abs() < 1e-15);
    let c2 = ProjSubspace::coordinate(4, &[2, 3]);
    assert!((projlin::subspace_distance(&a, &c2).unwrap() - 1.0).abs() < 1e-15);
    assert!(projlin::subspace_distance(&a, &b).is_err());
    assert_eq!(a.proj_dim(), 1);
}

#[test]
fn zero_vector_is_rejected() {
    assert!(normalize_projective(&CVec::zeros(3)).is_err());
}
