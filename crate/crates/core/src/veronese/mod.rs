//! The rational normal curve in CP^n and the induced action of SL(2,C).
//!
//! Coordinates on `C^{n+1}` are the weighted monomial coordinates in which a
//! point `[x:y]` of CP^1 embeds as `(C(n,j) x^{n-j} y^j)_j`. In these
//! coordinates the representation has polynomial entries but is not unitary
//! on SU(2); rescaling by `W = diag(sqrt(C(n,j)))` gives the unitary frame
//! `W^{-1} M W`, where singular values and singular subspaces are measured.

mod classify;
pub mod exact;
mod osculating;
mod rank;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::{Mat2, MoebiusElement};
use crate::projlin::{self, c, CMat, CVec, ProjPoint, ProjSubspace};

pub use classify::{classify_matrix, classify_projective, ClassifyTolerances};
pub use exact::{irrep_closed_form, irrep_oracle, GaussRat, Scalar};
pub use osculating::{
    hyperplane_covector, osculating_flag, osculating_hyperplane, tangency_defect, OsculatingFlag,
};
pub use rank::{curve_rank_check, CurveRank};


pub(crate) fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0f64;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

fn check_degree(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::PreconditionViolated(format!(
            "degree must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Unnormalized weighted coordinates `C(n,j) x^{n-j} y^j`.
pub fn embed_coords(x: Complex64, y: Complex64, n: usize) -> CVec {
    let mut xp = vec![c(1.0, 0.0); n + 1];
    let mut yp = vec![c(1.0, 0.0); n + 1];
    for k in 1..=n {
        xp[k] = xp[k - 1] * x;
        yp[k] = yp[k - 1] * y;
    }
    CVec::from_fn(n + 1, |j, _| xp[n - j] * yp[j] * binomial(n, j))
}

/// Degree-`n` Veronese embedding of a point of CP^1.
pub fn embed(p: &ProjPoint, n: usize) -> Result<ProjPoint> {
    check_degree(n)?;
    if p.coords().len() != 2 {
        return Err(Error::DimensionMismatch {
            expected: 2,
            found: p.coords().len(),
        });
    }
    let v = embed_coords(p.coords()[0], p.coords()[1], n);
    projlin::normalize_projective(&v)
}

/// Image of a 2x2 matrix under the degree-`n` symmetric power, in weighted
/// coordinates. Homogeneous of degree `n` in the entries, so it is also
/// meaningful for rescaled (non-unimodular) matrices.
pub fn irrep_matrix(m: &Mat2, n: usize) -> CMat {
    let rows = irrep_closed_form(m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)], n);
    CMat::from_fn(n + 1, n + 1, |i, j| rows[i][j])
}

/// The representation matrix of an SL(2,C) element.
#[derive(Debug, Clone)]
pub struct RepMatrix {
    pub mat: CMat,
    pub n: usize,
    pub source: Option<String>,
}

pub fn irrep(a: &MoebiusElement, n: usize) -> RepMatrix {
    RepMatrix {
        mat: irrep_matrix(a.mat(), n),
        n,
        source: a.label().map(str::to_string),
    }
}

impl RepMatrix {
    pub fn apply(&self, p: &ProjPoint) -> Result<ProjPoint> {
        if p.coords().len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                expected: self.n + 1,
                found: p.coords().len(),
            });
        }
        projlin::normalize_projective(&(&self.mat * p.coords()))
    }

    /// `W^{-1} M W`.
    pub fn unitary_frame(&self) -> CMat {
        to_unitary_frame(&self.mat, self.n)
    }

    pub fn det(&self) -> Complex64 {
        self.mat.determinant()
    }
}

/// Diagonal of `W`.
pub fn frame_weights(n: usize) -> Vec<f64> {
    (0..=n).map(|j| binomial(n, j).sqrt()).collect()
}

pub fn to_unitary_frame(m: &CMat, n: usize) -> CMat {
    let w = frame_weights(n);
    CMat::from_fn(n + 1, n + 1, |i, j| m[(i, j)] * (w[j] / w[i]))
}

/// Maps a subspace given in unitary-frame coordinates back to weighted
/// coordinates.
pub fn subspace_from_frame(basis: &CMat, n: usize) -> Result<ProjSubspace> {
    let w = frame_weights(n);
    let scaled = CMat::from_fn(basis.nrows(), basis.ncols(), |i, j| basis[(i, j)] * w[i]);
    ProjSubspace::from_spanning(&scaled)
}

/// Maps a subspace from weighted coordinates into the unitary frame.
pub fn subspace_to_frame(s: &ProjSubspace, n: usize) -> Result<ProjSubspace> {
    let w = frame_weights(n);
    let b = s.basis();
    let scaled = CMat::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)] / w[i]);
    ProjSubspace::from_spanning(&scaled)
}

/// SVD of `irrep(a, n)` in the unitary frame, accurate for every singular
/// value and subspace however divergent `a` is.
///
/// The representation matrix is never formed. A pivoted QR step writes
/// `a = Q diag(r, 1/r) [[1, x], [0, 1]] J` with `Q`, `J` unitary and
/// `|x| <= 1`, taking `1/r` from the unit determinant rather than from the
/// cancelling lower-right entry; the frame images of `Q` and `J` are unitary, and the middle
/// factor is a graded diagonal times a bounded unipotent matrix, which a
/// relative-accuracy Jacobi sweep resolves completely.
pub fn frame_svd(a: &MoebiusElement, n: usize) -> Result<projlin::SvdTriple> {
    let m = a.mat();
    let zero = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let swap = m.column(1).norm() > m.column(0).norm();
    // h = m J^H has its larger column first
    let j = if swap {
        Mat2::new(zero, -one, one, zero)
    } else {
        Mat2::identity()
    };
    let h = m * j.adjoint();
    let r1 = h.column(0).norm();
    if !(r1 > 0.0) || !r1.is_finite() {
        return Err(Error::NumericalFailure("degenerate 2x2 matrix".into()));
    }
    let q1 = h.column(0) / c(r1, 0.0);
    let q = Mat2::new(q1[0], -q1[1].conj(), q1[1], q1[0].conj());
    let t = q.adjoint() * h;
    let (t11, t12) = (t[(0, 0)], t[(0, 1)]);
    let x = t12 / t11;
    // Beyond `cap` the singular vectors of D N are exact to O(cap^-2); the
    // grading is clamped so squared column norms stay representable, and
    // the singular values are rescaled afterwards.
    let cap = 10f64.powf((70.0 / n as f64).min(8.0));
    let excess = (r1 / cap).max(1.0);
    let t11 = t11 / excess;
    let t22 = t11.inv();

    let diag: Vec<Complex64> = (0..=n)
        .map(|i| t11.powu((n - i) as u32) * t22.powu(i as u32))
        .collect();
    let unip = to_unitary_frame(&irrep_matrix(&Mat2::new(one, x, zero, one), n), n);
    // (D N)^H = N^H D^H has graded columns
    let graded = CMat::from_fn(n + 1, n + 1, |i, k| unip[(k, i)].conj() * diag[k].conj());
    let s = projlin::svd_graded(&graded)?;
    let rq = to_unitary_frame(&irrep_matrix(&q, n), n);
    let rj = to_unitary_frame(&irrep_matrix(&j.adjoint(), n), n);
    let log_excess = excess.ln();
    let sigma = s
        .sigma
        .iter()
        .enumerate()
        .map(|(i, v)| v * ((n as f64 - 2.0 * i as f64) * log_excess).exp())
        .collect();
    Ok(projlin::SvdTriple {
        u: rq * s.v,
        sigma,
        v: rj * s.u,
    })
}

/// Singular values of `irrep(a, n)` measured in the unitary frame.
pub fn frame_singular_values(a: &MoebiusElement, n: usize) -> Result<Vec<f64>> {
    Ok(frame_svd(a, n)?.sigma)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::act;

    fn el(a: (f64, f64), b: (f64, f64), cc: (f64, f64), d: (f64, f64)) -> MoebiusElement {
        MoebiusElement::from_entries(c(a.0, a.1), c(b.0, b.1), c(cc.0, cc.1), c(d.0, d.1)).unwrap()
    }

    fn real_vec(xs: &[f64]) -> CVec {
        CVec::from_iterator(xs.len(), xs.iter().map(|&x| c(x, 0.0)))
    }

    #[test]
    fn embed_examples() {
        for n in 2..6 {
            assert_eq!(embed(&ProjPoint::basis(1, 0), n).unwrap(), ProjPoint::basis(n, 0));
        }
        let one = ProjPoint::from_slice(&[c(1., 0.), c(1., 0.)]).unwrap();
        let e2 = embed(&one, 2).unwrap();
        let want = real_vec(&[1., 2., 1.]) / c(6f64.sqrt(), 0.0);
        assert!((e2.coords() - want).norm() < 1e-15);
        let e3 = embed(&one, 3).unwrap();
        let want = real_vec(&[1., 3., 3., 1.]) / c(20f64.sqrt(), 0.0);
        assert!((e3.coords() - want).norm() < 1e-15);
        assert!(embed(&one, 1).is_err());
    }

    #[test]
    fn irrep_examples() {
        let l = 1.7;
        let m = irrep(&el((l, 0.), (0., 0.), (0., 0.), (1. / l, 0.)), 4).mat;
        for i in 0..5 {
            for j in 0..5 {
                let want = if i == j { l.powi(4 - 2 * i as i32) } else { 0.0 };
                assert!((m[(i, j)] - want).norm() < 1e-13);
            }
        }
        let m = irrep(&el((1., 0.), (1., 0.), (0., 0.), (1., 0.)), 2).mat;
        let want = CMat::from_row_slice(
            3,
            3,
            &[1., 1., 1., 0., 1., 2., 0., 0., 1.].map(|x| c(x, 0.0)),
        );
        assert_eq!(m, want);
        assert_eq!(irrep(&MoebiusElement::identity(), 5).mat, CMat::identity(6, 6));
    }

    #[test]
    fn equivariance_and_homomorphism() {
        let a = Mat2::new(c(1.2, 0.3), c(0.5, -1.0), c(0.1, 0.2), c(0.0, 0.0));
        let a = MoebiusElement::from_unnormalized(a).unwrap();
        let b = Mat2::new(c(0.7, 0.0), c(0.0, 0.4), c(0.0, 0.4), c(1.2, 0.0));
        let b = MoebiusElement::from_unnormalized(b).unwrap();
        let p = ProjPoint::from_slice(&[c(0.3, -0.2), c(1.0, 0.5)]).unwrap();
        for n in 2..=8 {
            let lhs = irrep(&a, n).apply(&embed(&p, n).unwrap()).unwrap();
            let rhs = embed(&act(&a, &p).unwrap(), n).unwrap();
            assert!(projlin::chordal_distance(&lhs, &rhs).unwrap() < 1e-13);
            let ab = irrep(&a.compose(&b), n).mat;
            let prod = irrep(&a, n).mat * irrep(&b, n).mat;
            assert!((ab - &prod).norm() < 1e-12 * prod.norm());
            assert!((irrep(&a, n).det() - 1.0).norm() < 1e-9);
        }
    }

    #[test]
    fn unitary_frame_is_unitary_on_su2() {
        let t = 0.9f64;
        let phi = 0.4f64;
        let e = c(phi.cos(), phi.sin());
        let u = MoebiusElement::new(Mat2::new(
            e * t.cos(),
            c(-t.sin(), 0.0),
            c(t.sin(), 0.0),
            e.conj() * t.cos(),
        ))
        .unwrap();
        for n in 2..=8 {
            let r = irrep(&u, n).unitary_frame();
            assert!((r.adjoint() * &r - CMat::identity(n + 1, n + 1)).norm() < 1e-12);
        }
    }

    #[test]
    fn frame_svd_reconstructs_and_resolves_small_values() {
        let a = Mat2::new(c(1.2, 0.3), c(0.5, -1.0), c(0.1, 0.2), c(0.7, 0.0));
        let a = MoebiusElement::from_unnormalized(a).unwrap();
        for n in 2..=6 {
            let s = frame_svd(&a, n).unwrap();
            let r = irrep(&a, n).unitary_frame();
            assert!((s.reconstruct() - &r).norm() < 1e-12 * r.norm());
        }
        // huge element: singular values s^{n-2i} with exact small ones
        let b = Mat2::new(c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0));
        let b = MoebiusElement::new(b).unwrap();
        let l = 1.0e4;
        let d = MoebiusElement::new(Mat2::new(c(l, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0 / l, 0.0)))
            .unwrap();
        let g = b.compose(&d).compose(&b.inverse());
        let s1 = crate::moebius::kak2(&g).unwrap().sigma1;
        let sig = frame_singular_values(&g, 4).unwrap();
        for (i, s) in sig.iter().enumerate() {
            let want = s1.powi(4 - 2 * i as i32);
            assert!((s / want - 1.0).abs() < 1e-10, "{i}: {s:e} vs {want:e}");
        }
    }
}
