use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::{Mat2, MoebiusElement};
use crate::projlin::{self, c, CMat, ProjSubspace};
use crate::veronese::irrep_matrix;

pub const DEFAULT_RANK_TOL: f64 = 1e-6;
pub const DEFAULT_CONV_TOL: f64 = 1e-8;
pub const DEFAULT_TYPE_TOL: f64 = 1e-6;

const MIN_LEN: usize = 3;

/// Limit of a sequence of matrices in projective space of matrices.
#[derive(Debug, Clone)]
pub struct QuasiProjLimit {
    /// Last normalized term: unit Frobenius norm, largest entry real positive.
    pub limit_mat: CMat,
    /// Right singular directions with `sigma < rank_tol * sigma_1`; `None`
    /// when the limit is invertible.
    pub kernel: Option<ProjSubspace>,
    pub image: ProjSubspace,
    pub rank: usize,
    pub sigma: Vec<f64>,
    pub converged: bool,
    /// Frobenius distance between the last two normalized terms.
    pub residual: f64,
}

impl QuasiProjLimit {
    pub fn is_quasi_projective(&self) -> bool {
        self.kernel.is_some()
    }

    pub fn require_converged(self) -> Result<Self> {
        if self.converged {
            Ok(self)
        } else {
            Err(Error::NotConverged {
                residual: self.residual,
            })
        }
    }

    pub fn require_quasi_projective(self) -> Result<Self> {
        if self.is_quasi_projective() {
            Ok(self)
        } else {
            Err(Error::NotQuasiProjective)
        }
    }

    pub fn kernel(&self) -> Result<&ProjSubspace> {
        self.kernel.as_ref().ok_or(Error::NotQuasiProjective)
    }
}

/// Unit Frobenius norm, with the entry of largest modulus (first in row-major
/// order among ties to `1e-12`) rotated to the positive real axis.
pub fn normalize_term(m: &CMat) -> Result<CMat> {
    let norm = m.norm();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::NumericalFailure(
            "sequence term is zero or non-finite".into(),
        ));
    }
    let scaled = m / c(norm, 0.0);
    let top = scaled.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut pivot = c(1.0, 0.0);
    'rows: for i in 0..scaled.nrows() {
        for j in 0..scaled.ncols() {
            let z = scaled[(i, j)];
            if z.norm() >= top * (1.0 - 1e-12) {
                pivot = z;
                break 'rows;
            }
        }
    }
    let phase = pivot.conj() / pivot.norm();
    Ok(scaled * phase)
}

pub fn quasi_projective_limit(seq: &[CMat], rank_tol: f64, conv_tol: f64) -> Result<QuasiProjLimit> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seq.len() < MIN_LEN {
        return Err(Error::SequenceTooShort {
            len: seq.len(),
            min: MIN_LEN,
        });
    }
    let last = normalize_term(&seq[seq.len() - 1])?;
    let prev = normalize_term(&seq[seq.len() - 2])?;
    if last.shape() != prev.shape() || last.nrows() != last.ncols() {
        return Err(Error::DimensionMismatch {
            expected: last.nrows(),
            found: prev.nrows(),
        });
    }
    let residual = (&last - &prev).norm();
    let svd = projlin::svd(&last)?;
    let dim = svd.dim();
    let rank = svd
        .sigma
        .iter()
        .filter(|&&s| s >= rank_tol * svd.sigma[0])
        .count()
        .max(1);
    let image = ProjSubspace::from_spanning(&svd.u.columns(0, rank).clone_owned())?;
    let kernel = if rank < dim {
        Some(ProjSubspace::from_spanning(
            &svd.v.columns(rank, dim - rank).clone_owned(),
        )?)
    } else {
        None
    };
    Ok(QuasiProjLimit {
        limit_mat: last,
        kernel,
        image,
        rank,
        sigma: svd.sigma,
        converged: residual < conv_tol,
        residual,
    })
}

/// `irrep(A^m)` for `m = 1..=count`, each from the normalized 2x2 power.
pub fn power_sequence(a: &MoebiusElement, n: usize, count: usize) -> Vec<CMat> {
    (1..=count as i64)
        .map(|m| irrep_matrix(&a.normalized_power(m), n))
        .collect()
}

/// `irrep(A^m)` for `m = 2^k`, `k = 0..count`; suits parabolic elements,
/// whose normalized powers converge only like `1/m`.
pub fn doubling_sequence(a: &MoebiusElement, n: usize, count: usize) -> Vec<CMat> {
    (0..count as u32)
        .map(|k| irrep_matrix(&a.normalized_power(1i64 << k), n))
        .collect()
}

/// Number of powers after which consecutive normalized powers of a
/// loxodromic element agree to about `1e-12`.
pub fn loxodromic_power_count(a: &MoebiusElement) -> usize {
    let tr = a.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let l = ((tr + disc) / 2.0).norm().max(((tr - disc) / 2.0).norm());
    if !(l > 1.0 + 1e-12) {
        return MIN_LEN;
    }
    let per_step = 2.0 * l.ln();
    ((12.0 * 10f64.ln() / per_step).ceil() as usize + 2).max(MIN_LEN)
}

/// Quasi-projective limit of the powers of a loxodromic element.
pub fn loxodromic_limit(a: &MoebiusElement, n: usize, rank_tol: f64) -> Result<QuasiProjLimit> {
    let seq = power_sequence(a, n, loxodromic_power_count(a));
    quasi_projective_limit(&seq, rank_tol, DEFAULT_CONV_TOL)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SequenceType {
    Loxodromic,
    Parabolic,
}

/// Distance used by [`sequence_type`]: how far the image sticks out of the
/// kernel (largest distance from a unit image vector to the kernel).
pub fn image_kernel_distance(q: &QuasiProjLimit) -> Result<f64> {
    q.image.containment_gap(q.kernel()?)
}

pub fn sequence_type(q: &QuasiProjLimit, type_tol: f64) -> Result<SequenceType> {
    if !q.converged {
        return Err(Error::NotConverged {
            residual: q.residual,
        });
    }
    let d = image_kernel_distance(q)?;
    if d > type_tol {
        Ok(SequenceType::Loxodromic)
    } else if d < type_tol / 10.0 {
        Ok(SequenceType::Parabolic)
    } else {
        Err(Error::Inconclusive { distance: d })
    }
}

/// `g1^m g2 g1^{-m}` for `m = 1..=count`, rescaled by `l^{-2m}` where
/// `g1 = diag(l, 1/l)`.
pub fn conjugation_sequence(l: Complex64, g2: &Mat2, n: usize, count: usize) -> Vec<CMat> {
    (1..=count as i32)
        .map(|m| {
            let lm = l.powi(m);
            let g1 = Mat2::new(lm, c(0.0, 0.0), c(0.0, 0.0), lm.inv());
            let g1_inv = Mat2::new(lm.inv(), c(0.0, 0.0), c(0.0, 0.0), lm);
            let t = g1 * g2 * g1_inv / (lm * lm);
            irrep_matrix(&t, n)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::presets;
    use crate::projlin::{point_subspace_distance, subspace_distance, ProjPoint};

    #[test]
    fn diagonal_powers() {
        let g = presets::cyclic_loxodromic(2.0, 2).unwrap();
        let seq = power_sequence(g.generator(0), 2, 40);
        let q = quasi_projective_limit(&seq, DEFAULT_RANK_TOL, DEFAULT_CONV_TOL).unwrap();
        assert!(q.converged);
        assert_eq!(q.rank, 1);
        let mut want = CMat::zeros(3, 3);
        want[(0, 0)] = c(1.0, 0.0);
        assert!((&q.limit_mat - want).norm() < 1e-15);
        assert!(subspace_distance(&q.image, &ProjSubspace::coordinate(2, &[0])).unwrap() < 1e-15);
        assert!(
            subspace_distance(q.kernel().unwrap(), &ProjSubspace::coordinate(2, &[1, 2])).unwrap()
                < 1e-15
        );
        assert_eq!(sequence_type(&q, DEFAULT_TYPE_TOL).unwrap(), SequenceType::Loxodromic);
        assert!((image_kernel_distance(&q).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn parabolic_powers() {
        let g = presets::cyclic_parabolic(2).unwrap();
        let seq = doubling_sequence(g.generator(0), 2, 41);
        let q = quasi_projective_limit(&seq, DEFAULT_RANK_TOL, DEFAULT_CONV_TOL).unwrap();
        assert!(q.converged);
        assert_eq!(q.rank, 1);
        assert!(subspace_distance(&q.image, &ProjSubspace::coordinate(2, &[0])).unwrap() < 1e-11);
        let e1 = ProjPoint::basis(2, 0);
        assert!(point_subspace_distance(&e1, q.kernel().unwrap()).unwrap() < 1e-11);
        assert_eq!(sequence_type(&q, DEFAULT_TYPE_TOL).unwrap(), SequenceType::Parabolic);
    }

    #[test]
    fn conjugated_mixed_sequence_is_parabolic() {
        // g1 loxodromic, g2 any element with nonzero upper-right entry
        let g2 = Mat2::new(c(1.0, 0.0), c(0.5, 0.2), c(-0.3, 0.0), c(0.9, 0.0));
        let seq = conjugation_sequence(c(2.0, 0.0), &g2, 3, 40);
        let q = quasi_projective_limit(&seq, DEFAULT_RANK_TOL, DEFAULT_CONV_TOL).unwrap();
        assert!(q.converged);
        let e1 = ProjPoint::basis(3, 0);
        assert!(point_subspace_distance(&e1, &q.image).unwrap() < 1e-12);
        assert!(point_subspace_distance(&e1, q.kernel().unwrap()).unwrap() < 1e-12);
        assert_eq!(sequence_type(&q, DEFAULT_TYPE_TOL).unwrap(), SequenceType::Parabolic);
    }

    #[test]
    fn constant_invertible_sequence() {
        let m = CMat::identity(3, 3) * c(2.0, 0.0);
        let q = quasi_projective_limit(&[m.clone(), m.clone(), m], DEFAULT_RANK_TOL, DEFAULT_CONV_TOL)
            .unwrap();
        assert!(q.converged);
        assert!(!q.is_quasi_projective());
        assert!(matches!(q.require_quasi_projective(), Err(Error::NotQuasiProjective)));
    }

    #[test]
    fn errors() {
        assert!(matches!(
            quasi_projective_limit(&[], DEFAULT_RANK_TOL, DEFAULT_CONV_TOL),
            Err(Error::EmptySequence)
        ));
        let m = CMat::identity(2, 2);
        assert!(matches!(
            quasi_projective_limit(&[m.clone(), m], DEFAULT_RANK_TOL, DEFAULT_CONV_TOL),
            Err(Error::SequenceTooShort { len: 2, min: 3 })
        ));
        // alternating sequence never settles
        let a = CMat::identity(2, 2);
        let mut b = CMat::zeros(2, 2);
        b[(0, 1)] = c(1.0, 0.0);
        b[(1, 0)] = c(1.0, 0.0);
        let q = quasi_projective_limit(&[a.clone(), b, a], DEFAULT_RANK_TOL, DEFAULT_CONV_TOL)
            .unwrap();
        assert!(!q.converged);
        assert!(matches!(q.require_converged(), Err(Error::NotConverged { .. })));
    }
}
