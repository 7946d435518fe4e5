use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::moebius::ElementType;
use crate::projlin::{self, c, CMat};

use super::RepMatrix;

#[derive(Debug, Clone, Copy)]
pub struct ClassifyTolerances {
    /// `||M - (tr M / N) I|| <= scalar * ||M||` counts as a scalar matrix.
    pub scalar: f64,
    /// Eigenvector-matrix condition number above which `M` is treated as
    /// non-diagonalizable.
    pub max_condition: f64,
    /// Relative spread of eigenvalue moduli accepted as "all equal" when `M`
    /// is diagonalizable.
    pub modulus_diag: f64,
    /// Same, for clustered eigenvalues of a non-diagonalizable matrix.
    pub modulus_jordan: f64,
}

impl Default for ClassifyTolerances {
    fn default() -> Self {
        ClassifyTolerances {
            scalar: 1e-9,
            max_condition: 1e8,
            modulus_diag: 1e-6,
            modulus_jordan: 1e-3,
        }
    }
}

/// Classification of a representation matrix, done in the unitary frame.
pub fn classify_projective(m: &RepMatrix) -> Result<ElementType> {
    classify_matrix(&m.unitary_frame(), &ClassifyTolerances::default())
}

/// Classifies an invertible matrix up to scalars by its eigenvalues: equal
/// moduli and diagonalizable is elliptic, equal moduli and not diagonalizable
/// is parabolic, anything else loxodromic.
pub fn classify_matrix(m: &CMat, tol: &ClassifyTolerances) -> Result<ElementType> {
    let n = m.nrows();
    if n == 0 || m.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: m.ncols(),
        });
    }
    let norm = m.norm();
    if !norm.is_finite() || norm == 0.0 {
        return Err(Error::NumericalFailure("matrix is zero or non-finite".into()));
    }
    let mean = m.trace() / c(n as f64, 0.0);
    if (m - CMat::identity(n, n) * mean).norm() <= tol.scalar * norm {
        return Ok(ElementType::Identity);
    }
    let schur = m
        .clone()
        .try_schur(f64::EPSILON, 10_000)
        .ok_or_else(|| Error::NumericalFailure("Schur iteration did not converge".into()))?;
    let (q, t) = schur.unpack();
    let eig: Vec<Complex64> = (0..n).map(|i| t[(i, i)]).collect();

    let x = triangular_eigenvectors(&t);
    let cond = condition_number(&(q * x))?;
    let diagonalizable = cond <= tol.max_condition;

    let moduli: Vec<f64> = if diagonalizable {
        eig.iter().map(|z| z.norm()).collect()
    } else {
        let inv_norm = match m.clone().try_inverse() {
            Some(inv) => inv.norm(),
            None => return Err(Error::SingularInput { ratio: 0.0 }),
        };
        let kappa = norm * inv_norm;
        let radius = 10.0 * (f64::EPSILON * kappa).powf(1.0 / n as f64);
        cluster_means(&eig, radius).iter().map(|z| z.norm()).collect()
    };
    let hi = moduli.iter().cloned().fold(0.0, f64::max);
    let lo = moduli.iter().cloned().fold(f64::INFINITY, f64::min);
    let spread = (hi - lo) / hi;
    let equal = spread <= if diagonalizable { tol.modulus_diag } else { tol.modulus_jordan };
    Ok(match (equal, diagonalizable) {
        (false, _) => ElementType::Loxodromic,
        (true, true) => ElementType::Elliptic,
        (true, false) => ElementType::Parabolic,
    })
}

/// Unit eigenvectors of an upper-triangular matrix by back substitution, with
/// near-zero pivots floored so that defective matrices yield nearly parallel
/// columns rather than infinities.
fn triangular_eigenvectors(t: &CMat) -> CMat {
    let n = t.nrows();
    let floor = f64::EPSILON * t.norm();
    let mut x = CMat::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut v = vec![c(0.0, 0.0); n];
        v[k] = c(1.0, 0.0);
        for i in (0..k).rev() {
            let mut s = c(0.0, 0.0);
            for l in i + 1..=k {
                s += t[(i, l)] * v[l];
            }
            let mut den = t[(i, i)] - lambda;
            if den.norm() < floor {
                den = if den.norm() == 0.0 {
                    c(floor, 0.0)
                } else {
                    den * (floor / den.norm())
                };
            }
            v[i] = -s / den;
            // rescale to avoid overflow in long defective chains
            let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            if big > 1e100 {
                v.iter_mut().for_each(|z| *z /= big);
            }
        }
        let nv: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for i in 0..n {
            x[(i, k)] = v[i] / nv;
        }
    }
    x
}

fn condition_number(v: &CMat) -> Result<f64> {
    let s = projlin::singular_values(v)?;
    let smin = *s.last().unwrap();
    Ok(if smin > 0.0 { s[0] / smin } else { f64::INFINITY })
}

/// Single-linkage clusters at distance `radius`, each replaced by its mean.
fn cluster_means(eig: &[Complex64], radius: f64) -> Vec<Complex64> {
    let n = eig.len();
    let mut label: Vec<usize> = (0..n).collect();
    fn root(label: &mut [usize], mut i: usize) -> usize {
        while label[i] != i {
            label[i] = label[label[i]];
            i = label[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() <= radius {
                let (a, b) = (root(&mut label, i), root(&mut label, j));
                label[a.max(b)] = a.min(b);
            }
        }
    }
    let mut sums: Vec<(Complex64, usize)> = vec![(c(0.0, 0.0), 0); n];
    for (i, &e) in eig.iter().enumerate() {
        let r = root(&mut label, i);
        sums[r].0 += e;
        sums[r].1 += 1;
    }
    sums.into_iter()
        .filter(|&(_, k)| k > 0)
        .map(|(s, k)| s / c(k as f64, 0.0))
        .collect()
}
