//! Exact evaluation over the Gaussian rationals `Q(i)`.
//!
//! The closed form for the representation entries is written once, generic
//! over [`Scalar`], and evaluated both in floating point and exactly. The
//! oracle is an independent route: it expands `C(n,m)(ax+by)^{n-m}(cx+dy)^m`
//! by polynomial multiplication and reads off coefficients in the weighted
//! basis.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{Num, One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type GaussRat = Complex<BigRational>;

pub trait Scalar: Clone + Num {
    fn from_u64(k: u64) -> Self;
}

impl Scalar for Complex64 {
    fn from_u64(k: u64) -> Self {
        Complex64::new(k as f64, 0.0)
    }
}

impl Scalar for GaussRat {
    fn from_u64(k: u64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(k)), BigRational::zero())
    }
}

fn binom_u64(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

fn powers<T: Scalar>(x: &T, n: usize) -> Vec<T> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(T::one());
    for k in 1..=n {
        out.push(out[k - 1].clone() * x.clone());
    }
    out
}

/// Row-major entries of the degree-`n` representation of `[[a,b],[c,d]]` in
/// weighted coordinates:
///
/// `M[m][j] = C(n,m)/C(n,j) * sum_k C(n-m,k) C(m,j-k) a^{n-m-k} b^k c^{m-j+k} d^{j-k}`
///
/// for `max(0, j-m) <= k <= min(j, n-m)`, all indices 0-based.
pub fn irrep_closed_form<T: Scalar>(a: T, b: T, c: T, d: T, n: usize) -> Vec<Vec<T>> {
    let (pa, pb, pc, pd) = (powers(&a, n), powers(&b, n), powers(&c, n), powers(&d, n));
    let mut rows = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = Vec::with_capacity(n + 1);
        for j in 0..=n {
            let mut sum = T::zero();
            let lo = j.saturating_sub(m);
            let hi = j.min(n - m);
            for k in lo..=hi {
                let coeff = T::from_u64(binom_u64(n - m, k) * binom_u64(m, j - k));
                sum = sum
                    + coeff
                        * pa[n - m - k].clone()
                        * pb[k].clone()
                        * pc[m + k - j].clone()
                        * pd[j - k].clone();
            }
            row.push(sum * T::from_u64(binom_u64(n, m)) / T::from_u64(binom_u64(n, j)));
        }
        rows.push(row);
    }
    rows
}

fn poly_mul(p: &[GaussRat], q: &[GaussRat]) -> Vec<GaussRat> {
    let mut out = vec![GaussRat::zero(); p.len() + q.len() - 1];
    for (i, x) in p.iter().enumerate() {
        for (j, y) in q.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

fn poly_pow(p: &[GaussRat], e: usize) -> Vec<GaussRat> {
    (0..e).fold(vec![GaussRat::one()], |acc, _| poly_mul(&acc, p))
}

/// Exact representation matrix of `[[a,b],[c,d]]` with `ad - bc = 1`.
pub fn irrep_oracle(m: &[[GaussRat; 2]; 2], n: usize) -> Result<Vec<Vec<GaussRat>>> {
    let [[a, b], [c, d]] = m;
    let det = a.clone() * d.clone() - b.clone() * c.clone();
    if !det.is_one() {
        return Err(Error::PreconditionViolated(
            "determinant is not exactly 1".into(),
        ));
    }
    // polynomials in y with the power of x implicit: ax + by -> [a, b]
    let first = [a.clone(), b.clone()];
    let second = [c.clone(), d.clone()];
    let mut rows = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let prod = poly_mul(&poly_pow(&first, n - i), &poly_pow(&second, i));
        let scale = GaussRat::from_u64(binom_u64(n, i));
        let row = prod
            .into_iter()
            .enumerate()
            .map(|(j, coef)| coef * scale.clone() / GaussRat::from_u64(binom_u64(n, j)))
            .collect();
        rows.push(row);
    }
    Ok(rows)
}

/// Exact Gaussian rational with the same value as a finite double.
pub fn gauss_from_f64(z: Complex64) -> Result<GaussRat> {
    let conv = |x: f64| {
        BigRational::from_float(x)
            .ok_or_else(|| Error::NonRationalInput(format!("non-finite component {x}")))
    };
    Ok(Complex::new(conv(z.re)?, conv(z.im)?))
}

pub fn gauss_to_f64(z: &GaussRat) -> Complex64 {
    Complex64::new(
        z.re.to_f64().unwrap_or(f64::NAN),
        z.im.to_f64().unwrap_or(f64::NAN),
    )
}

pub fn gauss(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> GaussRat {
    Complex::new(
        BigRational::new(re_num.into(), re_den.into()),
        BigRational::new(im_num.into(), im_den.into()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(k: i64) -> GaussRat {
        gauss(k, 1, 0, 1)
    }

    #[test]
    fn unipotent_n2() {
        let m = [[int(1), int(1)], [int(0), int(1)]];
        let got = irrep_oracle(&m, 2).unwrap();
        let want = [[1, 1, 1], [0, 1, 2], [0, 0, 1]];
        for i in 0..3 {
            for j in 0..3 {
                assert_eq!(got[i][j], int(want[i][j]));
            }
        }
    }

    #[test]
    fn diagonal_rational_lift() {
        let m = [[int(2), int(0)], [int(0), gauss(1, 2, 0, 1)]];
        let got = irrep_oracle(&m, 2).unwrap();
        let want = [gauss(4, 1, 0, 1), int(1), gauss(1, 4, 0, 1)];
        for (i, row) in got.iter().enumerate() {
            for (j, entry) in row.iter().enumerate() {
                let w = if i == j { want[i].clone() } else { int(0) };
                assert_eq!(*entry, w);
            }
        }
    }

    #[test]
    fn closed_form_matches_oracle_exactly() {
        // [[1+i, 2], [1/3, (1 + 2/3)/(1+i)]] has determinant 1
        let a = gauss(1, 1, 1, 1);
        let b = int(2);
        let c = gauss(1, 3, 0, 1);
        let d = (GaussRat::one() + b.clone() * c.clone()) / a.clone();
        let m = [[a.clone(), b.clone()], [c.clone(), d.clone()]];
        for n in 1..=6 {
            let oracle = irrep_oracle(&m, n).unwrap();
            let closed = irrep_closed_form(a.clone(), b.clone(), c.clone(), d.clone(), n);
            assert_eq!(oracle, closed);
        }
    }

    #[test]
    fn rejects_non_unimodular() {
        let m = [[int(2), int(0)], [int(0), int(1)]];
        assert!(irrep_oracle(&m, 2).is_err());
        assert!(matches!(
            gauss_from_f64(Complex64::new(f64::NAN, 0.0)),
            Err(Error::NonRationalInput(_))
        ));
    }
}
