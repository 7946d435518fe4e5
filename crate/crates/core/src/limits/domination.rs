use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moebius::{enumerate_words_capped, GroupSpec, DEFAULT_WORD_CAP};
use crate::veronese::frame_svd;

/// Least-squares line through `(word length, ln(sigma_{p+1}/sigma_p))`.
#[derive(Debug, Clone, Copy)]
pub struct DominationFit {
    pub p: usize,
    /// Exponential rate; negative when the gap opens with word length.
    pub slope: f64,
    /// Log of the multiplicative constant.
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub rms: f64,
    pub samples: usize,
}

fn fit_line(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let m = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / m;
    let my = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let intercept = my - slope * mx;
    let rms = (xs
        .iter()
        .zip(ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / m)
        .sqrt();
    (slope, intercept, rms)
}

/// Fits the decay of the `p`-th singular gap of the image over all reduced
/// words of length `1..=lmax`, with singular values taken in the unitary
/// frame.
pub fn dominated_diagnostic(g: &GroupSpec, n: usize, p: usize, lmax: usize) -> Result<DominationFit> {
    if p == 0 || p > n {
        return Err(Error::PreconditionViolated(format!(
            "gap index {p} outside 1..={n}"
        )));
    }
    let words = enumerate_words_capped(g, lmax, DEFAULT_WORD_CAP)?;
    let points: Vec<(f64, f64)> = words
        .par_iter()
        .map(|w| -> Result<(f64, f64)> {
            let s = frame_svd(&w.element, n)?;
            Ok((w.len() as f64, (s.sigma[p] / s.sigma[p - 1]).ln()))
        })
        .collect::<Result<_>>()?;
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.into_iter().unzip();
    let (slope, intercept, rms) = fit_line(&xs, &ys);
    Ok(DominationFit {
        p,
        slope,
        intercept,
        rms,
        samples: xs.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::presets;

    #[test]
    fn cyclic_slope_is_minus_log_four() {
        let g = presets::cyclic_loxodromic(2.0, 3).unwrap();
        for p in 1..=3 {
            let f = dominated_diagnostic(&g, 3, p, 10).unwrap();
            assert!((f.slope + 4f64.ln()).abs() < 1e-12, "{f:?}");
            assert!(f.rms < 1e-12);
        }
    }

    #[test]
    fn rotation_has_no_domination() {
        let g = presets::rotation(0.3, 2).unwrap();
        let f = dominated_diagnostic(&g, 2, 1, 8).unwrap();
        assert!(f.slope.abs() < 1e-12);
    }

    #[test]
    fn schottky_slopes_agree_across_gaps() {
        let g = presets::schottky_pair(3).unwrap();
        let fits: Vec<_> = (1..=3).map(|p| dominated_diagnostic(&g, 3, p, 7).unwrap()).collect();
        assert!(fits[0].slope < 0.0);
        for f in &fits {
            assert!((f.slope / fits[0].slope - 1.0).abs() < 0.1);
        }
    }
}
