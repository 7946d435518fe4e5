use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moebius::{enumerate_words_capped, GroupSpec, DEFAULT_WORD_CAP};
use crate::projlin::{self, CMat, ProjPoint};
use crate::veronese::irrep_matrix;

use super::myrberg::{extended_cg_limit, LimitSetSample};

#[derive(Debug, Clone)]
pub struct OverlapWord {
    pub word: String,
    pub len: usize,
    /// Smallest chordal distance between an image and a sample point.
    pub distance: f64,
}

#[derive(Debug, Clone)]
pub struct ProperReport {
    pub violating_words: Vec<OverlapWord>,
    /// Longest word length with an overlap; `None` when there are none.
    pub max_overlap_depth: Option<usize>,
    /// Number of overlapping words by length.
    pub overlaps_by_len: BTreeMap<usize, usize>,
    pub words_checked: usize,
    /// Smallest distance from the sample to the ECG subspaces.
    pub sample_distance: f64,
}

impl ProperReport {
    pub fn overlaps_at_or_above(&self, len: usize) -> usize {
        self.overlaps_by_len.range(len..).map(|(_, c)| c).sum()
    }
}

fn columns(pts: &[ProjPoint]) -> CMat {
    let cols: Vec<_> = pts.iter().map(|p| p.coords().clone()).collect();
    CMat::from_columns(&cols)
}

/// Words of length `1..=lmax` that bring some sample point within chordal
/// `sep` of some sample point, for a sample at distance more than `sep` from
/// every ECG subspace of `ecg`.
pub fn proper_discontinuity_with(
    g: &GroupSpec,
    ecg: &LimitSetSample,
    region: &[ProjPoint],
    lmax: usize,
    sep: f64,
) -> Result<ProperReport> {
    if region.is_empty() {
        return Err(Error::PreconditionViolated("region sample is empty".into()));
    }
    let n = ecg.n;
    let subspaces: Vec<_> = ecg
        .entries
        .iter()
        .map(|e| {
            e.ecg_subspace
                .as_ref()
                .ok_or_else(|| Error::PreconditionViolated("sample lacks ECG subspaces".into()))
        })
        .collect::<Result<_>>()?;
    let sample_distance = region
        .par_iter()
        .map(|p| -> Result<f64> {
            let mut best = f64::INFINITY;
            for s in &subspaces {
                best = best.min(projlin::point_subspace_distance(p, s)?);
            }
            Ok(best)
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    if sample_distance <= sep {
        return Err(Error::PreconditionViolated(format!(
            "region sample is within {sample_distance:e} of the ECG subspaces (sep {sep})"
        )));
    }

    let s = columns(region);
    let sh = s.adjoint();
    // chordal distance below sep iff |<y, x>| exceeds this for unit y, x
    let overlap_cos = (1.0 - sep * sep).sqrt();
    let words = enumerate_words_capped(g, lmax, DEFAULT_WORD_CAP)?;
    let hits: Vec<Option<f64>> = words
        .par_iter()
        .map(|w| {
            let ms = irrep_matrix(w.element.mat(), n) * &s;
            let gram = &sh * &ms;
            let mut best: f64 = 0.0;
            for j in 0..ms.ncols() {
                let norm = ms.column(j).norm();
                for i in 0..gram.nrows() {
                    best = best.max(gram[(i, j)].norm() / norm);
                }
            }
            (best > overlap_cos).then(|| (1.0 - best.min(1.0).powi(2)).max(0.0).sqrt())
        })
        .collect();

    let mut report = ProperReport {
        violating_words: Vec::new(),
        max_overlap_depth: None,
        overlaps_by_len: BTreeMap::new(),
        words_checked: words.len(),
        sample_distance,
    };
    for (w, hit) in words.iter().zip(hits) {
        if let Some(distance) = hit {
            *report.overlaps_by_len.entry(w.len()).or_default() += 1;
            report.max_overlap_depth = Some(report.max_overlap_depth.unwrap_or(0).max(w.len()));
            report.violating_words.push(OverlapWord {
                word: w.label().to_string(),
                len: w.len(),
                distance,
            });
        }
    }
    Ok(report)
}

pub fn proper_discontinuity_check(
    g: &GroupSpec,
    n: usize,
    region: &[ProjPoint],
    lmax: usize,
    sep: f64,
) -> Result<ProperReport> {
    let ecg = extended_cg_limit(g, n, lmax)?;
    proper_discontinuity_with(g, &ecg, region, lmax, sep)
}
