use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::moebius::{limit_set_cp1, Cp1LimitSet, GroupSpec, MoebiusElement, DEFAULT_DEDUP_TOL};
use crate::projlin::{self, CVec, ProjPoint, ProjSubspace, DEFAULT_GAP_TOL};
use crate::veronese::{embed, frame_svd, osculating_flag, subspace_from_frame};

use super::qp::{loxodromic_limit, DEFAULT_RANK_TOL};

pub const CROSS_CHECK_TOL: f64 = 1e-5;
pub const DEFAULT_CROSS_CHECK_COUNT: usize = 16;

/// One sampled limit point with the limit data attached to it.
#[derive(Debug, Clone)]
pub struct LimitEntry {
    pub cp1_point: ProjPoint,
    pub curve_point: ProjPoint,
    /// Osculating hyperplane at `curve_point`.
    pub hyperplane: ProjSubspace,
    /// Unit covector of `hyperplane`.
    pub covector: CVec,
    pub ecg_subspace: Option<ProjSubspace>,
    /// Word whose attracting fixed point is `cp1_point`.
    pub word: String,
    pub letters: Vec<usize>,
}

/// Kernels of power limits compared with the osculating hyperplanes they
/// should equal.
#[derive(Debug, Clone, Copy)]
pub struct CrossCheck {
    pub checked: usize,
    pub max_distance: f64,
    pub tolerance: f64,
}

impl CrossCheck {
    pub fn passed(&self) -> bool {
        self.max_distance <= self.tolerance
    }
}

#[derive(Debug, Clone)]
pub struct LimitSetSample {
    pub n: usize,
    pub lmax: usize,
    pub entries: Vec<LimitEntry>,
    /// Dimension of the ECG subspaces, when populated.
    pub ecg_index: Option<usize>,
    pub cross_check: CrossCheck,
}

impl LimitSetSample {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn hyperplanes(&self) -> impl Iterator<Item = &ProjSubspace> {
        self.entries.iter().map(|e| &e.hyperplane)
    }
}

/// Linear dimension of the extended Conze-Guivarc'h subspaces in `CP^n`:
/// the number of eigenvalues of a loxodromic image with modulus at least one.
pub fn ecg_index(n: usize) -> usize {
    (n + 2) / 2
}

/// For even `n` the ECG subspace includes the eigendirection of modulus
/// exactly one, which is neither expanded nor contracted.
pub fn ecg_has_neutral_direction(n: usize) -> bool {
    n.is_multiple_of(2)
}

pub(crate) fn evaluate(g: &GroupSpec, letters: &[usize]) -> MoebiusElement {
    letters
        .iter()
        .fold(MoebiusElement::identity(), |acc, &l| acc.compose(g.letter(l)))
}

/// Power of `w` past which its dominant subspaces sit within about `1e-14`
/// of their limits.
fn ecg_power(w: &MoebiusElement) -> i64 {
    let s = crate::moebius::kak2(w).map(|k| k.sigma1).unwrap_or(1.0);
    let tr = w.trace();
    let disc = (tr * tr - 4.0).sqrt();
    let l = ((tr + disc) / 2.0).norm().max(((tr - disc) / 2.0).norm());
    let rate = l.ln().max(1e-3);
    // extra powers absorb the conjugator's distortion, measured by sigma_1(w)/|l|
    let slack = (s / l).max(1.0).ln();
    ((14.0 * 10f64.ln() / 2.0 + 2.0 * slack) / rate).ceil().max(1.0) as i64
}

/// Limit of the dominant `q`-dimensional subspaces of `irrep(w^m)`.
pub fn ecg_subspace(w: &MoebiusElement, n: usize, q: usize) -> Result<ProjSubspace> {
    let wm = w.power(ecg_power(w));
    let s = frame_svd(&wm, n)?;
    if q < n + 1 {
        let ratio = s.sigma[q] / s.sigma[q - 1];
        if ratio >= 1.0 - DEFAULT_GAP_TOL {
            return Err(Error::NoGap { p: q, ratio });
        }
    }
    subspace_from_frame(&s.u.columns(0, q).clone_owned(), n)
}

fn entry(ls: &Cp1LimitSet, idx: usize, n: usize) -> Result<LimitEntry> {
    let p = &ls.points[idx];
    let osc = osculating_flag(&p.point, n)?;
    Ok(LimitEntry {
        cp1_point: p.point.clone(),
        curve_point: embed(&p.point, n)?,
        hyperplane: osc.hyperplane().clone(),
        covector: osc.covector.clone(),
        ecg_subspace: None,
        word: p.word.clone(),
        letters: p.letters.clone(),
    })
}

/// Compares, on an evenly spaced subsample, the kernel of the limit of
/// `w^{-m}` with the hyperplane at the attracting point of `w`, and the
/// kernel of the limit of `w^m` with the hyperplane at its repelling point.
fn cross_check(ls: &Cp1LimitSet, g: &GroupSpec, n: usize, count: usize) -> Result<CrossCheck> {
    let stride = ls.len().div_ceil(count.max(1)).max(1);
    let picks: Vec<usize> = (0..ls.len()).step_by(stride).take(count).collect();
    let dists = picks
        .par_iter()
        .map(|&i| -> Result<f64> {
            let p = &ls.points[i];
            let w = evaluate(g, &p.letters);
            let fwd = loxodromic_limit(&w, n, DEFAULT_RANK_TOL)?;
            let bwd = loxodromic_limit(&w.inverse(), n, DEFAULT_RANK_TOL)?;
            let h_att = osculating_flag(&p.point, n)?;
            let h_rep = osculating_flag(&p.repelling, n)?;
            let d1 = projlin::subspace_distance(bwd.kernel()?, h_att.hyperplane())?;
            let d2 = projlin::subspace_distance(fwd.kernel()?, h_rep.hyperplane())?;
            Ok(d1.max(d2))
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(CrossCheck {
        checked: dists.len(),
        max_distance: dists.into_iter().fold(0.0, f64::max),
        tolerance: CROSS_CHECK_TOL,
    })
}

/// Myrberg limit data over an already computed CP^1 limit set.
pub fn myrberg_from(ls: &Cp1LimitSet, g: &GroupSpec, n: usize, checks: usize) -> Result<LimitSetSample> {
    let entries = (0..ls.len())
        .into_par_iter()
        .map(|i| entry(ls, i, n))
        .collect::<Result<Vec<_>>>()?;
    Ok(LimitSetSample {
        n,
        lmax: ls.lmax,
        entries,
        ecg_index: None,
        cross_check: cross_check(ls, g, n, checks)?,
    })
}

pub fn myrberg_limit(g: &GroupSpec, n: usize, lmax: usize) -> Result<LimitSetSample> {
    let ls = limit_set_cp1(g, lmax, DEFAULT_DEDUP_TOL)?;
    myrberg_from(&ls, g, n, DEFAULT_CROSS_CHECK_COUNT)
}

/// Fills in the ECG subspace of every entry from its word.
pub fn attach_ecg(sample: &mut LimitSetSample, g: &GroupSpec) -> Result<()> {
    let n = sample.n;
    let q = ecg_index(n);
    let subspaces = sample
        .entries
        .par_iter()
        .map(|e| ecg_subspace(&evaluate(g, &e.letters), n, q))
        .collect::<Result<Vec<_>>>()?;
    for (e, s) in sample.entries.iter_mut().zip(subspaces) {
        e.ecg_subspace = Some(s);
    }
    sample.ecg_index = Some(q);
    Ok(())
}

pub fn extended_cg_limit(g: &GroupSpec, n: usize, lmax: usize) -> Result<LimitSetSample> {
    let mut sample = myrberg_limit(g, n, lmax)?;
    attach_ecg(&mut sample, g)?;
    Ok(sample)
}
