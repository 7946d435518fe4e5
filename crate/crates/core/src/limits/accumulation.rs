use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{cp1_to_sphere, QuantizedSet, SphereGrid};
use crate::moebius::{
    attracting_repelling, classify, count_reduced_words, enumerate_words_capped, ElementType,
    GroupSpec, MoebiusElement, DEFAULT_WORD_CAP,
};
use crate::projlin::{self, c, CMat, CVec, ProjPoint, ProjSubspace};
use crate::veronese::{embed, irrep_matrix, osculating_flag};

use projlin::point_hyperplane_unit as pairing;

use super::myrberg::{myrberg_limit, LimitSetSample};

/// Minimum distance between a compact sample and the hyperplane union.
pub const COMPLEMENT_SEP: f64 = 1e-3;
/// Hint distances at or below this are reported without a full search.
pub const REFINE_BELOW: f64 = 1e-7;

const GRID_CELL: f64 = 2e-3;
const FIRST_RADIUS: f64 = 1e-3;
const BRUTE_RADIUS: f64 = 0.25;

/// The union of osculating hyperplanes over a sampled limit set, with a
/// spatial index on their base points.
#[derive(Debug, Clone)]
pub struct HyperplaneUnion {
    n: usize,
    covectors: Vec<CVec>,
    base: Vec<ProjPoint>,
    grid: SphereGrid,
}

/// `x0 b - y0 a` for unit `(x0, y0)` and `(a, b)`: the chordal distance up to
/// phase.
fn cross(z: &[Complex64; 2], r: &[Complex64; 2]) -> Complex64 {
    z[0] * r[1] - z[1] * r[0]
}

fn unit2(x: Complex64, y: Complex64) -> [Complex64; 2] {
    let s = (x.norm_sqr() + y.norm_sqr()).sqrt();
    [x / s, y / s]
}

/// `sum_j (-y0)^{n-j} x0^j y_j`: the covector pairing before normalization.
fn raw_pairing(y: &CVec, z: &[Complex64; 2]) -> Complex64 {
    let n = y.len() - 1;
    (0..=n)
        .map(|j| (-z[1]).powu((n - j) as u32) * z[0].powu(j as u32) * y[j])
        .sum()
}

/// Points `z` of CP^1 whose osculating hyperplane contains `y`, with
/// multiplicity, as unit vectors.
fn tangent_roots(y: &CVec) -> Vec<[Complex64; 2]> {
    let n = y.len() - 1;
    // in the chart z = [1 : t] the pairing is sum_k y_{n-k} (-t)^k
    let coef: Vec<Complex64> = (0..=n)
        .map(|k| y[n - k] * if k % 2 == 0 { 1.0 } else { -1.0 })
        .collect();
    let scale = coef.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut deg = n;
    while deg > 0 && coef[deg].norm() <= 1e-14 * scale {
        deg -= 1;
    }
    let mut roots: Vec<[Complex64; 2]> = Vec::with_capacity(n);
    if deg > 0 {
        let lead = coef[deg];
        let comp = CMat::from_fn(deg, deg, |i, j| {
            if i == 0 {
                -coef[deg - 1 - j] / lead
            } else if i == j + 1 {
                c(1.0, 0.0)
            } else {
                c(0.0, 0.0)
            }
        });
        let eig = comp
            .clone()
            .try_schur(f64::EPSILON, 10_000)
            .map(|s| s.unpack().1.diagonal().iter().copied().collect::<Vec<_>>())
            .unwrap_or_default();
        for t in eig {
            roots.push(unit2(c(1.0, 0.0), t));
        }
    }
    while roots.len() < n {
        roots.push([c(0.0, 0.0), c(1.0, 0.0)]);
    }
    roots
}

impl HyperplaneUnion {
    pub fn new(n: usize, base: Vec<ProjPoint>) -> Result<Self> {
        let mut grid = SphereGrid::new(GRID_CELL);
        let mut covectors = Vec::with_capacity(base.len());
        for z in &base {
            covectors.push(osculating_flag(z, n)?.covector);
            grid.insert(cp1_to_sphere(z.coords()));
        }
        Ok(HyperplaneUnion {
            n,
            covectors,
            base,
            grid,
        })
    }

    pub fn from_sample(s: &LimitSetSample) -> Result<Self> {
        Self::new(s.n, s.entries.iter().map(|e| e.cp1_point.clone()).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.covectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covectors.is_empty()
    }

    pub fn base_point(&self, i: usize) -> &ProjPoint {
        &self.base[i]
    }

    pub fn hyperplane(&self, i: usize) -> ProjSubspace {
        ProjSubspace::hyperplane_from_covector(&self.covectors[i])
            .expect("covector of a unit point is nonzero")
    }

    /// Distance from unit `y` to hyperplane `i`.
    pub fn distance_to(&self, y: &CVec, i: usize) -> f64 {
        pairing(&self.covectors[i], y)
    }

    /// Index of the base point nearest `z` within chordal `radius`.
    pub fn nearest_base(&self, z: &ProjPoint, radius: f64) -> Option<usize> {
        self.grid
            .nearest_within(&cp1_to_sphere(z.coords()), 2.0 * radius)
            .map(|(i, _)| i)
    }

    /// Exact distance by scanning every hyperplane.
    pub fn distance_brute(&self, y: &CVec) -> (f64, usize) {
        let mut best = (f64::INFINITY, 0);
        for (i, nu) in self.covectors.iter().enumerate() {
            let d = pairing(nu, y);
            if d < best.0 {
                best = (d, i);
            }
        }
        best
    }

    /// Distance from unit `y` to the union, with the index of a closest
    /// hyperplane.
    ///
    /// The pairing with the covector at `z` factors as `k prod_r (z x r)`
    /// over the points `r` whose hyperplanes contain `y`, so every hyperplane
    /// closer than `d` has its base point within `(d/|k|)^{1/n}` of some `r`.
    /// Candidates are taken from growing balls around the `r` until that
    /// bound is covered.
    pub fn distance(&self, y: &CVec) -> (f64, usize) {
        if self.is_empty() {
            return (f64::INFINITY, 0);
        }
        let n = self.n;
        let roots = tangent_roots(y);
        let probes = [
            [c(1.0, 0.0), c(0.0, 0.0)],
            [c(0.0, 0.0), c(1.0, 0.0)],
            unit2(c(1.0, 0.0), c(1.0, 0.0)),
            unit2(c(1.0, 0.0), c(0.0, 1.0)),
            unit2(c(1.0, 0.0), c(-1.0, 0.3)),
        ];
        let (k, _) = probes
            .iter()
            .map(|z| {
                let denom: Complex64 = roots.iter().map(|r| cross(z, r)).product();
                (raw_pairing(y, z) / denom, denom.norm())
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        let k = k.norm();
        if !(k > 0.0) || !k.is_finite() {
            return self.distance_brute(y);
        }
        // error of each computed root, from its residual
        let slack: Vec<f64> = roots
            .iter()
            .map(|r| (raw_pairing(y, r).norm() / k).powf(1.0 / n as f64))
            .collect();

        let mut best = (f64::INFINITY, 0usize);
        let consider = |ids: Vec<usize>, best: &mut (f64, usize)| {
            for i in ids {
                let d = pairing(&self.covectors[i], y);
                if d < best.0 || (d == best.0 && i < best.1) {
                    *best = (d, i);
                }
            }
        };
        let mut radius = FIRST_RADIUS;
        loop {
            for (r, s) in roots.iter().zip(&slack) {
                let rad = radius + s;
                if rad > BRUTE_RADIUS {
                    return self.distance_brute(y);
                }
                let p = cp1_to_sphere(&CVec::from_column_slice(r));
                consider(self.grid.all_within(&p, 2.0 * rad), &mut best);
            }
            let needed = (best.0 / k).powf(1.0 / n as f64);
            if best.0.is_finite() && needed <= radius {
                return best;
            }
            radius = if best.0.is_finite() {
                needed.max(radius * 1.01)
            } else {
                radius * 8.0
            };
        }
    }

    /// Distance with a candidate hyperplane tried first: returned as is when
    /// at most [`REFINE_BELOW`], an upper bound that never exceeds the true
    /// distance by more than that.
    pub fn distance_with_hint(&self, y: &CVec, hint: Option<usize>) -> (f64, usize) {
        if let Some(i) = hint {
            let d = pairing(&self.covectors[i], y);
            if d <= REFINE_BELOW {
                return (d, i);
            }
        }
        self.distance(y)
    }
}

#[derive(Debug, Clone)]
pub struct AccumulationOptions {
    /// Shortest word length used; defaults to `max(1, lmax - 2)`.
    pub min_len: Option<usize>,
    /// Reject compact samples within [`COMPLEMENT_SEP`] of the union.
    pub require_complement: bool,
    /// Keep the deduplicated image points, not just statistics.
    pub keep_points: bool,
    pub dedup_cell: f64,
    pub word_cap: u64,
}

impl Default for AccumulationOptions {
    fn default() -> Self {
        AccumulationOptions {
            min_len: None,
            require_complement: true,
            keep_points: true,
            dedup_cell: 1e-9,
            word_cap: DEFAULT_WORD_CAP,
        }
    }
}

#[derive(Debug, Clone)]
pub struct AccumulationPoint {
    pub point: ProjPoint,
    pub word: String,
    /// Index into the compact sample.
    pub source: usize,
    pub union_distance: f64,
}

#[derive(Debug, Clone)]
pub struct AccumulationReport {
    pub words: usize,
    pub images: u64,
    /// Deduplicated points, in word-then-sample order; empty unless kept.
    pub points: Vec<AccumulationPoint>,
    pub max_distance: f64,
    /// Word and sample index attaining `max_distance`.
    pub worst: Option<(String, usize)>,
    /// Smallest distance from the compact sample to the union.
    pub sample_distance: f64,
}

struct WordResult {
    points: Vec<(CVec, usize, f64)>,
    max: (f64, usize),
}

fn word_images(
    union: &HyperplaneUnion,
    w: &MoebiusElement,
    k: &[CVec],
    keep: bool,
    hint_radius: f64,
) -> Result<WordResult> {
    let n = union.n();
    let m = irrep_matrix(w.mat(), n);
    let hint = if classify(w) == ElementType::Loxodromic {
        attracting_repelling(w)
            .ok()
            .and_then(|(z, _)| union.nearest_base(&z, hint_radius))
    } else {
        None
    };
    let mut out = WordResult {
        points: Vec::new(),
        max: (0.0, 0),
    };
    for (idx, x) in k.iter().enumerate() {
        let img = projlin::normalize_projective(&(&m * x))?;
        let (d, _) = union.distance_with_hint(img.coords(), hint);
        if d > out.max.0 {
            out.max = (d, idx);
        }
        if keep {
            out.points.push((img.into_coords(), idx, d));
        }
    }
    Ok(out)
}

/// Images of a compact sample under all words of length in
/// `[min_len, lmax]`, annotated with their distance to the hyperplane union.
pub fn orbit_accumulation_with(
    g: &GroupSpec,
    union: &HyperplaneUnion,
    k: &[ProjPoint],
    lmax: usize,
    opts: &AccumulationOptions,
) -> Result<AccumulationReport> {
    if k.is_empty() {
        return Err(Error::PreconditionViolated("compact sample is empty".into()));
    }
    let n = union.n();
    for p in k {
        if p.coords().len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                found: p.coords().len(),
            });
        }
    }
    let sample_distance = k
        .par_iter()
        .map(|p| union.distance_brute(p.coords()).0)
        .reduce(|| f64::INFINITY, f64::min);
    if opts.require_complement && sample_distance <= COMPLEMENT_SEP {
        return Err(Error::PreconditionViolated(format!(
            "compact sample is within {sample_distance:e} of the hyperplane union"
        )));
    }
    let total = count_reduced_words(g.rank(), lmax);
    if total > opts.word_cap as u128 {
        return Err(Error::BudgetExceeded {
            count: total,
            cap: opts.word_cap,
        });
    }
    let min_len = opts.min_len.unwrap_or(lmax.saturating_sub(2)).max(1);
    let words: Vec<_> = enumerate_words_capped(g, lmax, opts.word_cap)?
        .into_iter()
        .filter(|w| w.len() >= min_len)
        .collect();
    let xs: Vec<CVec> = k.iter().map(|p| p.coords().clone()).collect();
    // words of the generated set sit within the dedup radius of some base point
    let hint_radius = 1e-5;

    let results: Vec<WordResult> = words
        .par_iter()
        .map(|w| word_images(union, &w.element, &xs, opts.keep_points, hint_radius))
        .collect::<Result<_>>()?;

    let mut report = AccumulationReport {
        words: words.len(),
        images: (words.len() * k.len()) as u64,
        points: Vec::new(),
        max_distance: 0.0,
        worst: None,
        sample_distance,
    };
    let mut seen = QuantizedSet::new(opts.dedup_cell);
    for (w, r) in words.iter().zip(results) {
        if r.max.0 > report.max_distance || report.worst.is_none() {
            report.max_distance = r.max.0;
            report.worst = Some((w.label().to_string(), r.max.1));
        }
        for (v, source, d) in r.points {
            if seen.insert(&v) {
                report.points.push(AccumulationPoint {
                    point: ProjPoint::from_slice(v.as_slice())?,
                    word: w.label().to_string(),
                    source,
                    union_distance: d,
                });
            }
        }
    }
    Ok(report)
}

/// Computes the Myrberg sample at `lmax` and accumulates `k` against it.
pub fn orbit_accumulation(
    g: &GroupSpec,
    n: usize,
    k: &[ProjPoint],
    lmax: usize,
) -> Result<AccumulationReport> {
    let sample = myrberg_limit(g, n, lmax)?;
    let union = HyperplaneUnion::from_sample(&sample)?;
    orbit_accumulation_with(g, &union, k, lmax, &AccumulationOptions::default())
}

/// A point of an osculating hyperplane realized as a limit of orbit images.
///
/// For `y` in the hyperplane at the attracting point of `w`, the preimages
/// `x_m = w^{-m} y` converge to the tangent line at the repelling point
/// without collapsing onto the curve point, and `w^m x_m = y`. The compact
/// set `{x_m}` therefore has `y` among its orbit accumulation points.
#[derive(Debug, Clone)]
pub struct HyperplaneWitness {
    pub preimage: ProjPoint,
    pub power: u32,
    /// Distance of the preimage from the tangent line at the repelling point.
    pub tangent_distance: f64,
    /// Chordal distance of the preimage from the repelling curve point.
    pub curve_distance: f64,
    /// Chordal distance between `w^m x_m` and `y`.
    pub reconstruction: f64,
}

/// Smallest power whose preimage lies within `target` of the tangent line;
/// `NotConverged` if none up to `max_power`.
pub fn hyperplane_witness(
    w: &MoebiusElement,
    n: usize,
    y: &ProjPoint,
    target: f64,
    max_power: u32,
) -> Result<HyperplaneWitness> {
    let (_, rep) = attracting_repelling(w)?;
    let tangent = osculating_flag(&rep, n)?.step(2).clone();
    let curve = embed(&rep, n)?;
    let step_back = irrep_matrix(w.inverse().mat(), n);
    let step_fwd = irrep_matrix(w.mat(), n);
    let mut pre = y.clone();
    let mut last = f64::INFINITY;
    for power in 1..=max_power {
        pre = projlin::normalize_projective(&(&step_back * pre.coords()))?;
        last = projlin::point_subspace_distance(&pre, &tangent)?;
        if last < target {
            let mut back = pre.clone();
            for _ in 0..power {
                back = projlin::normalize_projective(&(&step_fwd * back.coords()))?;
            }
            return Ok(HyperplaneWitness {
                tangent_distance: last,
                curve_distance: projlin::chordal_distance(&pre, &curve)?,
                reconstruction: projlin::chordal_distance(&back, y)?,
                preimage: pre,
                power,
            });
        }
    }
    Err(Error::NotConverged { residual: last })
}
