use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::index::{cp1_to_sphere, SphereGrid};
use crate::projlin::ProjPoint;

use super::{attracting_repelling, classify, enumerate_words, ElementType, GroupSpec};

pub const DEFAULT_DEDUP_TOL: f64 = 1e-6;

/// A limit point found as the attracting fixed point of a loxodromic word.
#[derive(Debug, Clone)]
pub struct Cp1LimitPoint {
    pub point: ProjPoint,
    /// Repelling fixed point of the same word.
    pub repelling: ProjPoint,
    pub word: String,
    pub letters: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Cp1LimitSet {
    pub points: Vec<Cp1LimitPoint>,
    pub dedup_tol: f64,
    pub lmax: usize,
    grid: SphereGrid,
}

impl Cp1LimitSet {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Closest limit point within chordal distance `radius`.
    pub fn nearest_within(&self, p: &ProjPoint, radius: f64) -> Option<(usize, f64)> {
        self.grid
            .nearest_within(&cp1_to_sphere(p.coords()), 2.0 * radius)
            .map(|(id, d)| (id, d / 2.0))
    }

    /// Indices of all limit points within chordal distance `radius`, ascending.
    pub fn indices_within(&self, p: &ProjPoint, radius: f64) -> Vec<usize> {
        self.grid.all_within(&cp1_to_sphere(p.coords()), 2.0 * radius)
    }
}

/// Attracting fixed points of all loxodromic reduced words of length at most
/// `lmax`, deduplicated at chordal distance `dedup_tol`. Points keep the
/// shortlex-first word that produced them.
pub fn limit_set_cp1(g: &GroupSpec, lmax: usize, dedup_tol: f64) -> Result<Cp1LimitSet> {
    if !(dedup_tol > 0.0) {
        return Err(Error::PreconditionViolated("dedup_tol must be positive".into()));
    }
    let words = enumerate_words(g, lmax)?;
    let candidates: Vec<Option<Cp1LimitPoint>> = words
        .par_iter()
        .map(|w| {
            if classify(&w.element) != ElementType::Loxodromic {
                return None;
            }
            let (point, repelling) = attracting_repelling(&w.element).ok()?;
            Some(Cp1LimitPoint {
                point,
                repelling,
                word: w.label().to_string(),
                letters: w.letters.clone(),
            })
        })
        .collect();

    let mut grid = SphereGrid::new(2.0 * dedup_tol);
    let mut points = Vec::new();
    for cand in candidates.into_iter().flatten() {
        let s = cp1_to_sphere(cand.point.coords());
        if grid.nearest_within(&s, 2.0 * dedup_tol).is_some() {
            continue;
        }
        grid.insert(s);
        points.push(cand);
    }
    if points.is_empty() {
        return Err(Error::NoLoxodromicFound { lmax });
    }
    Ok(Cp1LimitSet {
        points,
        dedup_tol,
        lmax,
        grid,
    })
}
