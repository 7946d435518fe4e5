//! Small spatial hashes used for deduplication and neighbour queries.

use std::collections::HashMap;

use crate::projlin::CVec;

/// Maps a unit vector of `C^2` to the unit sphere in `R^3`. Chordal distance
/// on CP^1 is half the Euclidean distance of the images.
pub fn cp1_to_sphere(v: &CVec) -> [f64; 3] {
    let (x, y) = (v[0], v[1]);
    let xy = x * y.conj();
    [2.0 * xy.re, 2.0 * xy.im, x.norm_sqr() - y.norm_sqr()]
}

/// Uniform grid over `R^3` with cubic cells of side `cell`.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    cell: f64,
    cells: HashMap<[i64; 3], Vec<usize>>,
    points: Vec<[f64; 3]>,
}

impl SphereGrid {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite());
        SphereGrid {
            cell,
            cells: HashMap::new(),
            points: Vec::new(),
        }
    }

    fn key(&self, p: &[f64; 3]) -> [i64; 3] {
        p.map(|x| (x / self.cell).floor() as i64)
    }

    /// Inserts and returns the new point's id.
    pub fn insert(&mut self, p: [f64; 3]) -> usize {
        let id = self.points.len();
        self.cells.entry(self.key(&p)).or_default().push(id);
        self.points.push(p);
        id
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, id: usize) -> [f64; 3] {
        self.points[id]
    }

    /// Closest stored point within Euclidean `radius`, lowest id on ties.
    pub fn nearest_within(&self, p: &[f64; 3], radius: f64) -> Option<(usize, f64)> {
        let dist = |q: &[f64; 3]| {
            ((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)).sqrt()
        };
        let reach = (radius / self.cell).ceil() as i64;
        let mut best: Option<(usize, f64)> = None;
        let mut consider = |id: usize| {
            let d = dist(&self.points[id]);
            if d <= radius && best.is_none_or(|(bid, bd)| d < bd || (d == bd && id < bid)) {
                best = Some((id, d));
            }
        };
        if reach > 6 {
            (0..self.points.len()).for_each(&mut consider);
            return best;
        }
        let k = self.key(p);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    if let Some(ids) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        ids.iter().copied().for_each(&mut consider);
                    }
                }
            }
        }
        best
    }

    /// Ids of all stored points within Euclidean `radius`, ascending.
    pub fn all_within(&self, p: &[f64; 3], radius: f64) -> Vec<usize> {
        let reach = (radius / self.cell).ceil() as i64;
        let close = |q: &[f64; 3]| {
            (p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2) + (p[2] - q[2]).powi(2)
                <= radius * radius
        };
        let mut out = Vec::new();
        if reach > 6 {
            out.extend((0..self.points.len()).filter(|&id| close(&self.points[id])));
            return out;
        }
        let k = self.key(p);
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                for dz in -reach..=reach {
                    if let Some(ids) = self.cells.get(&[k[0] + dx, k[1] + dy, k[2] + dz]) {
                        out.extend(ids.iter().copied().filter(|&id| close(&self.points[id])));
                    }
                }
            }
        }
        out.sort_unstable();
        out
    }
}

/// Set of unit vectors in `C^k` keyed by their coordinates rounded to a grid
/// of side `cell`. Two vectors in the same cell count as equal; vectors
/// straddling a cell face may both be kept.
#[derive(Debug, Clone)]
pub struct QuantizedSet {
    cell: f64,
    seen: std::collections::HashSet<Vec<i64>>,
}

impl QuantizedSet {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0 && cell.is_finite());
        QuantizedSet {
            cell,
            seen: Default::default(),
        }
    }

    /// Returns `true` if `v` was not yet represented.
    pub fn insert(&mut self, v: &CVec) -> bool {
        let key = v
            .iter()
            .flat_map(|z| [z.re, z.im])
            .map(|x| (x / self.cell).round() as i64)
            .collect();
        self.seen.insert(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::projlin::{c, chordal_distance, normalize_projective};

    #[test]
    fn sphere_map_halves_chordal() {
        let p = normalize_projective(&CVec::from_vec(vec![c(1., 2.), c(-0.5, 0.3)])).unwrap();
        let q = normalize_projective(&CVec::from_vec(vec![c(0.2, 0.), c(1., -1.)])).unwrap();
        let (a, b) = (cp1_to_sphere(p.coords()), cp1_to_sphere(q.coords()));
        let e = ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt();
        assert!((e / 2.0 - chordal_distance(&p, &q).unwrap()).abs() < 1e-15);
        assert!((a[0].powi(2) + a[1].powi(2) + a[2].powi(2) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn grid_queries() {
        let mut g = SphereGrid::new(0.1);
        g.insert([0.0, 0.0, 1.0]);
        g.insert([0.05, 0.0, 1.0]);
        g.insert([0.0, 0.3, 1.0]);
        assert_eq!(g.nearest_within(&[0.04, 0.0, 1.0], 0.05).unwrap().0, 1);
        assert_eq!(g.all_within(&[0.0, 0.0, 1.0], 0.06), vec![0, 1]);
        assert!(g.nearest_within(&[1.0, 0.0, 0.0], 0.1).is_none());
        assert_eq!(g.all_within(&[0.0, 0.0, 1.0], 10.0), vec![0, 1, 2]);
    }

    #[test]
    fn quantized_dedup() {
        let mut s = QuantizedSet::new(1e-6);
        let v = CVec::from_vec(vec![c(0.6, 0.), c(0., 0.8)]);
        assert!(s.insert(&v));
        assert!(!s.insert(&(v.clone() * c(1.0 + 1e-12, 0.0))));
        assert!(s.insert(&CVec::from_vec(vec![c(0.8, 0.), c(0., 0.6)])));
    }
}
