use crate::error::{Error, Result};
use crate::projlin::{self, CMat, ProjPoint};

use super::embed;

const DISTINCT_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRank {
    pub rank: usize,
    pub smallest_sigma: f64,
}

/// Numerical rank of the `(n+1) x m` matrix whose columns are the embedded
/// points. `smallest_sigma` is the `min(m, n+1)`-th singular value.
pub fn curve_rank_check(points: &[ProjPoint], n: usize) -> Result<CurveRank> {
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            let d = projlin::chordal_distance(&points[i], &points[j])?;
            if d <= DISTINCT_TOL {
                return Err(Error::DuplicatePoints { i, j, distance: d });
            }
        }
    }
    let m = points.len();
    if m == 0 {
        return Ok(CurveRank {
            rank: 0,
            smallest_sigma: 0.0,
        });
    }
    let dim = m.max(n + 1);
    let mut a = CMat::zeros(dim, dim);
    for (col, p) in points.iter().enumerate() {
        let e = embed(p, n)?;
        a.view_mut((0, col), (n + 1, 1)).copy_from(e.coords());
    }
    let sigma = projlin::singular_values(&a)?;
    let cutoff = sigma[0] * dim as f64 * 10.0 * f64::EPSILON;
    let rank = sigma.iter().filter(|&&s| s > cutoff).count();
    Ok(CurveRank {
        rank,
        smallest_sigma: sigma[m.min(n + 1) - 1],
    })
}
