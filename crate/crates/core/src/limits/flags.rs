use crate::error::{Error, Result};
use crate::moebius::{kak2, Mat2, MoebiusElement};
use crate::projlin::{self, CMat, Flag, ProjSubspace};
use crate::veronese::{frame_svd, irrep_matrix, subspace_from_frame};

const MIN_SIGMA1: f64 = 10.0;
const ROUTE_TOL: f64 = 1e-6;
const GAUGE_TOL: f64 = 1e-4;

/// The two full flags attached to a divergent sequence.
///
/// `forward` holds `F_1^+ ⊂ ... ⊂ F_n^+` (linear dimensions `1..=n`);
/// `backward` holds `F_{n+1}^- ⊂ ... ⊂ F_2^-`, again in increasing dimension,
/// so that `F_j^-` has linear dimension `n + 2 - j`.
#[derive(Debug, Clone)]
pub struct FlagPair {
    pub n: usize,
    pub forward: Flag,
    pub backward: Flag,
    /// Largest singular value of the last 2x2 term.
    pub sigma1: f64,
    /// Largest step distance between the two computation routes.
    pub route_distance: f64,
    /// Set when the unitary factors of the last two terms differ by more
    /// than a diagonal phase; the flags may then depend on the subsequence.
    pub gauge_warning: bool,
}

impl FlagPair {
    /// `F_j^+` for `j = 1..=n`.
    pub fn forward_step(&self, j: usize) -> &ProjSubspace {
        &self.forward.steps()[j - 1]
    }

    /// `F_j^-` for `j = 2..=n+1`.
    pub fn backward_step(&self, j: usize) -> &ProjSubspace {
        &self.backward.steps()[self.n + 1 - j]
    }
}

fn coordinate_span(m: &CMat, n: usize, range: std::ops::Range<usize>) -> Result<ProjSubspace> {
    let cols: Vec<usize> = range.collect();
    ProjSubspace::coordinate(n, &cols).transform(m)
}

/// Flags from the dominant left and right singular subspaces of the last
/// term, measured in the unitary frame and mapped back.
fn singular_route(last: &MoebiusElement, n: usize) -> Result<(Vec<ProjSubspace>, Vec<ProjSubspace>)> {
    let s = frame_svd(last, n)?;
    let dim = n + 1;
    let forward = (1..=n)
        .map(|j| subspace_from_frame(&s.u.columns(0, j).clone_owned(), n))
        .collect::<Result<Vec<_>>>()?;
    // F_j^- is orthogonal to the top j-1 right singular directions
    let backward = (2..=n + 1)
        .rev()
        .map(|j| subspace_from_frame(&s.v.columns(j - 1, dim - (j - 1)).clone_owned(), n))
        .collect::<Result<Vec<_>>>()?;
    Ok((forward, backward))
}

/// Flags from the rank-one KAK factors: `irrep(u)<e_1..e_j>` and
/// `irrep(v)^{-1}<e_j..e_{n+1}>`.
fn kak_route(
    last: &MoebiusElement,
    n: usize,
) -> Result<(Vec<ProjSubspace>, Vec<ProjSubspace>, Mat2)> {
    let k = kak2(last)?;
    let ru = irrep_matrix(&k.u, n);
    let rv_inv = irrep_matrix(&k.v.adjoint(), n);
    let forward = (1..=n)
        .map(|j| coordinate_span(&ru, n, 0..j))
        .collect::<Result<Vec<_>>>()?;
    let backward = (2..=n + 1)
        .rev()
        .map(|j| coordinate_span(&rv_inv, n, j - 1..n + 1))
        .collect::<Result<Vec<_>>>()?;
    Ok((forward, backward, k.u))
}

/// Limit flags of a divergent sequence of SL(2,C) elements, read off its last
/// term and cross-checked between the two routes.
pub fn limit_flags(seq: &[MoebiusElement], n: usize) -> Result<FlagPair> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    if seq.len() < 3 {
        return Err(Error::SequenceTooShort {
            len: seq.len(),
            min: 3,
        });
    }
    let last = &seq[seq.len() - 1];
    let prev = &seq[seq.len() - 2];
    let k_last = kak2(last)?;
    if k_last.sigma1 < MIN_SIGMA1 {
        return Err(Error::NotDivergent {
            sigma1: k_last.sigma1,
        });
    }
    let (f1, b1) = singular_route(last, n)?;
    let (f2, b2, u_last) = kak_route(last, n)?;

    let mut route_distance: f64 = 0.0;
    for (j, (a, b)) in f1.iter().zip(&f2).enumerate() {
        let d = projlin::subspace_distance(a, b)?;
        if d > ROUTE_TOL {
            return Err(Error::RouteDisagreement { step: j + 1, distance: d });
        }
        route_distance = route_distance.max(d);
    }
    for (i, (a, b)) in b1.iter().zip(&b2).enumerate() {
        let d = projlin::subspace_distance(a, b)?;
        if d > ROUTE_TOL {
            return Err(Error::RouteDisagreement {
                step: n + 1 - i,
                distance: d,
            });
        }
        route_distance = route_distance.max(d);
    }

    let u_prev = kak2(prev)?.u;
    let overlap = u_last.adjoint() * u_prev;
    let gauge_warning = overlap[(0, 1)].norm().max(overlap[(1, 0)].norm()) > GAUGE_TOL;

    Ok(FlagPair {
        n,
        forward: Flag::new(f1)?,
        backward: Flag::new(b1)?,
        sigma1: k_last.sigma1,
        route_distance,
        gauge_warning,
    })
}

/// `A^m` for `m = 1..=count` as unimodular elements.
pub fn element_powers(a: &MoebiusElement, count: usize) -> Vec<MoebiusElement> {
    let mut out = Vec::with_capacity(count);
    let mut acc = MoebiusElement::identity();
    for _ in 0..count {
        acc = acc.compose(a);
        out.push(acc.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::qp::{power_sequence, quasi_projective_limit, DEFAULT_CONV_TOL, DEFAULT_RANK_TOL};
    use crate::moebius::presets;
    use crate::projlin::subspace_distance;
    use crate::veronese::irrep;

    #[test]
    fn diagonal_flags() {
        let g = presets::cyclic_loxodromic(2.0, 2).unwrap();
        let seq = element_powers(g.generator(0), 6);
        let f = limit_flags(&seq, 2).unwrap();
        let e = |idx: &[usize]| ProjSubspace::coordinate(2, idx);
        assert!(subspace_distance(f.forward_step(1), &e(&[0])).unwrap() < 1e-15);
        assert!(subspace_distance(f.forward_step(2), &e(&[0, 1])).unwrap() < 1e-15);
        assert!(subspace_distance(f.backward_step(3), &e(&[2])).unwrap() < 1e-15);
        assert!(subspace_distance(f.backward_step(2), &e(&[1, 2])).unwrap() < 1e-15);
        assert!(!f.gauge_warning);
    }

    #[test]
    fn conjugated_forward_flags() {
        let b = presets::schottky_conjugator();
        let g = presets::cyclic_loxodromic(2.0, 3).unwrap();
        let h = g.generator(0).conjugate_by(&b);
        let seq = element_powers(&h, 30);
        let f = limit_flags(&seq, 3).unwrap();
        let rb = irrep(&b, 3).mat;
        for j in 1..=3 {
            let want = ProjSubspace::coordinate(3, &(0..j).collect::<Vec<_>>())
                .transform(&rb)
                .unwrap();
            assert!(subspace_distance(f.forward_step(j), &want).unwrap() < 1e-10);
        }
    }

    #[test]
    fn flags_match_quasi_projective_limit() {
        let b = presets::schottky_conjugator();
        let h = presets::cyclic_loxodromic(1.5, 4).unwrap().generator(0).conjugate_by(&b);
        let seq = element_powers(&h, 40);
        let f = limit_flags(&seq, 4).unwrap();
        let q = quasi_projective_limit(&power_sequence(&h, 4, 40), DEFAULT_RANK_TOL, DEFAULT_CONV_TOL)
            .unwrap();
        assert!(subspace_distance(f.forward_step(1), &q.image).unwrap() < 1e-10);
        assert!(subspace_distance(f.backward_step(2), q.kernel().unwrap()).unwrap() < 1e-10);
    }

    #[test]
    fn not_divergent() {
        let g = presets::rotation(0.4, 2).unwrap();
        let seq = element_powers(g.generator(0), 5);
        assert!(matches!(limit_flags(&seq, 2), Err(Error::NotDivergent { .. })));
    }
}
