//! Property suites run against a group at configurable scale. Each check
//! reports the worst measured error next to its tolerance.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::limits::{
    self, dominated_diagnostic, element_powers, limit_flags, HyperplaneUnion, LimitSetSample,
};
use crate::moebius::{
    act, classify, enumerate_words, kak2, ElementType, GroupSpec, MoebiusElement,
    DEFAULT_DEDUP_TOL,
};
use crate::projlin::{self, CVec, ProjPoint, ProjSubspace};
use crate::sample;
use crate::veronese::{embed, frame_singular_values, irrep, osculating_flag};

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `measured <= tolerance`.
    pub fn at_most(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            passed: measured <= tolerance,
        }
    }

    /// Passes when `measured > tolerance`.
    pub fn above(name: impl Into<String>, measured: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            measured,
            tolerance,
            passed: measured > tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Equivariance,
    SvLaw,
    Lambda,
    Containment,
    Domination,
    All,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Equivariance,
        Suite::SvLaw,
        Suite::Lambda,
        Suite::Containment,
        Suite::Domination,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::Equivariance => "equivariance",
            Suite::SvLaw => "svlaw",
            Suite::Lambda => "lambda",
            Suite::Containment => "containment",
            Suite::Domination => "domination",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "equivariance" => Ok(Suite::Equivariance),
            "svlaw" => Ok(Suite::SvLaw),
            "lambda" => Ok(Suite::Lambda),
            "containment" => Ok(Suite::Containment),
            "domination" => Ok(Suite::Domination),
            "all" => Ok(Suite::All),
            other => Err(Error::PreconditionViolated(format!("unknown suite '{other}'"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub n: usize,
    pub lmax: usize,
    /// Random trials per randomized check.
    pub samples: usize,
    pub seed: u64,
}

pub fn run_suite(suite: Suite, g: &GroupSpec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    match suite {
        Suite::Equivariance => equivariance(g, cfg),
        Suite::SvLaw => svlaw(g, cfg),
        Suite::Lambda => lambda(g, cfg),
        Suite::Containment => containment(g, cfg),
        Suite::Domination => domination(g, cfg),
        Suite::All => {
            let mut out = Vec::new();
            for s in Suite::ALL {
                out.extend(run_suite(s, g, cfg)?);
            }
            Ok(out)
        }
    }
}

fn rng(cfg: &VerifyConfig, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed ^ salt.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// Largest distance between `irrep(h) S(z)` and `S(h z)` over the entries
/// and generators, plus the largest distance from `h z` to the sample.
fn sample_equivariance(
    g: &GroupSpec,
    s: &LimitSetSample,
    union: &HyperplaneUnion,
    interior: usize,
) -> Result<(f64, f64, f64)> {
    let n = s.n;
    let mut hyper: f64 = 0.0;
    let mut ecg: f64 = 0.0;
    let mut member: f64 = 0.0;
    for e in s.entries.iter().filter(|e| e.letters.len() <= interior) {
        for l in 0..g.num_letters() {
            let h = g.letter(l);
            let rh = irrep(h, n).mat;
            let hz = act(h, &e.cp1_point)?;
            let moved = e.hyperplane.transform(&rh)?;
            hyper = hyper.max(projlin::subspace_distance(&moved, osculating_flag(&hz, n)?.hyperplane())?);
            if let (Some(sub), Some(q)) = (&e.ecg_subspace, s.ecg_index) {
                let w = limits::evaluate(g, &e.letters);
                let conj = w.conjugate_by(h);
                let want = limits::ecg_subspace(&conj, n, q)?;
                ecg = ecg.max(projlin::subspace_distance(&sub.transform(&rh)?, &want)?);
            }
            let d = match union.nearest_base(&hz, 1e-2) {
                Some(i) => projlin::chordal_distance(union.base_point(i), &hz)?,
                None => 1.0,
            };
            member = member.max(d);
        }
    }
    Ok((hyper, ecg, member))
}

fn equivariance(g: &GroupSpec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = cfg.n;
    let mut r = rng(cfg, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        let a = sample::sl2(&mut r);
        let p = sample::cp1_point(&mut r);
        let lhs = irrep(&a, n).apply(&embed(&p, n)?)?;
        let rhs = embed(&act(&a, &p)?, n)?;
        worst = worst.max(projlin::chordal_distance(&lhs, &rhs)?);
    }
    let mut out = vec![Check::at_most("curve equivariance", worst, 1e-9)];

    let s = limits::extended_cg_limit(g, n, cfg.lmax)?;
    let union = HyperplaneUnion::from_sample(&s)?;
    let (hyper, ecg, member) = sample_equivariance(g, &s, &union, cfg.lmax.saturating_sub(2))?;
    out.push(Check::at_most("hyperplane equivariance", hyper, 1e-6));
    out.push(Check::at_most("ecg equivariance", ecg, 1e-6));
    // a translate may land anywhere in the merge radius of its representative
    out.push(Check::at_most("limit set generator invariance", member, 2.0 * DEFAULT_DEDUP_TOL));
    Ok(out)
}

fn svlaw(g: &GroupSpec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = cfg.n;
    let law = |a: &MoebiusElement| -> Result<f64> {
        let s1 = kak2(a)?.sigma1;
        let sig = frame_singular_values(a, n)?;
        let want = s1.powi(-2);
        Ok(sig
            .windows(2)
            .map(|w| ((w[1] / w[0]) / want - 1.0).abs())
            .fold(0.0, f64::max))
    };
    let mut r = rng(cfg, 2);
    let mut worst: f64 = 0.0;
    for _ in 0..cfg.samples {
        worst = worst.max(law(&sample::loxodromic(&mut r))?);
    }
    let mut words: f64 = 0.0;
    for w in enumerate_words(g, cfg.lmax.min(8))? {
        words = words.max(law(&w.element)?);
    }
    Ok(vec![
        Check::at_most("singular ratio law (random)", worst, 1e-8),
        Check::at_most("singular ratio law (group words)", words, 1e-8),
    ])
}

/// First loxodromic word in shortlex order.
fn loxodromic_word(g: &GroupSpec, lmax: usize) -> Result<MoebiusElement> {
    enumerate_words(g, lmax)?
        .into_iter()
        .map(|w| w.element)
        .find(|e| classify(e) == ElementType::Loxodromic)
        .ok_or(Error::NoLoxodromicFound { lmax })
}

/// Largest distance to `F_j^+` after iterating random seeds from
/// `F_j^- \ F_{j+1}^-` up to `max_iter` times.
pub fn lambda_lemma_defect<R: rand::Rng>(
    w: &MoebiusElement,
    n: usize,
    seeds: usize,
    max_iter: usize,
    rng: &mut R,
) -> Result<f64> {
    let seq = element_powers(w, limits::loxodromic_power_count(w).max(20));
    let flags = limit_flags(&seq, n)?;
    let m = irrep(w, n).mat;
    let mut worst: f64 = 0.0;
    let full = ProjSubspace::coordinate(n, &(0..=n).collect::<Vec<_>>());
    for j in 1..=n {
        // F_1^- is the whole space
        let back = if j == 1 { &full } else { flags.backward_step(j) };
        let target = flags.forward_step(j);
        let basis = back.basis();
        for _ in 0..seeds {
            let x = loop {
                let coef = sample::cpn_point(rng, basis.ncols() - 1);
                let x = projlin::normalize_projective(&(basis * coef.coords()))?;
                if projlin::point_subspace_distance(&x, flags.backward_step(j + 1))? > 1e-3 {
                    break x;
                }
            };
            let mut y = x;
            let mut d = projlin::point_subspace_distance(&y, target)?;
            for _ in 0..max_iter {
                if d < 1e-5 {
                    break;
                }
                y = projlin::normalize_projective(&(&m * y.coords()))?;
                d = projlin::point_subspace_distance(&y, target)?;
            }
            worst = worst.max(d);
        }
    }
    Ok(worst)
}

fn lambda(g: &GroupSpec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let w = loxodromic_word(g, cfg.lmax)?;
    let mut r = rng(cfg, 3);
    let worst = lambda_lemma_defect(&w, cfg.n, cfg.samples.clamp(1, 50), 60, &mut r)?;
    let seq = element_powers(&w, 40);
    let route = limit_flags(&seq, cfg.n)?.route_distance;
    Ok(vec![
        Check::at_most("lambda-lemma accumulation", worst, 1e-5),
        Check::at_most("flag route agreement", route, 1e-6),
    ])
}

fn containment(g: &GroupSpec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let n = cfg.n;
    let s = limits::extended_cg_limit(g, n, cfg.lmax)?;
    let mut on_hyper: f64 = 0.0;
    let mut nested: f64 = 0.0;
    for e in &s.entries {
        on_hyper = on_hyper.max(projlin::point_subspace_distance(&e.curve_point, &e.hyperplane)?);
        if let Some(sub) = &e.ecg_subspace {
            nested = nested.max(sub.containment_gap(&e.hyperplane)?);
            on_hyper = on_hyper.max(projlin::point_subspace_distance(&e.curve_point, sub)?);
        }
    }
    let union = HyperplaneUnion::from_sample(&s)?;
    let mut r = rng(cfg, 4);
    let mut k: Vec<ProjPoint> = Vec::new();
    while k.len() < cfg.samples.clamp(1, 100) {
        let p = sample::cpn_point(&mut r, n);
        if union.distance_brute(p.coords()).0 > limits::COMPLEMENT_SEP {
            k.push(p);
        }
    }
    let opts = limits::AccumulationOptions {
        keep_points: false,
        ..Default::default()
    };
    let acc = limits::orbit_accumulation_with(g, &union, &k, cfg.lmax, &opts)?;
    Ok(vec![
        Check::at_most("curve points on their subspaces", on_hyper, 1e-8),
        Check::at_most("ecg inside hyperplanes", nested, 1e-8),
        Check::at_most("kernel cross-check", s.cross_check.max_distance, s.cross_check.tolerance),
        Check::at_most("accumulation near hyperplane union", acc.max_distance, 1e-4),
    ])
}

fn domination(g: &GroupSpec, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let fits = (1..=cfg.n)
        .map(|p| dominated_diagnostic(g, cfg.n, p, cfg.lmax))
        .collect::<Result<Vec<_>>>()?;
    let first = fits[0].slope;
    let spread = fits
        .iter()
        .map(|f| (f.slope / first - 1.0).abs())
        .fold(0.0, f64::max);
    Ok(vec![
        Check::above("domination rate (negated slope)", -first, 0.0),
        Check::at_most("slope spread across gaps", spread, 0.1),
    ])
}

/// Points of `CP^n` in the hyperplane at `z`, one per random coefficient
/// vector.
pub fn hyperplane_points<R: rand::Rng>(h: &ProjSubspace, count: usize, rng: &mut R) -> Vec<ProjPoint> {
    let b = h.basis();
    (0..count)
        .map(|_| {
            let coef = sample::cpn_point(rng, b.ncols() - 1);
            let v: CVec = b * coef.coords();
            projlin::normalize_projective(&v).expect("combination of orthonormal columns")
        })
        .collect()
}
