//! One function per subcommand; each returns a table and whether the run
//! counts as a success.

use anyhow::{bail, Result};
use num_complex::Complex64;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use veronese_core::limits::{
    self, attach_ecg, ecg_has_neutral_direction, ecg_index, myrberg_from, AccumulationOptions,
    HyperplaneUnion, LimitSetSample, DEFAULT_CROSS_CHECK_COUNT,
};
use veronese_core::moebius::{limit_set_cp1, parse_word};
use veronese_core::projlin::{self, ProjPoint};
use veronese_core::sample;
use veronese_core::verify::{run_suite, Suite, VerifyConfig};
use veronese_core::veronese::{classify_projective, embed, frame_svd, irrep};

use crate::config::RunConfig;
use crate::output::{float_value, Cell, Table};

/// Fresh RNG per command and purpose, so outputs do not depend on which
/// other commands ran.
fn rng(cfg: &RunConfig, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed);
    r.set_stream(stream);
    r
}

fn complex_columns(prefix: &str, count: usize) -> Vec<String> {
    (0..count)
        .flat_map(|j| [format!("{prefix}{j}_re"), format!("{prefix}{j}_im")])
        .collect()
}

fn complex_cells(v: impl IntoIterator<Item = Complex64>) -> Vec<Cell> {
    v.into_iter()
        .flat_map(|z| [Cell::Float(z.re), Cell::Float(z.im)])
        .collect()
}

fn point_cells(p: &ProjPoint) -> Vec<Cell> {
    complex_cells(p.coords().iter().copied())
}

pub fn embed_points(cfg: &RunConfig, points: &[ProjPoint]) -> Result<Table> {
    let n = cfg.n;
    let mut columns = vec!["i".to_string(), "x_re".into(), "x_im".into(), "y_re".into(), "y_im".into()];
    columns.extend(complex_columns("c", n + 1));
    let mut t = Table::new(columns);
    for (i, p) in points.iter().enumerate() {
        let e = embed(p, n)?;
        let mut row = vec![Cell::from(i)];
        row.extend(point_cells(p));
        row.extend(point_cells(&e));
        t.push(row);
    }
    Ok(t)
}

pub fn rep(cfg: &RunConfig, word: &str) -> Result<Table> {
    let g = cfg.group()?;
    let n = cfg.n;
    let w = parse_word(&g, word)?;
    let r = irrep(&w.element, n);
    let sigma = frame_svd(&w.element, n)?.sigma;
    let class = classify_projective(&r)?;

    let mut t = Table::new(["kind", "i", "j", "re", "im", "label"]);
    let label = if w.is_empty() { "id".to_string() } else { w.label().to_string() };
    t.push(vec!["word".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, label.into()]);
    for i in 0..=n {
        for j in 0..=n {
            let z = r.mat[(i, j)];
            t.push(vec!["entry".into(), i.into(), j.into(), z.re.into(), z.im.into(), Cell::Empty]);
        }
    }
    for (i, s) in sigma.iter().enumerate() {
        t.push(vec!["sigma".into(), i.into(), Cell::Empty, (*s).into(), Cell::Empty, Cell::Empty]);
    }
    for i in 0..n {
        let ratio = sigma[i + 1] / sigma[i];
        let state = if ratio < 1.0 - cfg.tolerances.gap_tol { "gap" } else { "none" };
        t.push(vec!["gap".into(), i.into(), (i + 1).into(), ratio.into(), Cell::Empty, state.into()]);
    }
    t.push(vec!["class".into(), Cell::Empty, Cell::Empty, Cell::Empty, Cell::Empty, class.as_str().into()]);
    t.note("frame", json!("singular values in the unitary frame"));
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Which {
    Myrberg,
    Ecg,
    Cp1,
}

fn cross_check_note(t: &mut Table, s: &LimitSetSample) {
    let c = &s.cross_check;
    t.note(
        "cross_check",
        json!({
            "checked": c.checked,
            "max_distance": float_value(c.max_distance),
            "tolerance": float_value(c.tolerance),
            "passed": c.passed(),
        }),
    );
}

pub fn limitset(cfg: &RunConfig, which: Which) -> Result<Table> {
    let g = cfg.group()?;
    let n = cfg.n;
    let ls = limit_set_cp1(&g, cfg.lmax, cfg.tolerances.dedup_tol)?;
    if which == Which::Cp1 {
        let mut columns: Vec<String> = vec!["i".into(), "word".into()];
        columns.extend(complex_columns("att", 2));
        columns.extend(complex_columns("rep", 2));
        let mut t = Table::new(columns);
        for (i, p) in ls.points.iter().enumerate() {
            let mut row = vec![Cell::from(i), p.word.clone().into()];
            row.extend(point_cells(&p.point));
            row.extend(point_cells(&p.repelling));
            t.push(row);
        }
        return Ok(t);
    }

    let mut s = myrberg_from(&ls, &g, n, DEFAULT_CROSS_CHECK_COUNT)?;
    let q = ecg_index(n);
    if which == Which::Ecg {
        attach_ecg(&mut s, &g)?;
    }
    let mut columns: Vec<String> = vec!["i".into(), "word".into()];
    columns.extend(complex_columns("z", 2));
    columns.extend(complex_columns("c", n + 1));
    columns.extend(complex_columns("nu", n + 1));
    if which == Which::Ecg {
        for k in 0..q {
            columns.extend(complex_columns(&format!("e{k}_"), n + 1));
        }
    }
    let mut t = Table::new(columns);
    for (i, e) in s.entries.iter().enumerate() {
        let mut row = vec![Cell::from(i), e.word.clone().into()];
        row.extend(point_cells(&e.cp1_point));
        row.extend(point_cells(&e.curve_point));
        row.extend(complex_cells(e.covector.iter().copied()));
        if let Some(sub) = &e.ecg_subspace {
            for k in 0..q {
                row.extend(complex_cells(sub.basis().column(k).iter().copied()));
            }
        }
        t.push(row);
    }
    cross_check_note(&mut t, &s);
    if which == Which::Ecg {
        t.note("ecg_dim", json!(q));
        t.note("ecg_neutral_direction", json!(ecg_has_neutral_direction(n)));
    }
    Ok(t)
}

pub fn verify(cfg: &RunConfig, suite: Suite) -> Result<(Table, bool)> {
    let g = cfg.group()?;
    let vc = VerifyConfig {
        n: cfg.n,
        lmax: cfg.lmax,
        samples: cfg.samples,
        seed: cfg.seed,
    };
    let checks = run_suite(suite, &g, &vc)?;
    let mut t = Table::new(["suite", "check", "measured", "tolerance", "passed"]);
    let mut ok = true;
    for c in &checks {
        ok &= c.passed;
        t.push(vec![
            suite.as_str().into(),
            c.name.clone().into(),
            c.measured.into(),
            c.tolerance.into(),
            c.passed.into(),
        ]);
    }
    t.note("passed", json!(ok));
    Ok((t, ok))
}

/// Random points of `CP^n` farther than `sep` from every subspace produced
/// by `distance`; gives up after a fixed number of draws.
fn complement_sample(
    count: usize,
    n: usize,
    rng: &mut ChaCha8Rng,
    mut accept: impl FnMut(&ProjPoint) -> Result<bool>,
) -> Result<Vec<ProjPoint>> {
    let budget = 1000 * count;
    let mut out = Vec::with_capacity(count);
    for _ in 0..budget {
        if out.len() == count {
            break;
        }
        let p = sample::cpn_point(rng, n);
        if accept(&p)? {
            out.push(p);
        }
    }
    if out.len() < count {
        bail!("found only {} of {count} sample points off the limit set", out.len());
    }
    Ok(out)
}

pub fn accumulate(cfg: &RunConfig, keep_points: bool) -> Result<Table> {
    let g = cfg.group()?;
    let n = cfg.n;
    let ls = limit_set_cp1(&g, cfg.lmax, cfg.tolerances.dedup_tol)?;
    let s = myrberg_from(&ls, &g, n, DEFAULT_CROSS_CHECK_COUNT)?;
    let union = HyperplaneUnion::from_sample(&s)?;
    let mut r = rng(cfg, 1);
    let k = complement_sample(cfg.samples, n, &mut r, |p| {
        Ok(union.distance_brute(p.coords()).0 > limits::COMPLEMENT_SEP)
    })?;
    let opts = AccumulationOptions {
        keep_points,
        ..Default::default()
    };
    let report = limits::orbit_accumulation_with(&g, &union, &k, cfg.lmax, &opts)?;

    let mut columns: Vec<String> = vec!["i".into(), "word".into(), "source".into(), "distance".into()];
    columns.extend(complex_columns("c", n + 1));
    let mut t = Table::new(columns);
    for (i, p) in report.points.iter().enumerate() {
        let mut row = vec![Cell::from(i), p.word.clone().into(), p.source.into(), p.union_distance.into()];
        row.extend(point_cells(&p.point));
        t.push(row);
    }
    t.note("words", json!(report.words));
    t.note("images", json!(report.images));
    t.note("max_distance", float_value(report.max_distance));
    t.note("sample_distance", float_value(report.sample_distance));
    t.note(
        "worst",
        report
            .worst
            .as_ref()
            .map_or(Value::Null, |(w, src)| json!({ "word": w, "source": src })),
    );
    cross_check_note(&mut t, &s);
    Ok(t)
}

pub fn proper(cfg: &RunConfig) -> Result<Table> {
    let g = cfg.group()?;
    let n = cfg.n;
    let sep = cfg.tolerances.sep;
    let ls = limit_set_cp1(&g, cfg.lmax, cfg.tolerances.dedup_tol)?;
    let mut ecg = myrberg_from(&ls, &g, n, DEFAULT_CROSS_CHECK_COUNT)?;
    attach_ecg(&mut ecg, &g)?;
    let bases: Vec<_> = ecg
        .entries
        .iter()
        .filter_map(|e| e.ecg_subspace.as_ref())
        .collect();
    let mut r = rng(cfg, 2);
    // twice the separation leaves margin for the precondition check
    let region = complement_sample(cfg.samples, n, &mut r, |p| {
        for b in &bases {
            if projlin::point_subspace_distance(p, b)? <= 2.0 * sep {
                return Ok(false);
            }
        }
        Ok(true)
    })?;
    let report = limits::proper_discontinuity_with(&g, &ecg, &region, cfg.lmax, sep)?;

    let mut t = Table::new(["word", "len", "distance"]);
    for w in &report.violating_words {
        t.push(vec![w.word.clone().into(), w.len.into(), w.distance.into()]);
    }
    let by_len: serde_json::Map<String, Value> = report
        .overlaps_by_len
        .iter()
        .map(|(l, c)| (l.to_string(), json!(c)))
        .collect();
    t.note("words_checked", json!(report.words_checked));
    t.note("max_overlap_depth", json!(report.max_overlap_depth));
    t.note("overlaps_by_len", Value::Object(by_len));
    t.note("sample_distance", float_value(report.sample_distance));
    Ok(t)
}
