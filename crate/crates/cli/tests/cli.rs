use std::path::Path;
use std::process::{Command, Output};

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde_json::Value;
use veronese_core::moebius::{limit_set_cp1, presets};

fn veronese(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veronese"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_kind(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("structured error on stderr");
    v["error"]["kind"].as_str().unwrap().to_string()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn embed_weighted_point() {
    let o = veronese(&["embed", "--n", "2", "--points", "[1:1]"]);
    assert!(o.status.success());
    let rows = csv_rows(&stdout(&o));
    let c: Vec<f64> = rows[0][5..].iter().map(|s| s.parse().unwrap()).collect();
    let s6 = 6f64.sqrt();
    let want = [1.0 / s6, 0.0, 2.0 / s6, 0.0, 1.0 / s6, 0.0];
    for (a, b) in c.iter().zip(want) {
        assert!((a - b).abs() < 1e-15);
    }

    let o = veronese(&["embed", "--n", "3", "--points", "[1:0]"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0][5], "1.0000000000000000e0");
}

#[test]
fn malformed_point_is_a_parse_error() {
    let o = veronese(&["embed", "--points", "[1:"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "parse");
    assert!(String::from_utf8_lossy(&o.stderr).contains("column 4"));
}

#[test]
fn rep_of_cyclic_generator() {
    let o = veronese(&["rep", "--n", "2", "--word", "g"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().next().unwrap(), "kind,i,j,re,im,label");
    let rows = csv_rows(&text);
    let sigma: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "sigma")
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(sigma, [4.0, 1.0, 0.25]);
    let diag: Vec<f64> = rows
        .iter()
        .filter(|r| r[0] == "entry" && r[1] == r[2])
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(diag, [4.0, 1.0, 0.25]);
    assert!(rows.iter().any(|r| r[0] == "class" && r[5] == "loxodromic"));
}

#[test]
fn rep_of_cancelling_word_is_identity() {
    let o = veronese(&["rep", "--n", "3", "--word", "g g^-1"]);
    let rows = csv_rows(&stdout(&o));
    for r in rows.iter().filter(|r| r[0] == "entry") {
        let want = if r[1] == r[2] { 1.0 } else { 0.0 };
        assert_eq!(r[3].parse::<f64>().unwrap(), want);
    }
    assert!(rows.iter().any(|r| r[0] == "class" && r[5] == "identity"));
}

#[test]
fn unknown_generator_fails() {
    let o = veronese(&["rep", "--word", "h"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "unknown_generator");
}

/// The printed matrix, re-read and moved to the unitary frame, has the
/// printed singular values.
#[test]
fn rep_round_trips() {
    let n = 4;
    let o = veronese(&["rep", "--preset", "schottky_pair", "--n", "4", "--word", "a b^-1 a", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let recs = v["records"].as_array().unwrap();
    let num = |x: &Value| x.to_string().parse::<f64>().unwrap();
    let mut m = DMatrix::<Complex64>::zeros(n + 1, n + 1);
    let mut sigma = Vec::new();
    for r in recs {
        match r["kind"].as_str().unwrap() {
            "entry" => {
                let (i, j) = (r["i"].as_u64().unwrap() as usize, r["j"].as_u64().unwrap() as usize);
                m[(i, j)] = Complex64::new(num(&r["re"]), num(&r["im"]));
            }
            "sigma" => sigma.push(num(&r["re"])),
            _ => {}
        }
    }
    let w: Vec<f64> = (0..=n)
        .map(|j| ((1..=j).map(|k| (n + 1 - k) as f64 / k as f64).product::<f64>()).sqrt())
        .collect();
    let frame = DMatrix::from_fn(n + 1, n + 1, |i, j| m[(i, j)] * (w[j] / w[i]));
    let mut sv: Vec<f64> = frame.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    // entries carry rounding of size eps * sigma_1, so agreement is normwise
    for (a, b) in sv.iter().zip(&sigma) {
        assert!((a - b).abs() < 1e-12 * sigma[0], "{sv:?} vs {sigma:?}");
    }
}

#[test]
fn cyclic_myrberg_has_two_records() {
    let o = veronese(&["limitset", "--n", "2", "--which", "myrberg"]);
    assert!(o.status.success());
    assert_eq!(csv_rows(&stdout(&o)).len(), 2);
}

#[test]
fn schottky_cp1_count_and_rerun() {
    let args = ["limitset", "--preset", "schottky_pair", "--which", "cp1", "--lmax", "8", "--seed", "3"];
    let first = veronese(&args);
    let second = veronese(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    let expected = limit_set_cp1(&presets::schottky_pair(2).unwrap(), 8, 1e-6).unwrap().len();
    assert_eq!(csv_rows(&stdout(&first)).len(), expected);
}

#[test]
fn ecg_without_loxodromics_fails() {
    let o = veronese(&["limitset", "--preset", "rotation", "--which", "ecg"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "no_loxodromic_found");
}

fn verify_passes(args: &[&str]) -> Vec<Vec<String>> {
    let mut all = vec!["verify"];
    all.extend_from_slice(args);
    let o = veronese(&all);
    let text = stdout(&o);
    assert!(o.status.success(), "{text}");
    csv_rows(&text)
}

#[test]
fn verify_equivariance_at_scale() {
    let rows = verify_passes(&["--suite", "equivariance", "--n", "4", "--samples", "1000"]);
    let curve = rows.iter().find(|r| r[1] == "curve equivariance").unwrap();
    assert!(curve[2].parse::<f64>().unwrap() < 1e-9);
}

#[test]
fn verify_svlaw_and_containment() {
    let rows = verify_passes(&["--suite", "svlaw"]);
    assert!(rows.iter().all(|r| r[2].parse::<f64>().unwrap() < 1e-8));
    let rows = verify_passes(&["--suite", "containment", "--preset", "schottky_pair", "--n", "3", "--samples", "20"]);
    let acc = rows.iter().find(|r| r[1] == "accumulation near hyperplane union").unwrap();
    assert!(acc[2].parse::<f64>().unwrap() < 1e-4);
}

#[test]
fn failed_check_sets_exit_status() {
    // parabolic accumulation converges too slowly for the containment tolerance
    let o = veronese(&["verify", "--suite", "containment", "--preset", "fuchsian_sample", "--n", "3", "--samples", "50"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains(",false"));
}

#[test]
fn config_file_and_output_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(
        &cfg,
        r#"
n = 3
lmax = 5
seed = 11

[group]
asserted_class = "schottky"

[[group.generators]]
name = "a"
matrix = [["3", "0"], ["0", "0.3333333333333333"]]

[[group.generators]]
name = "b"
matrix = [["5.666666666666667", "-2.6666666666666665 + 0i"], ["5.333333333333333", "-2.3333333333333335"]]

[output]
format = "json"
"#,
    )
    .unwrap();
    let out = dir.path().join("ls.json");
    let o = veronese(&["--config", cfg.to_str().unwrap(), "limitset", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["meta"]["n"], 3);
    assert_eq!(v["meta"]["group"]["asserted_class"], "schottky");
    assert!(v["meta"]["cross_check"]["passed"].as_bool().unwrap());
    assert!(!v["records"].as_array().unwrap().is_empty());
    assert!(!Path::new(&out).to_string_lossy().is_empty());
}

#[test]
fn accumulate_and_proper_summaries() {
    let o = veronese(&["accumulate", "--summary", "--preset", "schottky_pair", "--lmax", "6", "--samples", "10", "--format", "json"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["meta"]["max_distance"].to_string().parse::<f64>().unwrap() < 1e-4);
    assert_eq!(v["records"].as_array().unwrap().len(), 0);

    let o = veronese(&["proper", "--lmax", "12", "--samples", "4", "--format", "json"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["meta"]["words_checked"], 24);
    let depth = v["meta"]["max_overlap_depth"].as_u64().unwrap_or(0);
    assert!(depth < 10);
}

#[test]
fn bad_config_values_are_reported() {
    let o = veronese(&["embed", "--n", "1", "--points", "[1:0]"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_kind(&o), "config");
}
