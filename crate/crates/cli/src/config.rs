//! Run configuration: an optional TOML file, overridden by command-line flags.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};
use veronese_core::moebius::{presets, AssertedClass, GroupSpec, Mat2, MoebiusElement};

use crate::output::{float_value, Format};
use crate::parse;

pub const PRESETS: [&str; 5] = [
    "cyclic_loxodromic",
    "cyclic_parabolic",
    "rotation",
    "schottky_pair",
    "fuchsian_sample",
];

/// A number written either as a TOML float/integer or as a `"re+im i"` string.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum Scalar {
    Real(f64),
    Text(String),
}

impl Scalar {
    fn value(&self) -> Result<Complex64> {
        match self {
            Scalar::Real(x) => Ok(Complex64::new(*x, 0.0)),
            Scalar::Text(s) => parse::complex(s).map_err(anyhow::Error::msg),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGenerator {
    name: String,
    /// Row-major 2x2 matrix.
    matrix: [[Scalar; 2]; 2],
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileGroup {
    preset: Option<String>,
    lambda: Option<Scalar>,
    theta: Option<f64>,
    asserted_class: Option<String>,
    #[serde(default)]
    generators: Vec<FileGenerator>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTolerances {
    dedup_tol: Option<f64>,
    rank_tol: Option<f64>,
    conv_tol: Option<f64>,
    gap_tol: Option<f64>,
    sep: Option<f64>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileOutput {
    format: Option<String>,
    path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    n: Option<usize>,
    lmax: Option<usize>,
    seed: Option<u64>,
    samples: Option<usize>,
    #[serde(default)]
    group: FileGroup,
    #[serde(default)]
    tolerances: FileTolerances,
    #[serde(default)]
    output: FileOutput,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    pub dedup_tol: f64,
    pub rank_tol: f64,
    pub conv_tol: f64,
    pub gap_tol: f64,
    pub sep: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            dedup_tol: 1e-6,
            rank_tol: 1e-6,
            conv_tol: 1e-8,
            gap_tol: 1e-6,
            sep: 0.05,
        }
    }
}

#[derive(Debug, Clone)]
pub enum GroupSource {
    Preset {
        name: String,
        lambda: Complex64,
        theta: f64,
    },
    Inline {
        generators: Vec<(String, [[Complex64; 2]; 2])>,
        asserted_class: AssertedClass,
    },
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub group: GroupSource,
    pub n: usize,
    pub lmax: usize,
    pub tolerances: Tolerances,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub seed: u64,
    /// Size of random samples (compact sets, verification trials).
    pub samples: usize,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub n: Option<usize>,
    pub lmax: Option<usize>,
    pub format: Option<Format>,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub samples: Option<usize>,
    pub preset: Option<String>,
    pub lambda: Option<Complex64>,
    pub theta: Option<f64>,
}

impl RunConfig {
    pub fn load(path: Option<&Path>, over: &Overrides) -> Result<Self> {
        let file = match path {
            Some(p) => {
                let text = std::fs::read_to_string(p)
                    .with_context(|| format!("reading config {}", p.display()))?;
                toml::from_str::<FileConfig>(&text)
                    .with_context(|| format!("parsing config {}", p.display()))?
            }
            None => FileConfig::default(),
        };
        Self::resolve(file, over)
    }

    pub fn from_toml(text: &str, over: &Overrides) -> Result<Self> {
        Self::resolve(toml::from_str(text).context("parsing config")?, over)
    }

    fn resolve(file: FileConfig, over: &Overrides) -> Result<Self> {
        let d = Tolerances::default();
        let t = &file.tolerances;
        let tolerances = Tolerances {
            dedup_tol: t.dedup_tol.unwrap_or(d.dedup_tol),
            rank_tol: t.rank_tol.unwrap_or(d.rank_tol),
            conv_tol: t.conv_tol.unwrap_or(d.conv_tol),
            gap_tol: t.gap_tol.unwrap_or(d.gap_tol),
            sep: t.sep.unwrap_or(d.sep),
        };
        let format = match (over.format, &file.output.format) {
            (Some(f), _) => f,
            (None, Some(s)) => s.parse().map_err(anyhow::Error::msg)?,
            (None, None) => Format::Csv,
        };
        let cfg = RunConfig {
            group: group_source(&file.group, over)?,
            n: over.n.or(file.n).unwrap_or(2),
            lmax: over.lmax.or(file.lmax).unwrap_or(6),
            tolerances,
            format,
            out: over.out.clone().or(file.output.path),
            seed: over.seed.or(file.seed).unwrap_or(0),
            samples: over.samples.or(file.samples).unwrap_or(100),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            bail!("n must be at least 2, got {}", self.n);
        }
        if self.lmax < 1 {
            bail!("lmax must be at least 1");
        }
        if self.samples < 1 {
            bail!("samples must be at least 1");
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("dedup_tol", t.dedup_tol),
            ("rank_tol", t.rank_tol),
            ("conv_tol", t.conv_tol),
            ("gap_tol", t.gap_tol),
            ("sep", t.sep),
        ] {
            if !(v > 0.0 && v < 1.0) {
                bail!("tolerance {name} = {v} must lie in (0, 1)");
            }
        }
        Ok(())
    }

    pub fn group(&self) -> Result<GroupSpec> {
        let n = self.n;
        let g = match &self.group {
            GroupSource::Preset { name, lambda, theta } => match name.as_str() {
                "cyclic_loxodromic" => presets::cyclic_loxodromic_complex(*lambda, n)?,
                "cyclic_parabolic" => presets::cyclic_parabolic(n)?,
                "rotation" => presets::rotation(*theta, n)?,
                "schottky_pair" => presets::schottky_pair(n)?,
                "fuchsian_sample" => presets::fuchsian_sample(n)?,
                other => bail!("unknown preset `{other}` (known: {})", PRESETS.join(", ")),
            },
            GroupSource::Inline {
                generators,
                asserted_class,
            } => {
                let gens = generators
                    .iter()
                    .map(|(name, m)| {
                        let mat = Mat2::new(m[0][0], m[0][1], m[1][0], m[1][1]);
                        let e = MoebiusElement::new(mat)
                            .with_context(|| format!("generator `{name}`"))?;
                        Ok((name.clone(), e))
                    })
                    .collect::<Result<Vec<_>>>()?;
                GroupSpec::new(gens, *asserted_class, n)?
            }
        };
        Ok(g)
    }

    /// Config echo for the JSON `meta` object. The output path and thread
    /// count are left out so that they cannot change the file contents.
    pub fn meta(&self, command: &str) -> Map<String, Value> {
        let complex = |z: Complex64| json!([float_value(z.re), float_value(z.im)]);
        let group = match &self.group {
            GroupSource::Preset { name, lambda, theta } => {
                let mut m = Map::new();
                m.insert("preset".into(), json!(name));
                match name.as_str() {
                    "cyclic_loxodromic" => {
                        m.insert("lambda".into(), complex(*lambda));
                    }
                    "rotation" => {
                        m.insert("theta".into(), float_value(*theta));
                    }
                    _ => {}
                }
                Value::Object(m)
            }
            GroupSource::Inline {
                generators,
                asserted_class,
            } => {
                let gens: Vec<Value> = generators
                    .iter()
                    .map(|(name, m)| {
                        let rows: Vec<Value> = m
                            .iter()
                            .map(|row| Value::Array(row.iter().map(|z| complex(*z)).collect()))
                            .collect();
                        json!({ "name": name, "matrix": rows })
                    })
                    .collect();
                json!({ "asserted_class": asserted_class.as_str(), "generators": gens })
            }
        };
        let t = &self.tolerances;
        let mut m = Map::new();
        m.insert("tool".into(), json!(env!("CARGO_PKG_NAME")));
        m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
        m.insert("command".into(), json!(command));
        m.insert("n".into(), json!(self.n));
        m.insert("lmax".into(), json!(self.lmax));
        m.insert("seed".into(), json!(self.seed));
        m.insert("samples".into(), json!(self.samples));
        m.insert("group".into(), group);
        m.insert(
            "tolerances".into(),
            json!({
                "dedup_tol": float_value(t.dedup_tol),
                "rank_tol": float_value(t.rank_tol),
                "conv_tol": float_value(t.conv_tol),
                "gap_tol": float_value(t.gap_tol),
                "sep": float_value(t.sep),
            }),
        );
        m.insert("format".into(), json!(self.format.as_str()));
        m
    }
}

fn group_source(g: &FileGroup, over: &Overrides) -> Result<GroupSource> {
    let lambda = match (&over.lambda, &g.lambda) {
        (Some(l), _) => *l,
        (None, Some(s)) => s.value()?,
        (None, None) => Complex64::new(2.0, 0.0),
    };
    let theta = over.theta.or(g.theta).unwrap_or(0.3);
    let preset = over.preset.clone().or_else(|| g.preset.clone());
    if let Some(name) = preset {
        if !PRESETS.contains(&name.as_str()) {
            bail!("unknown preset `{name}` (known: {})", PRESETS.join(", "));
        }
        return Ok(GroupSource::Preset { name, lambda, theta });
    }
    if g.generators.is_empty() {
        return Ok(GroupSource::Preset {
            name: "cyclic_loxodromic".into(),
            lambda,
            theta,
        });
    }
    let generators = g
        .generators
        .iter()
        .map(|gen| {
            let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
            for (i, row) in gen.matrix.iter().enumerate() {
                for (j, v) in row.iter().enumerate() {
                    m[i][j] = v
                        .value()
                        .with_context(|| format!("generator `{}` entry ({i}, {j})", gen.name))?;
                }
            }
            Ok((gen.name.clone(), m))
        })
        .collect::<Result<Vec<_>>>()?;
    let asserted_class = match &g.asserted_class {
        Some(s) => s.parse()?,
        None => AssertedClass::Other,
    };
    Ok(GroupSource::Inline {
        generators,
        asserted_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inline_generators_from_toml() {
        let text = r#"
            n = 3
            lmax = 4
            seed = 9
            [group]
            asserted_class = "schottky"
            [[group.generators]]
            name = "a"
            matrix = [[3.0, 0.0], [0.0, "1/3"]]
        "#;
        assert!(RunConfig::from_toml(text, &Overrides::default()).is_err());
        let text = text.replace("\"1/3\"", "\"0.3333333333333333+0i\"");
        let cfg = RunConfig::from_toml(&text, &Overrides::default()).unwrap();
        assert_eq!(cfg.n, 3);
        let g = cfg.group().unwrap();
        assert_eq!(g.rank(), 1);
        assert_eq!(g.asserted_class, AssertedClass::Schottky);
    }

    #[test]
    fn flags_override_file() {
        let over = Overrides {
            n: Some(5),
            preset: Some("rotation".into()),
            ..Default::default()
        };
        let cfg = RunConfig::from_toml("n = 3\n[group]\npreset = \"schottky_pair\"\n", &over).unwrap();
        assert_eq!(cfg.n, 5);
        assert!(matches!(cfg.group, GroupSource::Preset { ref name, .. } if name == "rotation"));
    }

    #[test]
    fn invalid_values_rejected() {
        let none = Overrides::default();
        assert!(RunConfig::from_toml("n = 1", &none).is_err());
        assert!(RunConfig::from_toml("[tolerances]\nsep = 1.5", &none).is_err());
        assert!(RunConfig::from_toml("bogus = 1", &none).is_err());
        assert!(RunConfig::from_toml("[group]\npreset = \"nope\"", &none).is_err());
        assert!(RunConfig::from_toml("[output]\nformat = \"xml\"", &none).is_err());
    }
}
