pub mod commands;
pub mod config;
pub mod output;
pub mod parse;

use std::io::Write;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::json;
use veronese_core::verify::Suite;

use crate::commands::Which;
use crate::config::{Overrides, RunConfig};
use crate::output::Format;

#[derive(Debug, Parser)]
#[command(
    name = "veronese",
    version,
    about = "Veronese actions of Kleinian groups on CP^n and their limit sets"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Degree of the embedding (target space CP^n).
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Longest word length.
    #[arg(long, global = true)]
    pub lmax: Option<usize>,
    /// Output format: csv or json
    #[arg(long, global = true, value_parser = parse_format)]
    pub format: Option<Format>,
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Seed for every random sample
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Size of random samples.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    /// Named group: cyclic_loxodromic, cyclic_parabolic, rotation,
    /// schottky_pair, fuchsian_sample.
    #[arg(long, global = true)]
    pub preset: Option<String>,
    /// Multiplier of the cyclic_loxodromic preset, e.g. "2" or "1.5+0.5i".
    #[arg(long, global = true, value_parser = parse_complex, allow_hyphen_values = true)]
    pub lambda: Option<Complex64>,
    /// Angle of the rotation preset.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed points of CP^1 on the rational normal curve.
    Embed {
        /// Points such as "[1:0]; [1:1+i]".
        #[arg(long)]
        points: Option<String>,
        /// File with one point per line.
        #[arg(long, value_name = "PATH")]
        input: Option<PathBuf>,
    },
    /// Representation matrix of a word, its singular values and class.
    Rep {
        /// Word over the generators, e.g. "a b^-1 a^2".
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Sampled limit sets.
    Limitset {
        /// Myrberg hyperplanes, ECG subspaces, or the CP^1 limit set
        #[arg(long, value_enum, default_value = "myrberg")]
        which: Which,
    },
    /// Property checks; exit status 1 if any check fails.
    Verify {
        /// equivariance, svlaw, lambda, containment, domination or all
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
    },
    /// Orbit accumulation of a random compact sample against the hyperplane union.
    Accumulate {
        /// Emit only the summary, not the accumulation points.
        #[arg(long)]
        summary: bool,
    },
    /// Overlaps of translates of a sample away from the ECG limit set.
    Proper,
}

fn parse_format(s: &str) -> Result<Format, String> {
    s.parse()
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    parse::complex(s)
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: veronese_core::Error| e.to_string())
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Embed { .. } => "embed",
            Command::Rep { .. } => "rep",
            Command::Limitset { .. } => "limitset",
            Command::Verify { .. } => "verify",
            Command::Accumulate { .. } => "accumulate",
            Command::Proper => "proper",
        }
    }
}

/// Rendered output and the intended exit status.
pub struct Outcome {
    pub text: String,
    pub success: bool,
    pub out: Option<PathBuf>,
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let g = &cli.global;
    let over = Overrides {
        n: g.n,
        lmax: g.lmax,
        format: g.format,
        out: g.out.clone(),
        seed: g.seed,
        samples: g.samples,
        preset: g.preset.clone(),
        lambda: g.lambda,
        theta: g.theta,
    };
    let cfg = RunConfig::load(g.config.as_deref(), &over)?;
    let mut success = true;
    let mut table = match &cli.command {
        Command::Embed { points, input } => {
            let text = match (points, input) {
                (Some(p), None) => p.replace(';', "\n"),
                (None, Some(path)) => std::fs::read_to_string(path)
                    .with_context(|| format!("reading {}", path.display()))?,
                _ => anyhow::bail!("embed needs exactly one of --points or --input"),
            };
            let pts = parse::cp1_points(&text)?;
            commands::embed_points(&cfg, &pts)?
        }
        Command::Rep { word } => commands::rep(&cfg, word)?,
        Command::Limitset { which } => {
            let mut t = commands::limitset(&cfg, *which)?;
            t.note("which", json!(format!("{which:?}").to_lowercase()));
            t
        }
        Command::Verify { suite } => {
            let (t, ok) = commands::verify(&cfg, *suite)?;
            success = ok;
            t
        }
        Command::Accumulate { summary } => commands::accumulate(&cfg, !summary)?,
        Command::Proper => commands::proper(&cfg)?,
    };
    table.note("record_count", json!(table.rows.len()));
    let text = table.render(cfg.format, &cfg.meta(cli.command.name()));
    Ok(Outcome {
        text,
        success,
        out: cfg.out.clone(),
    })
}

pub fn write_outcome(o: &Outcome) -> Result<()> {
    match &o.out {
        Some(path) => std::fs::write(path, &o.text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(o.text.as_bytes())?;
            Ok(stdout.flush()?)
        }
    }
}

/// Structured error record written to standard error.
pub fn error_record(err: &anyhow::Error) -> String {
    let kind = err
        .chain()
        .find_map(|e| e.downcast_ref::<veronese_core::Error>())
        .map_or_else(
            || {
                if err.chain().any(|e| e.is::<std::io::Error>()) {
                    "io"
                } else {
                    "config"
                }
            },
            |e| e.kind(),
        );
    let message = err.chain().map(|e| e.to_string()).collect::<Vec<_>>().join(": ");
    json!({ "error": { "kind": kind, "message": message } }).to_string()
}
