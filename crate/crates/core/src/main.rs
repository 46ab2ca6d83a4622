use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use grasspair::complement::{Label, TruncationFamily};
use grasspair::error::{Error, Result};
use grasspair::geodesics::midpoint_distance_check;
use grasspair::hardy::{example_pair, list_examples, DEFAULT_LEVELS};
use grasspair::pairs::ProjectionPair;
use grasspair::report::{analyze_report, classify_example, classify_report, to_json, ProbeConfig};
use grasspair::substrate::{read_matrix, write_matrix, TolerancePolicy};

#[derive(Parser)]
#[command(
    name = "grasspair",
    version,
    about = "Analyze pairs of orthogonal projections and their common complements"
)]
struct Cli {
    /// Seed for randomized probes; GRASSPAIR_SEED overrides it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Relative rank tolerance (default 100·n·ε).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Five-space analysis and common-complement decision for one pair.
    Analyze(AnalyzeArgs),
    /// Classify a registered example or a directory written by `example`.
    Classify(ClassifyArgs),
    /// Sample the geodesic from P to Q as CSV.
    Geodesic(GeodesicArgs),
    /// Write the matrices of a registered example, or list the registry.
    Example(ExampleArgs),
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    p: PathBuf,
    #[arg(long)]
    q: PathBuf,
    /// Write the report here instead of stdout.
    #[arg(long)]
    json: Option<PathBuf>,
    #[arg(long, default_value_t = 16)]
    probe_trials: usize,
    #[arg(long)]
    probe_radius: Option<f64>,
}

#[derive(Args)]
struct ClassifyArgs {
    #[arg(long, conflicts_with = "dir")]
    example: Option<String>,
    /// Example parameters as JSON.
    #[arg(long)]
    params: Option<String>,
    /// Comma-separated levels.
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    /// Directory produced by `example --out`.
    #[arg(long)]
    dir: Option<PathBuf>,
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Args)]
struct GeodesicArgs {
    #[arg(long)]
    p: PathBuf,
    #[arg(long)]
    q: PathBuf,
    #[arg(long, default_value_t = 11)]
    samples: usize,
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct ExampleArgs {
    #[arg(long, required_unless_present = "list")]
    name: Option<String>,
    #[arg(long)]
    params: Option<String>,
    #[arg(long, value_delimiter = ',')]
    levels: Option<Vec<usize>>,
    #[arg(long, required_unless_present = "list")]
    out: Option<PathBuf>,
    /// Print the registry with default parameters.
    #[arg(long)]
    list: bool,
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    name: String,
    params: Value,
    levels: Vec<usize>,
    expected: Label,
    files: BTreeMap<usize, [String; 2]>,
}

enum Outcome {
    Ok,
    Negative,
}

fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_params(s: Option<&str>) -> Result<Value> {
    match s {
        Some(t) => serde_json::from_str(t).map_err(|e| Error::BadParams(format!("params: {e}"))),
        None => Ok(Value::Null),
    }
}

fn default_levels(name: &str) -> Vec<usize> {
    if name == "example51" {
        vec![16, 32, 64]
    } else {
        DEFAULT_LEVELS.to_vec()
    }
}

fn load_pair(p: &Path, q: &Path) -> Result<ProjectionPair> {
    ProjectionPair::new(read_matrix(p)?, read_matrix(q)?)
}

fn run(cli: Cli) -> Result<Outcome> {
    let seed = match std::env::var("GRASSPAIR_SEED") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Error::BadParams(format!("GRASSPAIR_SEED={v} is not an integer")))?,
        Err(_) => cli.seed,
    };
    let policy = match cli.tol {
        Some(t) => TolerancePolicy::with_rank_tol(t),
        None => TolerancePolicy::default(),
    };
    match cli.command {
        Command::Analyze(a) => {
            let pair = load_pair(&a.p, &a.q)?;
            let probe = ProbeConfig {
                seed,
                trials: a.probe_trials,
                radius: a.probe_radius,
            };
            let report = analyze_report(&pair, &policy, &probe)?;
            emit(&to_json(&report), a.json.as_deref())?;
            Ok(if report.has_complement() {
                Outcome::Ok
            } else {
                Outcome::Negative
            })
        }
        Command::Classify(c) => {
            let report = if let Some(dir) = c.dir {
                let manifest: Manifest = serde_json::from_str(&std::fs::read_to_string(dir.join("manifest.json"))?)?;
                let files = manifest.files.clone();
                let base = dir.clone();
                let family = TruncationFamily::new(manifest.levels.clone(), move |lvl| {
                    let [p, q] = files
                        .get(&lvl)
                        .ok_or_else(|| Error::BadParams(format!("no files for level {lvl}")))?;
                    load_pair(&base.join(p), &base.join(q))
                })?;
                classify_report(
                    &family,
                    Some(&manifest.name),
                    manifest.params,
                    Some(manifest.expected),
                    &policy,
                )?
            } else {
                let name = c
                    .example
                    .ok_or_else(|| Error::BadParams("either --example or --dir is required".into()))?;
                let params = parse_params(c.params.as_deref())?;
                let levels = c.levels.unwrap_or_else(|| default_levels(&name));
                classify_example(&name, &params, &levels, &policy)?
            };
            emit(&to_json(&report), c.json.as_deref())?;
            Ok(Outcome::Ok)
        }
        Command::Geodesic(g) => {
            let pair = load_pair(&g.p, &g.q)?;
            let samples = midpoint_distance_check(&pair, g.samples, &policy)?;
            let mut out = String::from("t,distance,predicted_distance,idempotency_residual\n");
            for s in samples {
                writeln!(
                    out,
                    "{},{:e},{:e},{:e}",
                    s.t, s.distance, s.predicted_distance, s.idempotency_residual
                )
                .unwrap();
            }
            emit(&out, g.csv.as_deref())?;
            Ok(Outcome::Ok)
        }
        Command::Example(e) => {
            if e.list {
                emit(&to_json(&list_examples()), None)?;
                return Ok(Outcome::Ok);
            }
            let name = e.name.expect("required by clap");
            let out = e.out.expect("required by clap");
            let params = parse_params(e.params.as_deref())?;
            let levels = e.levels.unwrap_or_else(|| default_levels(&name));
            let ex = example_pair(&name, &params, &levels)?;
            std::fs::create_dir_all(&out)?;
            let mut files = BTreeMap::new();
            for (lvl, pair) in levels.iter().zip(ex.family.pairs()?) {
                let p = format!("level_{lvl}_p.json");
                let q = format!("level_{lvl}_q.json");
                write_matrix(&out.join(&p), &pair.p)?;
                write_matrix(&out.join(&q), &pair.q)?;
                files.insert(*lvl, [p, q]);
            }
            let manifest = Manifest {
                name,
                params: ex.params,
                levels,
                expected: ex.expected,
                files,
            };
            std::fs::write(out.join("manifest.json"), to_json(&manifest))?;
            Ok(Outcome::Ok)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(Outcome::Ok) => ExitCode::SUCCESS,
        Ok(Outcome::Negative) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
