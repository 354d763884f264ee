use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use invariant_forms::action::{ActionSpec, Weight};
use invariant_forms::canonical::{canonical_duality_check, canonical_comparison, canonical_invariants};
use invariant_forms::corpus::run_corpus;
use invariant_forms::euler::{euler_homology, HomologyQuery};
use invariant_forms::report::{analyze, default_max_degree, render_json, AnalysisOptions, FormDegrees};
use invariant_forms::Error;

#[derive(Parser)]
#[command(name = "invforms", version, about = "Invariant differential forms on quotients of affine space")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis of one action: surjectivity, smoothness, canonical module.
    Analyze {
        spec: PathBuf,
        /// Largest total degree examined [default: max(2|G|, 12)].
        #[arg(long)]
        max_degree: Option<u32>,
        /// A single form degree, or `all`.
        #[arg(long, default_value = "all")]
        form_degree: String,
        /// Write the report here instead of standard output.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Include wall-clock timings per stage (breaks byte-determinism).
        #[arg(long)]
        timings: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Analyze every action file in a directory and cross-check the routes.
    Corpus {
        dir: PathBuf,
        #[arg(long)]
        max_degree: Option<u32>,
        /// Write the summary JSON here.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Homology of the Euler derivation on one graded piece.
    Euler {
        spec: PathBuf,
        #[arg(long)]
        degree: u32,
        /// Weight of the piece, `t1,t2,...` optionally followed by `;f1,f2,...`.
        #[arg(long, allow_hyphen_values = true)]
        weight: Option<String>,
        #[arg(long, default_value_t = 0)]
        torus_index: usize,
        /// Require a point quotient, where the complex must be exact.
        #[arg(long)]
        point_quotient: bool,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Canonical module as invariant horizontal top forms.
    Canonical {
        spec: PathBuf,
        #[arg(long)]
        max_degree: Option<u32>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Resource(_) => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn input(message: String) -> Failure {
    Failure { code: 1, message }
}

fn load(path: &Path) -> Result<ActionSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {}", path.display(), e)))?;
    ActionSpec::from_json(&text).map_err(|e| input(format!("{}: {}", path.display(), e)))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| input(format!("{}: {}", p.display(), e))),
        None => {
            print!("{}", text);
            Ok(())
        }
    }
}

fn pool(jobs: Option<usize>) -> Result<(), Failure> {
    if let Some(j) = jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| input(e.to_string()))?;
    }
    Ok(())
}

fn parse_weight(text: &str, action: &ActionSpec) -> Result<Weight, Failure> {
    let (t, f) = text.split_once(';').unwrap_or((text, ""));
    let ints = |s: &str| -> Result<Vec<i64>, Failure> {
        s.split(',')
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .map(|p| p.parse::<i64>().map_err(|e| input(format!("bad weight entry {:?}: {}", p, e))))
            .collect()
    };
    let torus = ints(t)?;
    let finite_raw = if f.trim().is_empty() {
        vec![0; action.finite_rank()]
    } else {
        ints(f)?
    };
    if torus.len() != action.torus_rank || finite_raw.len() != action.finite_rank() {
        return Err(input(format!(
            "weight needs {} torus and {} finite entries",
            action.torus_rank,
            action.finite_rank()
        )));
    }
    let finite = finite_raw
        .iter()
        .zip(&action.finite_orders)
        .map(|(&r, &m)| r.rem_euclid(m as i64) as u64)
        .collect();
    Ok(Weight { torus, finite })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            spec,
            max_degree,
            form_degree,
            json,
            timings,
            jobs,
        } => {
            pool(jobs)?;
            let action = load(&spec)?;
            let form_degrees = if form_degree == "all" {
                FormDegrees::All
            } else {
                FormDegrees::Only(
                    form_degree
                        .parse()
                        .map_err(|_| input(format!("--form-degree expects a number or `all`, got {:?}", form_degree)))?,
                )
            };
            let options = AnalysisOptions {
                max_degree,
                form_degrees,
                timings,
            };
            let report = analyze(&action, &options)?;
            emit(&report.to_json(), json.as_deref())?;
            if json.is_some() {
                println!(
                    "smoothness: {:?}; inconclusive flags: {}",
                    report.smoothness.verdict,
                    report.inconclusive.len()
                );
            }
            Ok(if report.is_inconclusive() { 2 } else { 0 })
        }
        Command::Corpus {
            dir,
            max_degree,
            json,
            jobs,
        } => {
            pool(jobs)?;
            let options = AnalysisOptions {
                max_degree,
                ..AnalysisOptions::default()
            };
            let summary = run_corpus(&dir, &options)?;
            for o in &summary.outcomes {
                println!("{}", o.line());
            }
            println!(
                "instances {}  agree {}  inconclusive {}  errors {}  golden mismatches {}  violations {}",
                summary.instances,
                summary.agree,
                summary.inconclusive,
                summary.errors,
                summary.golden_mismatches,
                summary.violations
            );
            if summary.instances == 0 {
                eprintln!("error: no action files in {}", dir.display());
            }
            if let Some(p) = json {
                emit(&summary.to_json(), Some(&p))?;
            }
            Ok(summary.exit_code() as u8)
        }
        Command::Euler {
            spec,
            degree,
            weight,
            torus_index,
            point_quotient,
            json,
        } => {
            let action = load(&spec)?;
            let mut query = HomologyQuery::new(torus_index, degree);
            query.require_point_quotient = point_quotient;
            if let Some(w) = weight {
                query.weight = Some(parse_weight(&w, &action)?);
            }
            let table = euler_homology(&action, &query)?;
            match json {
                Some(p) => emit(&render_json(&table), Some(&p))?,
                None => {
                    println!("{:>4} {:>10} {:>10}", "k", "dim", "homology");
                    for (k, (d, h)) in table.piece_dims.iter().zip(&table.homology).enumerate() {
                        println!("{:>4} {:>10} {:>10}", k, d, h);
                    }
                }
            }
            Ok(0)
        }
        Command::Canonical { spec, max_degree, json } => {
            let action = load(&spec)?;
            let d = max_degree.unwrap_or_else(|| default_max_degree(&action));
            let module = canonical_invariants(&action, d)?;
            let (comparison, note) = match canonical_duality_check(&action, d) {
                Ok(c) => (c, None),
                Err(Error::Precondition(reason)) => (canonical_comparison(&action, d)?, Some(reason)),
                Err(e) => return Err(e.into()),
            };
            match json {
                Some(p) => {
                    #[derive(serde::Serialize)]
                    struct Out {
                        generators: Vec<String>,
                        comparison: invariant_forms::canonical::CanonicalComparison,
                        note: Option<String>,
                    }
                    let out = Out {
                        generators: module.generators.iter().map(|g| g.to_string()).collect(),
                        comparison: comparison.clone(),
                        note: note.clone(),
                    };
                    emit(&render_json(&out), Some(&p))?;
                }
                None => {
                    println!("form degree {}", comparison.form_degree);
                    for g in &module.generators {
                        println!("  {}", g);
                    }
                    println!("forms  {:?}", comparison.forms);
                    println!("toric  {:?}", comparison.toric);
                    println!("match  {}", comparison.matches);
                    if let Some(n) = &note {
                        println!("report only: {}", n);
                    }
                }
            }
            Ok(if comparison.certified { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
