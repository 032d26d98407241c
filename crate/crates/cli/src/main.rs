//! `fansy`: pp-divisors and fansy divisors from weight data, and the Gr(2,n) case.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use fansy_core::arith::{to_rats, Int};
use fansy_core::chow::{build_setup, default_rays, pp_from_weights, projectivize, WeightSetup};
use fansy_core::divisor::check_subdivision_structure;
use fansy_core::grassmannian::{
    compare_fansy, fansy_closed_form, fansy_via_recipe, local_chart_check, tail_fan_grass,
    verify_battery, DEFAULT_MAX_N,
};
use fansy_core::json::{int_vec_value, int_vecs, rat_vec_value};
use fansy_core::lattice::IntMatrix;
use fansy_core::polyhedral::{induced_subdivision, DEFAULT_MAX_ORTHANT_RANK};
use fansy_core::Error;

#[derive(Parser)]
#[command(name = "fansy", version, about = "Exact pp-divisors and fansy divisors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tail fan of Gr(k,n).
    Tailfan {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
    },
    /// Lattice data of a weight matrix.
    Setup {
        #[arg(long)]
        weights: PathBuf,
    },
    /// pp-divisor of the affine variety given by the weights.
    Ppdivisor {
        #[arg(long)]
        weights: PathBuf,
        /// JSON list of rays in the quotient lattice; default: rays of the chamber fan.
        #[arg(long)]
        rays: Option<PathBuf>,
        #[command(flatten)]
        guard: FaceGuard,
    },
    /// Fansy divisor of the projectivization of homogeneous weights.
    Projectivize {
        #[arg(long)]
        weights: PathBuf,
        #[command(flatten)]
        guard: FaceGuard,
    },
    /// Fansy divisor of Gr(2,n).
    Fansy {
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Every Gr(2,n) check for one n.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Regular subdivision of the weight configuration induced by c.
    Subdivision {
        #[arg(long)]
        weights: PathBuf,
        /// Integral vector, e.g. `1,0` or `[1,0]`.
        #[arg(long, allow_hyphen_values = true)]
        c: String,
    },
    /// Global versus local chart diagram for Gr(2,n).
    Localcheck {
        #[arg(long)]
        n: usize,
    },
}

#[derive(clap::Args)]
struct FaceGuard {
    /// Largest number of orthant faces (2^ℓ) the chamber refinement may visit.
    #[arg(long, default_value_t = 1usize << DEFAULT_MAX_ORTHANT_RANK)]
    max_faces: usize,
}

impl FaceGuard {
    fn max_orthant_rank(&self) -> usize {
        (usize::BITS - 1 - self.max_faces.max(1).leading_zeros()) as usize
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Closed,
    Recipe,
    Both,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct WeightFile {
    lattice_rank: usize,
    #[serde(with = "int_vecs")]
    weights: Vec<Vec<Int>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RayFile {
    Bare(#[serde(with = "int_vecs")] Vec<Vec<Int>>),
    Wrapped {
        #[serde(with = "int_vecs")]
        rays: Vec<Vec<Int>>,
    },
}

enum Failure {
    Input(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Inconsistent(_) => Failure::Verification(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// JSON to print and whether every check it reports passed.
type Output = Result<(Value, bool), Failure>;

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn load_setup(path: &Path) -> Result<WeightSetup, Failure> {
    let wf: WeightFile = read_json(path)?;
    if wf.weights.is_empty() {
        return Err(Failure::Input("no weights".into()));
    }
    if let Some(w) = wf.weights.iter().find(|w| w.len() != wf.lattice_rank) {
        return Err(Failure::Input(format!(
            "weight of length {} in a lattice of rank {}",
            w.len(),
            wf.lattice_rank
        )));
    }
    let deg = IntMatrix::from_cols(&wf.weights, wf.lattice_rank)?;
    Ok(build_setup(&deg)?)
}

fn parse_vec(s: &str) -> Result<Vec<Int>, Failure> {
    let body = s.trim().trim_start_matches('[').trim_end_matches(']');
    if body.trim().is_empty() {
        return Err(Failure::Input("empty vector".into()));
    }
    body.split(',')
        .map(|x| {
            x.trim()
                .trim_matches('"')
                .parse::<Int>()
                .map_err(|_| Failure::Input(format!("bad integer {x:?}")))
        })
        .collect()
}

fn ray_values(rays: &[Vec<Int>]) -> Value {
    Value::Array(rays.iter().map(|r| int_vec_value(r)).collect())
}

fn run(cmd: Command) -> Output {
    match cmd {
        Command::Tailfan { k, n } => {
            let fan = tail_fan_grass(k, n)?;
            Ok((json!({"k": k, "n": n, "cones": fan.len(), "fan": fan.to_json()}), true))
        }
        Command::Setup { weights } => Ok((load_setup(&weights)?.to_json(), true)),
        Command::Ppdivisor { weights, rays, guard } => {
            let setup = load_setup(&weights)?;
            let rays = match rays {
                Some(p) => match read_json::<RayFile>(&p)? {
                    RayFile::Bare(r) | RayFile::Wrapped { rays: r } => r,
                },
                None => default_rays(&setup, guard.max_orthant_rank())?,
            };
            let d = pp_from_weights(&setup, Some(&rays))?;
            Ok((
                json!({"rays": ray_values(&rays), "divisor": d.divisor.to_json()}),
                true,
            ))
        }
        Command::Projectivize { weights, guard } => {
            let setup = load_setup(&weights)?;
            let rays = default_rays(&setup, guard.max_orthant_rank())?;
            let d = pp_from_weights(&setup, Some(&rays))?;
            let f = projectivize(&setup, &d)?;
            let report = check_subdivision_structure(&f);
            Ok((
                json!({"fansy": f.to_json(), "structure": report.to_json()}),
                report.pass,
            ))
        }
        Command::Fansy { n, method, max_n } => match method {
            Method::Closed => Ok((json!({"n": n, "closed": fansy_closed_form(n)?.to_json()}), true)),
            Method::Recipe => Ok((json!({"n": n, "recipe": fansy_via_recipe(n, max_n)?.to_json()}), true)),
            Method::Both => {
                let closed = fansy_closed_form(n)?;
                let recipe = fansy_via_recipe(n, max_n)?;
                let cmp = compare_fansy(&closed, &recipe);
                Ok((
                    json!({
                        "n": n,
                        "equal": cmp.equal,
                        "comparison": cmp.to_json(),
                        "closed": closed.to_json(),
                        "recipe": recipe.to_json(),
                    }),
                    cmp.equal,
                ))
            }
        },
        Command::Verify { n, max_n } => {
            let b = verify_battery(n, max_n)?;
            Ok((b.to_json(), b.pass))
        }
        Command::Subdivision { weights, c } => {
            let setup = load_setup(&weights)?;
            let c = parse_vec(&c)?;
            if c.len() != setup.quotient_rank() {
                return Err(Failure::Input(format!(
                    "c has length {}, the quotient lattice has rank {}",
                    c.len(),
                    setup.quotient_rank()
                )));
            }
            // any lift of c gives the same subdivision: lifts differ by a linear function
            let heights = setup.shift(&c)?;
            let points: Vec<_> = (0..setup.orthant_rank())
                .map(|v| to_rats(&setup.deg.matrix.col(v)))
                .collect();
            let s = induced_subdivision("M~", &points, &heights)?;
            Ok((
                json!({
                    "c": int_vec_value(&c),
                    "heights": rat_vec_value(&heights),
                    "subdivision": s.to_json(),
                }),
                s.is_valid(),
            ))
        }
        Command::Localcheck { n } => {
            let r = local_chart_check(n)?;
            Ok((r.to_json(), r.pass))
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("FANSY_THREADS") else {
        return Ok(());
    };
    let threads: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::Input(format!("FANSY_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| run(cli.command));
    match result {
        Ok((value, pass)) => {
            let text = serde_json::to_string_pretty(&value).expect("JSON values serialize");
            let mut out = std::io::stdout().lock();
            // a closed pipe downstream is not an error of ours
            if let Err(e) = writeln!(out, "{text}").and_then(|()| out.flush()) {
                if e.kind() != std::io::ErrorKind::BrokenPipe {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification failed");
                ExitCode::from(1)
            }
        }
        Err(Failure::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Verification(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
    }
}
