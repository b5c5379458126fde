use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use polychromatic::check::is_polychromatic;
use polychromatic::coloring::{default_radius, ColoringPlan};
use polychromatic::cube_path::{bfs_shortest_path, connect, CubeLabeling, BFS_MAX_DIM};
use polychromatic::grid::TorusDomain;
use polychromatic::labeling::Labeling;
use polychromatic::render::{render, Format};
use polychromatic::rigidity;
use polychromatic::toast::{generate, validate, GenerationPolicy, Toast};

mod failure;
mod tuple;

use failure::Failure;
use tuple::TupleFile;

/// Worker-count override for the rayon pool.
const WORKERS_ENV: &str = "POLYCHROMATIC_WORKERS";

#[derive(Parser)]
#[command(name = "polychromatic", version, about = "Polychromatic colorings of even tori")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or validate toast decompositions.
    #[command(subcommand)]
    Toast(ToastCmd),
    /// Build or verify colorings from a toast.
    #[command(subcommand)]
    Color(ColorCmd),
    /// Path of single-vertex recolorings between two cube labelings.
    ConnectCubes {
        from: PathBuf,
        to: PathBuf,
        /// Print a shortest path (d <= 3) instead.
        #[arg(long)]
        shortest: bool,
    },
    /// Extract, assemble and inspect 2-coloring tuples.
    #[command(subcommand)]
    Rigidity(RigidityCmd),
    /// Draw a planar labeling.
    Render {
        labeling: PathBuf,
        #[arg(long, default_value = "ascii")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ToastCmd {
    Gen(GenArgs),
    Validate {
        toast: PathBuf,
        /// Also check R-thickenings of children at this radius.
        #[arg(long = "R")]
        radius: Option<usize>,
    },
}

#[derive(Args)]
struct GenArgs {
    #[arg(short)]
    d: usize,
    #[arg(long, value_parser = parse_sides)]
    sides: Sides,
    #[arg(short)]
    r: usize,
    #[arg(long)]
    levels: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    leaf_min: Option<usize>,
    #[arg(long)]
    leaf_max: Option<usize>,
    #[arg(long)]
    slack: Option<usize>,
    #[arg(long)]
    max_children: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ColorCmd {
    Build {
        #[arg(long)]
        toast: PathBuf,
        /// Cube labeling (JSON array of length 2^d) used as the base template.
        #[arg(long)]
        base: PathBuf,
        #[arg(long = "R")]
        radius: Option<usize>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check polychromaticity; with --toast and --base, also the gap layout.
    Verify {
        labeling: PathBuf,
        #[arg(long, requires = "base")]
        toast: Option<PathBuf>,
        #[arg(long, requires = "toast")]
        base: Option<PathBuf>,
        #[arg(long = "R")]
        radius: Option<usize>,
    },
}

#[derive(Subcommand)]
enum RigidityCmd {
    /// Per-direction 2-colorings of a 2^d-polychromatic labeling.
    Extract {
        labeling: PathBuf,
        #[arg(long, default_value_t = 0)]
        marker: u8,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    Assemble {
        tuple: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Orthogonal-invariance matrix of a tuple.
    Report { tuple: PathBuf },
    /// Enumerate every 4-polychromatic coloring of a small torus.
    Dichotomy {
        #[arg(long, value_parser = parse_sides)]
        sides: Sides,
        /// Write every enumerated labeling here.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
}

/// Side lengths joined by `x`, e.g. `512x512`.
#[derive(Clone, Debug)]
struct Sides(Vec<usize>);

fn parse_sides(s: &str) -> Result<Sides, String> {
    s.split('x')
        .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad side {p:?}: {e}")))
        .collect::<Result<_, _>>()
        .map(Sides)
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn write(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn to_json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn load_labeling(path: &Path) -> Result<Labeling, Failure> {
    Ok(Labeling::from_json(&read(path)?)?)
}

fn load_cube(path: &Path) -> Result<CubeLabeling, Failure> {
    let values: Vec<u8> = serde_json::from_str(&read(path)?).map_err(polychromatic::Error::from)?;
    Ok(CubeLabeling::from_values(values)?)
}

fn load_plan(toast: &Path, base: &Path, radius: Option<usize>) -> Result<ColoringPlan, Failure> {
    let toast = Toast::from_json(&read(toast)?)?;
    let base = load_cube(base)?;
    let radius = radius.unwrap_or_else(|| default_radius(toast.domain().dim()));
    Ok(ColoringPlan::new(toast, base, radius)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Toast(ToastCmd::Gen(a)) => {
            if a.sides.0.len() != a.d {
                return Err(Failure::usage(format!(
                    "-d {} but {} sides given",
                    a.d,
                    a.sides.0.len()
                )));
            }
            let domain = TorusDomain::new(a.sides.0)?;
            let mut policy = GenerationPolicy::default();
            policy.leaf_side.0 = a.leaf_min.unwrap_or(policy.leaf_side.0);
            policy.leaf_side.1 = a.leaf_max.unwrap_or(policy.leaf_side.1);
            policy.slack = a.slack.unwrap_or(policy.slack);
            policy.max_children = a.max_children.unwrap_or(policy.max_children);
            let toast = generate(&domain, a.r, a.levels, a.seed, &policy)?;
            write(a.output.as_deref(), &toast.to_json()?)
        }
        Command::Toast(ToastCmd::Validate { toast, radius }) => {
            let toast = Toast::from_json(&read(&toast)?)?;
            let report = validate(&toast);
            let thickening = radius.map(|r| toast.check_thickenings(r)).transpose()?;
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                report: &'a polychromatic::toast::ToastReport,
                #[serde(skip_serializing_if = "Option::is_none")]
                thickening_failures: Option<&'a [String]>,
            }
            print!(
                "{}",
                to_json(&Out {
                    report: &report,
                    thickening_failures: thickening.as_deref(),
                })
            );
            let thick_ok = thickening.as_ref().is_none_or(|t| t.is_empty());
            if report.valid && thick_ok {
                Ok(())
            } else {
                Err(Failure::check("toast is not valid"))
            }
        }
        Command::Color(ColorCmd::Build {
            toast,
            base,
            radius,
            output,
        }) => {
            let plan = load_plan(&toast, &base, radius)?;
            write(output.as_deref(), &plan.build().to_json()?)
        }
        Command::Color(ColorCmd::Verify {
            labeling,
            toast,
            base,
            radius,
        }) => {
            let c = load_labeling(&labeling)?;
            let poly = is_polychromatic(&c, c.k());
            let plan = match (toast, base) {
                (Some(t), Some(b)) => {
                    let plan = load_plan(&t, &b, radius)?;
                    if plan.toast().domain() != c.domain() {
                        return Err(polychromatic::Error::DomainMismatch.into());
                    }
                    Some(plan.verify(&c))
                }
                _ => None,
            };
            #[derive(Serialize)]
            struct Out {
                polychromatic: polychromatic::check::PolyCheck,
                #[serde(skip_serializing_if = "Option::is_none")]
                plan: Option<polychromatic::coloring::PlanReport>,
            }
            let ok = poly.ok && plan.as_ref().is_none_or(|p| p.ok);
            print!("{}", to_json(&Out { polychromatic: poly, plan }));
            if ok {
                Ok(())
            } else {
                Err(Failure::check("labeling failed verification"))
            }
        }
        Command::ConnectCubes { from, to, shortest } => {
            let (a, b) = (load_cube(&from)?, load_cube(&to)?);
            let path = if shortest {
                if a.d() > BFS_MAX_DIM {
                    return Err(Failure::usage(format!("--shortest supports d <= {BFS_MAX_DIM}")));
                }
                bfs_shortest_path(&a, &b)?
            } else {
                connect(&a, &b)?
            };
            print!("{}", serde_json::to_string(&path).map_err(polychromatic::Error::from)? + "\n");
            Ok(())
        }
        Command::Rigidity(RigidityCmd::Extract {
            labeling,
            marker,
            output,
        }) => {
            let c = load_labeling(&labeling)?;
            let tuple = rigidity::extract_tuple(&c, marker)?;
            write(output.as_deref(), &TupleFile::from_tuple(&tuple).to_json())
        }
        Command::Rigidity(RigidityCmd::Assemble { tuple, output }) => {
            let tuple = TupleFile::from_json(&read(&tuple)?)?.into_tuple()?;
            write(output.as_deref(), &rigidity::assemble(&tuple)?.to_json()?)
        }
        Command::Rigidity(RigidityCmd::Report { tuple }) => {
            let tuple = TupleFile::from_json(&read(&tuple)?)?.into_tuple()?;
            print!("{}", to_json(&rigidity::invariance_report(&tuple)?));
            Ok(())
        }
        Command::Rigidity(RigidityCmd::Dichotomy { sides, dump }) => {
            let domain = TorusDomain::new(sides.0)?;
            let report = rigidity::verify_dichotomy_d2(&domain)?;
            if let Some(path) = dump {
                let all: Vec<Labeling> = rigidity::enumerate_polychromatic(&domain, 4)?.collect();
                write(Some(&path), &TupleFile::from_tuple(&all).to_json())?;
            }
            print!("{}", to_json(&report));
            if report.violations == 0 {
                Ok(())
            } else {
                Err(Failure::check("dichotomy violated"))
            }
        }
        Command::Render {
            labeling,
            format,
            output,
        } => {
            let c = load_labeling(&labeling)?;
            write(output.as_deref(), &render(&c, format)?)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => return Failure::usage(e.to_string().trim_end()).report(),
    };
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let workers = match v.parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Failure::usage(format!("{WORKERS_ENV} must be a positive integer")).report(),
        };
        // Fails only if a pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => f.report(),
    }
}
