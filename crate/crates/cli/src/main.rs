use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use weiercubic::pipeline::{PlantSpec, StageConfig};
use weiercubic::report::{self, Outcome, Overrides, PlantRequest};
use weiercubic::scenario::Scenario;
use weiercubic::C64;

/// Weierstrass parametrization of three-variable cubic equations.
#[derive(Debug, Parser)]
#[command(name = "weier-cubic", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Debug, Args)]
struct Global {
    /// Scenario file (JSON, schema "weier-cubic/1").
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Overrides solver.tol.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Truncation radius for the direct Eisenstein sums.
    #[arg(long, global = true)]
    cutoff: Option<usize>,
    /// JSON array of stage configs replacing solver.stages.
    #[arg(long, global = true)]
    seed_file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Invariants, half-period values and ℘, ℘′ at the sample points.
    Elliptic,
    /// Cubic form assembled from the geometry block.
    Extract,
    /// Run the three stages and evaluate solution triples.
    Solve,
    /// Solve and check every residual against its bound.
    Verify,
    /// Locate branch points and track loops around them.
    Monodromy,
    /// Emit a scenario with a known solution.
    Plant(PlantArgs),
}

#[derive(Debug, Args)]
struct PlantArgs {
    /// First period as RE,IM.
    #[arg(long, default_value = "1,0", value_parser = parse_complex, allow_hyphen_values = true)]
    omega1: C64,
    /// Second period as RE,IM.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    omega2: C64,
    /// c/d for stages 1, 2, 3 (give three times).
    #[arg(long = "cd", value_parser = parse_complex, num_args = 1, required = true, allow_hyphen_values = true)]
    c_over_d: Vec<C64>,
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true)]
    anchor: Option<C64>,
    #[arg(long, default_value_t = 11)]
    metric_seed: u64,
    #[arg(long, default_value_t = 0.3)]
    spread: f64,
    /// Relative perturbation of the recorded seeds.
    #[arg(long, default_value_t = 1e-3)]
    perturb: f64,
    #[arg(long, default_value_t = 20)]
    samples: usize,
    #[arg(long, default_value_t = 1)]
    sample_seed: u64,
}

fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected RE,IM, got {s:?}"))?;
    let f = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"));
    Ok(C64::new(f(re)?, f(im)?))
}

fn load_scenario(path: Option<&Path>) -> Result<Scenario> {
    let path = path.ok_or_else(|| anyhow!("--scenario is required for this command"))?;
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Scenario::from_json(&text).with_context(|| format!("parsing {}", path.display()))
}

fn load_stages(path: &Path) -> Result<Vec<StageConfig>> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing seed file {}", path.display()))
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exit_code(outcome: Outcome) -> u8 {
    match outcome {
        Outcome::Ok => 0,
        Outcome::AboveTolerance => 2,
        Outcome::NoBranchPoints => 3,
    }
}

fn run(cli: Cli) -> Result<u8> {
    let g = &cli.global;
    let overrides = Overrides {
        tol: g.tol,
        cutoff: g.cutoff,
        stages: g.seed_file.as_deref().map(load_stages).transpose()?,
    };
    if let Some(t) = g.tol {
        if !(t.is_finite() && t > 0.0) {
            bail!("--tol must be positive, got {t}");
        }
    }
    let out = g.out.as_deref();
    let code =
        match &cli.command {
            Command::Elliptic => {
                let s = load_scenario(g.scenario.as_deref())?;
                emit(&report::elliptic_report(&s, &overrides)?, out)?;
                0
            }
            Command::Extract => {
                let s = load_scenario(g.scenario.as_deref())?;
                emit(&report::extract_report(&s)?, out)?;
                0
            }
            Command::Solve => {
                let s = load_scenario(g.scenario.as_deref())?;
                let r = report::solve_report(&s, &overrides)?;
                emit(&r, out)?;
                exit_code(r.outcome)
            }
            Command::Verify => {
                let s = load_scenario(g.scenario.as_deref())?;
                let r = report::verify_report(&s, &overrides)?;
                emit(&r, out)?;
                exit_code(r.outcome)
            }
            Command::Monodromy => {
                let s = load_scenario(g.scenario.as_deref())?;
                let r = report::monodromy_report(&s, &overrides)?;
                emit(&r, out)?;
                if r.outcome == Outcome::NoBranchPoints {
                    eprintln!("no branch points located");
                }
                exit_code(r.outcome)
            }
            Command::Plant(a) => {
                let c_over_d: [C64; 3] = a.c_over_d.clone().try_into().map_err(|v: Vec<C64>| {
                    anyhow!("--cd must be given 3 times, got {}", v.len())
                })?;
                let req = PlantRequest {
                    periods: [a.omega1, a.omega2],
                    spec: PlantSpec {
                        c_over_d,
                        anchor: a.anchor,
                        metric_seed: a.metric_seed,
                        metric_spread: a.spread,
                    },
                    perturb: a.perturb,
                    samples: a.samples,
                    sample_seed: a.sample_seed,
                };
                let s = report::plant_scenario(&req)?;
                let mut text = s.to_json();
                text.push('\n');
                match out {
                    Some(p) => std::fs::write(p, text)
                        .with_context(|| format!("writing {}", p.display()))?,
                    None => print!("{text}"),
                }
                0
            }
        };
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors share the generic error code; 2 means "above tolerance"
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", render_chain(&e));
            ExitCode::from(1)
        }
    }
}

/// Error chain without causes already spelled out by their parent.
fn render_chain(e: &anyhow::Error) -> String {
    let mut msg = e.to_string();
    for cause in e.chain().skip(1) {
        let c = cause.to_string();
        if !msg.contains(&c) {
            msg.push_str(": ");
            msg.push_str(&c);
        }
    }
    msg
}
