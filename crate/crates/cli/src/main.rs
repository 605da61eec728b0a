use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use anyhow::{ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;
use wasserlab_cli::formats::{read_json, read_matrix, read_measure, read_space, MeasureJson, PlanJson};
use wasserlab_cli::report::{to_csv, to_json};
use wasserlab_cli::{run_suite, suite_names, Batch, Format, RunReport, SuiteOptions};
use wasserlab_core::rigidity::{exotic_isometry, LinearIsometry};
use wasserlab_core::{displacement_interpolate, solve_wp};

/// Exact optimal transport between atomic measures on structured metric
/// spaces, and the verification suites built on it.
///
/// Exit status: 0 when every check passes, 1 when an assertion fails,
/// 2 on bad input.
#[derive(Parser)]
#[command(name = "wasserlab", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// W_p distance and an optimal plan between two measures.
    Wp {
        /// Space JSON; measures may then leave out their own space.
        #[arg(long)]
        space: Option<PathBuf>,
        #[arg(long)]
        mu: PathBuf,
        #[arg(long)]
        nu: PathBuf,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        /// Write the optimal plan here.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Displacement interpolation of a stored plan at time t.
    Interpolate {
        #[arg(long)]
        plan: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        t: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one verification suite.
    Verify {
        /// One of the names listed by `report --list`.
        suite: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Apply the barycentric isometry h -> b + psi(h - b) to a measure on
    /// Euclidean x_2 Y.
    Exotic {
        /// Orthogonal matrix as a list of rows.
        #[arg(long)]
        psi: PathBuf,
        #[arg(long)]
        mu: PathBuf,
        /// With a second measure, also report the distortion of W_p.
        #[arg(long)]
        nu: Option<PathBuf>,
        #[arg(long, default_value_t = 2.0)]
        p: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run several suites (all by default) into one report.
    Report {
        #[arg(long = "suite")]
        suites: Vec<String>,
        /// Print the suite names and exit.
        #[arg(long)]
        list: bool,
        #[command(flatten)]
        run: RunArgs,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exponent override for suites that take one.
    #[arg(long)]
    p: Option<f64>,
    /// Product exponent override for the cylinder suite.
    #[arg(long)]
    q: Option<f64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record wall time in the report (makes it non-reproducible).
    #[arg(long)]
    timed: bool,
}

impl RunArgs {
    fn options(&self) -> SuiteOptions {
        SuiteOptions { p: self.p, q: self.q, timed: self.timed }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn summarize(report: &RunReport) {
    let failed: Vec<&str> = report.failures().map(|a| a.id.as_str()).collect();
    if failed.is_empty() {
        eprintln!("{}: PASS ({} assertions, seed {})", report.suite, report.assertions.len(), report.seed);
    } else {
        eprintln!("{}: FAIL ({} of {}, seed {}): {}", report.suite, failed.len(), report.assertions.len(), report.seed, failed.join(", "));
    }
}

/// `Ok(false)` means an assertion failed.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Wp { space, mu, nu, p, plan, out } => {
            let space = space.as_deref().map(read_space).transpose()?;
            let mu = read_measure(&mu, space.as_ref())?;
            let space = Some(space.unwrap_or_else(|| mu.space_arc().clone()));
            let nu = read_measure(&nu, space.as_ref())?;
            let (w, optimal) = solve_wp(&mu, &nu, p)?;
            if let Some(path) = plan {
                emit(Some(&path), &to_json(&PlanJson::from_plan(&optimal))?)?;
            }
            emit(out.as_deref(), &to_json(&json!({ "p": p, "wp": w, "cost": optimal.cost() }))?)?;
            Ok(true)
        }
        Command::Interpolate { plan, t, out } => {
            let plan = read_json::<PlanJson>(&plan)?.to_plan().with_context(|| format!("plan in {}", plan.display()))?;
            let m = displacement_interpolate(&plan, t)?;
            emit(out.as_deref(), &to_json(&MeasureJson::from_measure(&m))?)?;
            Ok(true)
        }
        Command::Verify { suite, run } => {
            let report = run_suite(&suite, run.seed, run.options())?;
            let text = match run.format {
                Format::Json => to_json(&report)?,
                Format::Csv => to_csv(std::slice::from_ref(&report))?,
            };
            emit(run.out.as_deref(), &text)?;
            summarize(&report);
            Ok(report.pass)
        }
        Command::Exotic { psi, mu, nu, p, out } => {
            let (dim, matrix) = read_matrix(&psi)?;
            let psi = LinearIsometry::new(dim, matrix)?;
            let mu = read_measure(&mu, None)?;
            let image = exotic_isometry(&psi, &mu)?;
            let Some(nu) = nu else {
                emit(out.as_deref(), &to_json(&MeasureJson::from_measure(&image))?)?;
                return Ok(true);
            };
            let nu = read_measure(&nu, Some(&Arc::clone(mu.space_arc())))?;
            let image_nu = exotic_isometry(&psi, &nu)?;
            let before = solve_wp(&mu, &nu, p)?.0;
            let after = solve_wp(&image, &image_nu, p)?.0;
            let distortion = (after - before).abs();
            emit(
                out.as_deref(),
                &to_json(&json!({
                    "mu": MeasureJson::from_measure(&image),
                    "nu": MeasureJson::from_measure(&image_nu),
                    "p": p,
                    "wp_before": before,
                    "wp_after": after,
                    "distortion": distortion,
                }))?,
            )?;
            // The map is an isometry of W_2 only; other exponents are reported.
            Ok(p != 2.0 || distortion <= 1e-9)
        }
        Command::Report { suites, list, run } => {
            if list {
                for name in suite_names() {
                    println!("{name}");
                }
                return Ok(true);
            }
            let names: Vec<String> = if suites.is_empty() { suite_names().map(str::to_owned).collect() } else { suites };
            ensure!(!names.is_empty(), "no suites selected");
            let reports = names.iter().map(|n| run_suite(n, run.seed, run.options())).collect::<Result<Vec<_>>>()?;
            reports.iter().for_each(summarize);
            let pass = reports.iter().all(|r| r.pass);
            let text = match run.format {
                Format::Json => to_json(&Batch { seed: run.seed, pass, reports })?,
                Format::Csv => to_csv(&reports)?,
            };
            emit(run.out.as_deref(), &text)?;
            Ok(pass)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
