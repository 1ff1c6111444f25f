use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use pathtransport::geometry::catalog::{CURVES, MANIFOLDS};
use pathtransport_cli::scenario::LAWS;
use pathtransport_cli::{load_scenario, run_scenario, RunReport, Scenario};

/// Transport tensors along curves from a scenario file.
#[derive(Parser)]
#[command(name = "pathtransport", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario and write the JSON report.
    Run(Common),
    /// Run only the axiom checks.
    Verify(Common),
    /// Write the CSV trace of every transport pair.
    Trace(Common),
    /// List the built-in manifolds, curves and laws.
    Catalog,
}

#[derive(Args)]
struct Common {
    /// Scenario file (TOML).
    scenario: PathBuf,
    /// Integration step, overriding `integrator.step`.
    #[arg(long, allow_negative_numbers = true)]
    step: Option<f64>,
    /// Axiom tolerance, overriding `axiom_check.tol`.
    #[arg(long, allow_negative_numbers = true)]
    tol: Option<f64>,
    /// Output file instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

const EXIT_INPUT: u8 = 1;
const EXIT_AXIOMS: u8 = 2;

fn load(c: &Common) -> Result<Scenario, String> {
    let mut sc = load_scenario(&c.scenario).map_err(|e| e.to_string())?;
    if let Some(h) = c.step {
        sc = sc.with_step(h).map_err(|e| e.to_string())?;
    }
    if let Some(t) = c.tol {
        sc = sc.with_tol(t).map_err(|e| e.to_string())?;
    }
    Ok(sc)
}

fn emit(output: Option<&Path>, bytes: &[u8]) -> Result<(), String> {
    match output {
        Some(p) => fs::write(p, bytes).map_err(|e| format!("cannot write {}: {e}", p.display())),
        None => io::stdout().write_all(bytes).map_err(|e| e.to_string()),
    }
}

fn json(r: &impl serde::Serialize) -> Vec<u8> {
    let mut v = serde_json::to_vec_pretty(r).expect("reports serialize");
    v.push(b'\n');
    v
}

fn axioms_passed(r: &RunReport) -> bool {
    r.axioms.as_ref().is_none_or(|a| a.passed)
}

fn run(cmd: Command) -> Result<bool, String> {
    match cmd {
        Command::Run(c) => {
            let sc = load(&c)?;
            let r = run_scenario(&sc).map_err(|e| e.to_string())?;
            emit(c.output.as_deref(), &json(&r))?;
            Ok(axioms_passed(&r))
        }
        Command::Verify(c) => {
            let mut sc = load(&c)?;
            sc.axiom_check = Some(sc.axiom_check.unwrap_or_default());
            sc.pairs.clear();
            sc.closed = false;
            sc.trace_points = None;
            let r = run_scenario(&sc).map_err(|e| e.to_string())?;
            let report = r.axioms.expect("axiom check requested");
            for a in &report.axioms {
                eprintln!(
                    "{} {:<22} {:.3e}",
                    if a.passed { "PASS" } else { "FAIL" },
                    a.name,
                    a.residual
                );
            }
            for e in &report.errors {
                eprintln!("error: {e}");
            }
            emit(c.output.as_deref(), &json(&report))?;
            Ok(report.passed)
        }
        Command::Trace(c) => {
            let mut sc = load(&c)?;
            if sc.trace_points.is_none() {
                return Err("output.trace_points: required by `trace`".into());
            }
            sc.axiom_check = None;
            sc.closed = false;
            let r = run_scenario(&sc).map_err(|e| e.to_string())?;
            let trace = r.trace.expect("trace requested");
            emit(c.output.as_deref(), trace.to_csv().as_bytes())?;
            Ok(true)
        }
        Command::Catalog => {
            let mut s = String::from("manifolds:\n");
            for (id, desc) in MANIFOLDS {
                s += &format!("  {id:<24} {desc}\n");
            }
            s += "  custom                   chart of dimension 1..=8, optional constant metric\ncurves:\n";
            for (id, params, desc) in CURVES {
                s += &format!("  {id:<24} {desc}");
                if !params.is_empty() {
                    s += &format!(" [{params}]");
                }
                s.push('\n');
            }
            s += "  tabulated                natural cubic spline through samples [s, points]\nlaws:\n";
            for (id, desc) in LAWS {
                s += &format!("  {id:<24} {desc}\n");
            }
            emit(None, s.as_bytes())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved for axiom failures
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_AXIOMS),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INPUT)
        }
    }
}
