use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use biarc_core::collide::ObstacleSet;
use biarc_core::oracle::{agreement_suite, OracleConfig};
use biarc_core::sim::{arcs_of, run_prepared, sample_arcs, MetricsReport, Scenario, SimOptions};
use biarc_core::{PlanError, PlanSession};
use clap::{Parser, Subcommand};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "biarc",
    version,
    about = "Biarc lattice planner with closed-form swept collision checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Plan once from the first waypoint and write the path as a CSV trace.
    Plan {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Trace sampling step, meters.
        #[arg(long, default_value_t = 0.01)]
        ds: f64,
    },
    /// Run the closed-loop simulation and write the metrics record.
    Simulate {
        scenario: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Compare the closed-form collision check with the sampling oracle.
    Validate {
        /// Optional scenario whose seed is used.
        scenario: Option<PathBuf>,
        #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        trials: u64,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Simulate every scenario in a directory and write one CSV row each.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Failure with an exit code: 1 for I/O, parse and usage errors, 2 for
/// planning or simulation failures.
struct Fail(u8, String);

impl Fail {
    fn io(what: &Path, e: impl std::fmt::Display) -> Self {
        Fail(1, format!("{}: {e}", what.display()))
    }
}

type CmdResult = Result<(), Fail>;

fn load(path: &Path) -> Result<Scenario, Fail> {
    let text = fs::read_to_string(path).map_err(|e| Fail::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Fail::io(path, e))
}

fn cmd_plan(path: &Path, out: &Path, ds: f64) -> CmdResult {
    if !(ds > 0.0 && ds.is_finite()) {
        return Err(Fail(1, format!("--ds must be positive, got {ds}")));
    }
    let sc = load(path)?;
    let p = sc.prepare().map_err(|e| Fail::io(path, e))?;
    let mut session = PlanSession::new(
        p.path.clone(),
        p.hitbox,
        ObstacleSet::new(p.obstacles),
        p.planner,
    );
    let robot = p.path.waypoints()[0].pose();
    let r = match session.plan(robot) {
        Ok(r) => r,
        Err(e @ PlanError::NoPath { .. }) | Err(e @ PlanError::PathExhausted) => {
            return Err(Fail(2, format!("{}: {e}", sc.name)))
        }
    };
    let mut w = csv::Writer::from_path(out).map_err(|e| Fail::io(out, e))?;
    w.write_record(["s", "x", "y", "theta", "curvature"])
        .map_err(|e| Fail::io(out, e))?;
    for t in sample_arcs(&arcs_of(&r.biarcs), ds) {
        w.serialize((t.s, t.pose.x, t.pose.y, t.pose.theta, t.curvature))
            .map_err(|e| Fail::io(out, e))?;
    }
    w.flush().map_err(|e| Fail::io(out, e))?;
    println!(
        "{}: cost {} length {:.3} m plan {:.3} ms",
        sc.name,
        r.cost,
        r.length(),
        r.plan_ms
    );
    Ok(())
}

#[derive(Serialize)]
struct Record<'a> {
    scenario: &'a str,
    #[serde(flatten)]
    report: &'a MetricsReport,
}

fn simulate(sc: &Scenario, path: &Path, timing: bool) -> Result<MetricsReport, Fail> {
    let p = sc.prepare().map_err(|e| Fail::io(path, e))?;
    let opts = SimOptions {
        record_timing: timing,
        force_full_replan: false,
    };
    Ok(run_prepared(&p, opts).report)
}

fn cmd_simulate(path: &Path, out: &Path, seed: Option<u64>) -> CmdResult {
    let mut sc = load(path)?;
    if let Some(s) = seed {
        sc.params.seed = s;
    }
    let report = simulate(&sc, path, false)?;
    let rec = Record {
        scenario: &sc.name,
        report: &report,
    };
    let mut text = serde_json::to_string_pretty(&rec).expect("report serializes");
    text.push('\n');
    fs::write(out, text).map_err(|e| Fail::io(out, e))?;
    if report.success {
        println!(
            "{}: arrived, {:.3} m in {:.2} s",
            sc.name, report.path_m, report.time_s
        );
        Ok(())
    } else {
        Err(Fail(
            2,
            format!("{}: {}", sc.name, report.failure.unwrap_or_default()),
        ))
    }
}

fn cmd_validate(path: Option<&Path>, trials: u64, seed: Option<u64>) -> CmdResult {
    let scenario_seed = match path {
        Some(p) => {
            let sc = load(p)?;
            sc.prepare().map_err(|e| Fail::io(p, e))?;
            Some(sc.params.seed)
        }
        None => None,
    };
    let seed = seed.or(scenario_seed).unwrap_or(0);
    let report = agreement_suite(trials, seed, &OracleConfig::default());
    println!(
        "trials {} free {} hit {} ambiguous {} disagreements {}",
        report.total,
        report.free,
        report.hit,
        report.ambiguous,
        report.disagreements.len()
    );
    for d in report.disagreements.iter().take(10) {
        println!("  {d:?}");
    }
    if report.disagreements.is_empty() {
        Ok(())
    } else {
        Err(Fail(
            2,
            format!("{} disagreements", report.disagreements.len()),
        ))
    }
}

fn cmd_bench(dir: &Path, out: &Path) -> CmdResult {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(|e| Fail::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    let mut w = csv::Writer::from_path(out).map_err(|e| Fail::io(out, e))?;
    w.write_record([
        "scenario",
        "plan_ms_median",
        "plan_ms_max",
        "path_m",
        "time_s",
        "prox_m",
        "success",
    ])
    .map_err(|e| Fail::io(out, e))?;
    for f in &files {
        let sc = load(f)?;
        let r = simulate(&sc, f, true)?;
        w.serialize((
            &sc.name,
            r.plan_ms_median,
            r.plan_ms_max,
            r.path_m,
            r.time_s,
            r.prox_m,
            r.success,
        ))
        .map_err(|e| Fail::io(out, e))?;
        println!("{}: {}", sc.name, if r.success { "ok" } else { "failed" });
    }
    w.flush().map_err(|e| Fail::io(out, e))?;
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let r = match &cli.command {
        Command::Plan { scenario, out, ds } => cmd_plan(scenario, out, *ds),
        Command::Simulate {
            scenario,
            out,
            seed,
        } => cmd_simulate(scenario, out, *seed),
        Command::Validate {
            scenario,
            trials,
            seed,
        } => cmd_validate(scenario.as_deref(), *trials, *seed),
        Command::Bench { dir, out } => cmd_bench(dir, out),
    };
    match r {
        Ok(()) => ExitCode::SUCCESS,
        Err(Fail(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
