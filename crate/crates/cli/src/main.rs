//! `seaguard`: run scenarios, ensembles, closed-loop checks and filter
//! comparisons. Reports go to stdout as JSON. The exit status is 0 on
//! success, 1 when a check fails and 2 on usage or configuration errors.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use seaguard_core::filter::suite::{run_oracle_suite, SuiteConfig};
use seaguard_core::filter::FilterMode;
use seaguard_core::sim::{
    check_theorem2, check_theorem3, compare_filters, run_ensemble, run_scenario_with, scenarios, seeded_ensemble,
};
use seaguard_core::ScenarioConfig;

#[derive(Parser)]
#[command(name = "seaguard", version, about = "Safety-filtered sliding-mode control of a surface vessel")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Simulate one scenario and write trajectory.csv, timing.csv and metrics.json.
    Run {
        #[command(flatten)]
        scenario: ScenarioArg,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum, default_value_t = Filter::Projection)]
        filter: Filter,
    },
    /// Run the scenario under many seeds in parallel.
    Ensemble {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        /// Randomize the encounter geometry instead of only the seed.
        #[arg(long)]
        collision_course: bool,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Filter::Projection)]
        filter: Filter,
        /// Print per-run metrics as well as the summary.
        #[arg(long)]
        verbose: bool,
    },
    /// Obstacle-free regulation ensemble: tracking bound and boundary-layer scaling.
    CheckT2 {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 10)]
        runs: usize,
        #[arg(long, default_value_t = 31)]
        seed: u64,
        /// Skip the φ/2 rerun.
        #[arg(long)]
        no_phi_scaling: bool,
    },
    /// Collision-course ensemble: safety, boundedness and feasibility.
    CheckT3 {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 20)]
        runs: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Projection filter against the exact QP in the same closed loop.
    Compare {
        #[command(flatten)]
        scenario: ScenarioArg,
        #[arg(long, default_value_t = 5)]
        runs: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
    },
    /// Projection filter against the exact QP on random offline instances.
    OracleSuite {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 20)]
        sweeps: usize,
    },
    /// Print the built-in default scenario as JSON.
    DefaultConfig,
}

#[derive(Args)]
struct ScenarioArg {
    /// Scenario JSON. The built-in default is used when omitted.
    config: Option<PathBuf>,
}

impl ScenarioArg {
    fn load(&self) -> Result<ScenarioConfig> {
        match &self.config {
            Some(path) => ScenarioConfig::load(path).with_context(|| format!("loading {}", path.display())),
            None => Ok(ScenarioConfig::default()),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Filter {
    Projection,
    Qp,
}

impl From<Filter> for FilterMode {
    fn from(f: Filter) -> Self {
        match f {
            Filter::Projection => FilterMode::Projection,
            Filter::Qp => FilterMode::QpOracle,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn print(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

/// Returns whether the command's check passed.
fn execute(command: Command) -> Result<bool> {
    match command {
        Command::Run {
            scenario,
            out,
            seed,
            filter,
        } => {
            let mut config = scenario.load()?;
            if let Some(seed) = seed {
                config.seed = seed;
            }
            run(&config, &out, filter.into())
        }
        Command::Ensemble {
            scenario,
            runs,
            collision_course,
            seed,
            filter,
            verbose,
        } => {
            let base = scenario.load()?;
            let configs = if collision_course {
                scenarios::collision_course(&base, runs, seed)
            } else {
                seeded_ensemble(&base, runs)
            };
            let mut report = run_ensemble(&configs, filter.into());
            let ok = report.all_safe_and_converged();
            if !verbose {
                report.members.retain(|m| m.error.is_some());
            }
            print(&report)?;
            Ok(ok)
        }
        Command::CheckT2 {
            scenario,
            runs,
            seed,
            no_phi_scaling,
        } => {
            let configs = scenarios::regulation(&scenario.load()?, runs, seed);
            let report = check_theorem2(&configs, (!no_phi_scaling).then_some(0))?;
            print(&report)?;
            Ok(report.passed)
        }
        Command::CheckT3 { scenario, runs, seed } => {
            let configs = scenarios::collision_course(&scenario.load()?, runs, seed);
            let report = check_theorem3(&configs)?;
            print(&report)?;
            Ok(report.passed)
        }
        Command::Compare { scenario, runs, seed } => {
            let configs = scenarios::collision_course(&scenario.load()?, runs, seed);
            let report = compare_filters(&configs)?;
            print(&report)?;
            Ok(report.projection_faster)
        }
        Command::OracleSuite {
            instances,
            seed,
            sweeps,
        } => {
            let mut config = SuiteConfig {
                instances,
                seed,
                ..SuiteConfig::default()
            };
            config.filter.sweeps = sweeps;
            config.filter.validate()?;
            let report = run_oracle_suite(&config);
            print(&json!({ "passed": report.passed(), "report": report }))?;
            Ok(report.passed())
        }
        Command::DefaultConfig => {
            println!("{}", ScenarioConfig::default().to_json()?);
            Ok(true)
        }
    }
}

fn run(config: &ScenarioConfig, out: &Path, mode: FilterMode) -> Result<bool> {
    let (log, metrics) = run_scenario_with(config, mode)?;
    log.save(out).with_context(|| format!("writing logs to {}", out.display()))?;
    let text = serde_json::to_string_pretty(&metrics)?;
    std::fs::write(out.join("metrics.json"), &text)?;
    println!("{text}");
    Ok(metrics.safe)
}
