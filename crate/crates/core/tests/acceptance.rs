//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use seaguard_core::filter::suite::{run_oracle_suite, SuiteConfig};
use seaguard_core::sim::{check_theorem2, check_theorem3, compare_filters, run_scenario, scenarios};
use seaguard_core::{ScenarioConfig, SmcGains, Vec3, VesselParams, VesselState};

struct Outcome {
    pass: bool,
    detail: String,
}

fn criterion(number: u32, name: &str, budget: Duration, check: impl FnOnce() -> Outcome) -> bool {
    let started = Instant::now();
    let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| Outcome {
        pass: false,
        detail: format!(
            "panicked: {}",
            e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
        ),
    });
    let elapsed = started.elapsed();
    let pass = outcome.pass && elapsed <= budget;
    println!(
        "acceptance criterion {number} ({name}): {} in {:.2} s (budget {} s); {}",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        budget.as_secs(),
        outcome.detail
    );
    pass
}

fn dynamics_soundness() -> Outcome {
    let params = VesselParams::default();
    let skew = common::skew_symmetry_defect(&params, 1000, 11);
    let passivity = common::passivity_defect(&params, 12);
    let order = common::rk4_order(&params);
    Outcome {
        pass: skew < 1e-9 && passivity <= 1e-12 && order >= 3.5,
        detail: format!(
            "max |nu'(C+C')nu|/(1+|nu|^2) = {skew:.2e} (< 1e-9), max relative energy gain per step = {passivity:.2e} (<= 0), RK4 order = {order:.3} (>= 3.5)"
        ),
    }
}

fn smc_realization() -> Outcome {
    let params = VesselParams::default();
    let gains = SmcGains::default();
    let start = VesselState::new(Vec3::new(-40.0, 25.0, 0.4), Vec3::new(0.5, -0.3, 0.01));
    let (worst, used) = common::smc_sdot_check(&params, &gains, start, Vec3::new(0.0, 0.0, 0.0), 3000);
    Outcome {
        pass: worst <= 1e-4 && used > 1000,
        detail: format!("max relative |FD s_dot + Ks sat(s/phi)| = {worst:.2e} (<= 1e-4) over {used} samples"),
    }
}

fn tracking_bound() -> Outcome {
    let base = ScenarioConfig {
        obstacles: vec![],
        ..ScenarioConfig::default()
    };
    let disturbed = scenarios::regulation(&base, 10, 31);
    let calm = scenarios::undisturbed(&disturbed);
    let calm_report = check_theorem2(&calm, None).expect("calm ensemble runs");
    let dist_report = check_theorem2(&disturbed, Some(0)).expect("disturbed ensemble runs");
    let tube = base.gains.tube_radius();
    let calm_worst = calm_report.runs.iter().map(|r| r.steady_ep_norm).fold(0.0, f64::max);
    let s_worst = dist_report.runs.iter().map(|r| r.s_bound_over_phi).fold(0.0, f64::max);
    let gains_ok = dist_report.gain_violations == 0;
    let scaling = dist_report.phi_scaling.as_ref().expect("scaling requested");
    Outcome {
        pass: calm_report.runs.iter().all(|r| r.within_tube)
            && gains_ok
            && dist_report.runs.iter().all(|r| r.bounded)
            && scaling.within_tolerance,
        detail: format!(
            "undisturbed steady |e_p| max = {calm_worst:.2e} m (<= {tube} m); gain margin Ks_min = {:.3} > d_eq = {:.4}: {gains_ok}; disturbed steady |s|/phi max = {s_worst:.3} (<= sqrt 3); |e_p| ratio at phi/2 = {:.3} (0.5 +/- 0.1)",
            base.gains.k_s_min(),
            base.equivalent_disturbance(),
            scaling.ratio
        ),
    }
}

fn constraint_correctness() -> Outcome {
    let params = VesselParams::default();
    let (h_dot_sens, min_row) = common::h_dot_tau_sensitivity(&params, 10, 41);
    let row = common::row_fd_check(&params, 10, 42);
    Outcome {
        pass: h_dot_sens <= 1e-6 && min_row > 0.0 && row <= 1e-6,
        detail: format!(
            "extrapolated |d h_dot/d tau| / |a| = {h_dot_sens:.2e} (~0), min |a| = {min_row:.2e} (> 0), max relative |a - FD d h_ddot/d tau| = {row:.2e} (<= 1e-6)"
        ),
    }
}

fn forward_invariance() -> Outcome {
    let configs = scenarios::collision_course(&ScenarioConfig::default(), 20, 2024);
    let report = check_theorem3(&configs).expect("ensemble runs");
    let feasible: Vec<_> = report.runs.iter().filter(|r| r.infeasible_steps == 0).collect();
    let reached = feasible.iter().filter(|r| r.goal_reached).count();
    let min_h = report
        .runs
        .iter()
        .filter_map(|r| r.min_h_normalized)
        .fold(f64::INFINITY, f64::min);
    let latest = feasible
        .iter()
        .filter_map(|r| r.metrics.goal_reach_time)
        .fold(0.0, f64::max);
    Outcome {
        pass: !feasible.is_empty() && report.unsafe_feasible_runs == 0 && reached == feasible.len(),
        detail: format!(
            "{} runs, {} feasible throughout, unsafe feasible runs = {}, min_t h/R^2 = {min_h:.3e} (>= -1e-6), goal reached {reached}/{} (latest at {latest:.1} s)",
            report.runs.len(),
            feasible.len(),
            report.unsafe_feasible_runs,
            feasible.len()
        ),
    }
}

fn oracle_equivalence() -> Outcome {
    let report = run_oracle_suite(&SuiteConfig::default());
    let d = &report.deviation;
    Outcome {
        pass: report.passed(),
        detail: format!(
            "single-row max |tau - tau_QP| = {:.2e} (<= 1e-9): {}; multi-row feasible within tol after K = {}: {}/{}: {}; normalized deviation p50 = {:.2e}, p90 = {:.2e}, p99 = {:.2e}, max = {:.2e}, {} above 1e-3: {}",
            report.single_row_max_deviation,
            report.single_row_pass,
            report.config.filter.sweeps,
            report.multi_row_feasible,
            report.multi_row_instances,
            report.feasibility_pass,
            d.p50,
            d.p90,
            d.p99,
            d.max,
            d.exceeding,
            report.deviation_pass
        ),
    }
}

fn computational_claim() -> Outcome {
    let configs = scenarios::collision_course(&ScenarioConfig::default(), 5, 2024);
    let report = compare_filters(&configs).expect("paired runs");
    Outcome {
        pass: report.projection_faster,
        detail: format!(
            "median step time projection = {:.0} ns, QP oracle = {:.0} ns (ratio {:.1}x); p99 {:.0} ns vs {:.0} ns; max trajectory divergence {:.3e} m",
            report.projection_median_ns,
            report.oracle_median_ns,
            report.speedup_median,
            report.projection_p99_ns,
            report.oracle_p99_ns,
            report.max_divergence
        ),
    }
}

fn determinism() -> Outcome {
    let config = ScenarioConfig::default();
    let dir = tempfile::tempdir().expect("temp dir");
    let mut files = Vec::new();
    for k in 0..2 {
        let (log, _) = run_scenario(&config).expect("run");
        let out = dir.path().join(format!("run{k}"));
        log.save(&out).expect("save");
        files.push(std::fs::read(out.join("trajectory.csv")).expect("read back"));
    }
    Outcome {
        pass: files[0] == files[1] && !files[0].is_empty(),
        detail: format!("two runs wrote {} and {} bytes, identical: {}", files[0].len(), files[1].len(), files[0] == files[1]),
    }
}

fn main() {
    let results = [
        criterion(1, "dynamics soundness", Duration::from_secs(5), dynamics_soundness),
        criterion(2, "SMC realization", Duration::from_secs(10), smc_realization),
        criterion(3, "tracking bound", Duration::from_secs(60), tracking_bound),
        criterion(4, "relative degree and constraint row", Duration::from_secs(5), constraint_correctness),
        criterion(5, "forward invariance", Duration::from_secs(300), forward_invariance),
        criterion(6, "projection-oracle equivalence", Duration::from_secs(30), oracle_equivalence),
        criterion(7, "computational cost", Duration::from_secs(120), computational_claim),
        criterion(8, "determinism", Duration::from_secs(30), determinism),
    ];
    let passed = results.iter().filter(|p| **p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
