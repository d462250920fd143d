//! Empirical checks of the ultimate-boundedness and safe-practical-stability
//! results on seeded ensembles.

use rayon::prelude::*;
use serde::Serialize;

use super::{run_scenario, RunMetrics, ScenarioConfig};
use crate::error::{Error, Result};

/// `‖s‖` is ultimately bounded when it stays inside `√3·φ` (every component
/// in the boundary layer) over the steady-state window.
pub const ULTIMATE_BALL_FACTOR: f64 = 1.732_050_807_568_877_2;
/// Allowed departure from exact proportionality when φ is halved.
pub const PHI_SCALING_TOL: f64 = 0.2;

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Run {
    pub seed: u64,
    /// `d_max / λ_min(M)`.
    pub d_eq: f64,
    pub k_s_min: f64,
    pub gain_condition: bool,
    pub steady_s_norm: f64,
    /// `steady_s_norm / φ`: the empirical ultimate bound in boundary-layer units.
    pub s_bound_over_phi: f64,
    pub bounded: bool,
    pub steady_ep_norm: f64,
    pub tube_radius: f64,
    pub within_tube: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PhiScaling {
    pub phi: f64,
    pub steady_ep_norm: f64,
    pub steady_ep_norm_half_phi: f64,
    /// Ideally 0.5.
    pub ratio: f64,
    pub within_tolerance: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem2Report {
    pub runs: Vec<Theorem2Run>,
    /// Runs whose gains violate the margin; flagged, not asserted.
    pub gain_violations: usize,
    pub non_convergent: usize,
    pub phi_scaling: Option<PhiScaling>,
    pub passed: bool,
}

fn theorem2_run(cfg: &ScenarioConfig, m: &RunMetrics) -> Theorem2Run {
    let phi = cfg.gains.phi();
    let d_eq = cfg.equivalent_disturbance();
    let tube_radius = cfg.gains.tube_radius();
    Theorem2Run {
        seed: cfg.seed,
        d_eq,
        k_s_min: cfg.gains.k_s_min(),
        gain_condition: cfg.gains.k_s_min() > d_eq,
        steady_s_norm: m.steady_s_norm,
        s_bound_over_phi: m.steady_s_norm / phi,
        bounded: m.steady_s_norm <= ULTIMATE_BALL_FACTOR * phi,
        steady_ep_norm: m.steady_ep_norm,
        tube_radius,
        within_tube: m.steady_ep_norm <= tube_radius,
    }
}

/// Steady-state `‖e_p‖` at φ and at φ/2 with the same disturbance realization.
pub fn phi_scaling(config: &ScenarioConfig) -> Result<PhiScaling> {
    let phi = config.gains.phi();
    let half = ScenarioConfig {
        gains: config.gains.with_phi(0.5 * phi)?,
        ..config.clone()
    };
    let (_, full) = run_scenario(config)?;
    let (_, halved) = run_scenario(&half)?;
    let ratio = halved.steady_ep_norm / full.steady_ep_norm;
    Ok(PhiScaling {
        phi,
        steady_ep_norm: full.steady_ep_norm,
        steady_ep_norm_half_phi: halved.steady_ep_norm,
        ratio,
        within_tolerance: (ratio - 0.5).abs() <= PHI_SCALING_TOL * 0.5,
    })
}

/// Runs an obstacle-free ensemble. Runs that satisfy `λ_min(K_s) > d_eq` must
/// end with `‖s‖` inside the ultimate ball and `‖e_p‖` inside the tube.
/// `phi_scaling_on`, when set, also repeats that member with φ halved.
pub fn check_theorem2(configs: &[ScenarioConfig], phi_scaling_on: Option<usize>) -> Result<Theorem2Report> {
    if configs.iter().any(|c| !c.obstacles.is_empty()) {
        return Err(Error::config("obstacles", "the boundedness check needs obstacle-free scenarios"));
    }
    let runs = configs
        .par_iter()
        .map(|cfg| run_scenario(cfg).map(|(_, m)| theorem2_run(cfg, &m)))
        .collect::<Result<Vec<_>>>()?;
    let phi_scaling = phi_scaling_on
        .map(|i| {
            let cfg = configs
                .get(i)
                .ok_or_else(|| Error::config("phi_scaling_on", "index out of range"))?;
            phi_scaling(cfg)
        })
        .transpose()?;
    let gain_violations = runs.iter().filter(|r| !r.gain_condition).count();
    let non_convergent = runs.iter().filter(|r| !(r.bounded && r.within_tube)).count();
    let passed = runs
        .iter()
        .filter(|r| r.gain_condition)
        .all(|r| r.bounded && r.within_tube)
        && phi_scaling.as_ref().is_none_or(|p| p.within_tolerance);
    Ok(Theorem2Report {
        runs,
        gain_violations,
        non_convergent,
        phi_scaling,
        passed,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem3Run {
    pub seed: u64,
    /// Empirical `max_t ‖Δ_u‖`, N.
    pub delta_max: f64,
    /// `(d_max + Δ_max) / λ_min(M)`.
    pub d_eff: f64,
    pub k_s_min: f64,
    pub gain_condition: bool,
    pub infeasible_steps: usize,
    pub min_h_normalized: Option<f64>,
    pub safe: bool,
    pub steady_s_norm: f64,
    pub bounded: bool,
    pub goal_reached: bool,
    pub metrics: RunMetrics,
}

#[derive(Debug, Clone, Serialize)]
pub struct Theorem3Report {
    pub runs: Vec<Theorem3Run>,
    /// Runs with at least one infeasible filter step; safety is not asserted for them.
    pub infeasible_runs: usize,
    pub unsafe_feasible_runs: usize,
    pub unbounded_feasible_runs: usize,
    pub gain_violations: usize,
    pub passed: bool,
}

/// Every run that stayed feasible must keep `min_t h ≥ −1e−6·R²` and end with
/// bounded `‖s‖`. The post-hoc gain condition on `d_eff` is reported only.
pub fn check_theorem3(configs: &[ScenarioConfig]) -> Result<Theorem3Report> {
    let runs = configs
        .par_iter()
        .map(|cfg| {
            let (_, m) = run_scenario(cfg)?;
            let d_eff = (cfg.disturbance.d_max + m.max_delta_u) / cfg.vessel.min_mass_eigenvalue();
            Ok(Theorem3Run {
                seed: cfg.seed,
                delta_max: m.max_delta_u,
                d_eff,
                k_s_min: cfg.gains.k_s_min(),
                gain_condition: cfg.gains.k_s_min() > d_eff,
                infeasible_steps: m.infeasible_steps,
                min_h_normalized: m.min_h_normalized,
                safe: m.safe,
                steady_s_norm: m.steady_s_norm,
                bounded: m.steady_s_norm <= ULTIMATE_BALL_FACTOR * cfg.gains.phi(),
                goal_reached: m.goal_reached(),
                metrics: m,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let feasible = || runs.iter().filter(|r| r.infeasible_steps == 0);
    let unsafe_feasible_runs = feasible().filter(|r| !r.safe).count();
    let unbounded_feasible_runs = feasible().filter(|r| !r.bounded).count();
    Ok(Theorem3Report {
        infeasible_runs: runs.len() - feasible().count(),
        unsafe_feasible_runs,
        unbounded_feasible_runs,
        gain_violations: runs.iter().filter(|r| !r.gain_condition).count(),
        passed: unsafe_feasible_runs == 0 && unbounded_feasible_runs == 0,
        runs,
    })
}
