use serde::{Deserialize, Serialize};

use super::log::TrajectoryLog;
use super::ScenarioConfig;

/// Fraction of the log, counted from the end, treated as steady state.
pub const STEADY_FRACTION: f64 = 0.25;
/// Position tolerance of the goal-reach criterion, m.
pub const GOAL_POSITION_TOL: f64 = 1.0;
/// Heading tolerance of the goal-reach criterion, rad.
pub const GOAL_HEADING_TOL: f64 = 0.05;
/// How long the goal tolerances must hold, s.
pub const GOAL_HOLD_TIME: f64 = 10.0;
/// Allowed barrier dip, relative to `R²`.
pub const SAFETY_TOL: f64 = 1e-6;

/// Summary statistics of one run, computed from the log alone.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub rows: usize,
    /// `min_t h` over all obstacles, m². `None` without obstacles.
    pub min_h: Option<f64>,
    /// `min_t h_j / R_j²` over all obstacles.
    pub min_h_normalized: Option<f64>,
    pub min_h_per_obstacle: Vec<f64>,
    /// `min_h_normalized ≥ −1e−6`, or no obstacles.
    pub safe: bool,
    /// Largest `‖e_p‖` over the steady-state window.
    pub steady_ep_norm: f64,
    /// Largest `‖s‖` over the steady-state window.
    pub steady_s_norm: f64,
    pub max_s_norm: f64,
    pub mean_step_ns: f64,
    pub p99_step_ns: f64,
    pub median_step_ns: f64,
    /// Fraction of steps in which the filter changed the clipped wrench.
    pub modification_rate: f64,
    pub infeasible_steps: usize,
    pub saturation_steps: usize,
    pub disturbance_clip_steps: usize,
    /// Empirical `max_t ‖Δ_u‖`, N.
    pub max_delta_u: f64,
    /// Start of the first 10 s window inside the goal tolerances, s.
    pub goal_reach_time: Option<f64>,
}

impl RunMetrics {
    /// `config` supplies the obstacle radii; everything else comes from `log`.
    pub fn from_log(log: &TrajectoryLog, config: &ScenarioConfig) -> Self {
        let rows = &log.rows;
        let n = rows.len();
        let steady_start = n - ((n as f64 * STEADY_FRACTION).ceil() as usize).clamp(1, n.max(1));

        let mut min_h_per_obstacle = vec![f64::INFINITY; log.obstacle_count];
        for row in rows {
            for (m, o) in min_h_per_obstacle.iter_mut().zip(&row.obstacles) {
                *m = m.min(o.h);
            }
        }
        let min_h = min_h_per_obstacle.iter().copied().reduce(f64::min);
        let min_h_normalized = min_h_per_obstacle
            .iter()
            .zip(&config.obstacles)
            .map(|(h, o)| h / (o.radius * o.radius))
            .reduce(f64::min);

        let steady = &rows[steady_start.min(n)..];
        let steady_ep_norm = steady.iter().map(|r| r.e_p.norm()).fold(0.0, f64::max);
        let steady_s_norm = steady.iter().map(|r| r.s.norm()).fold(0.0, f64::max);
        let max_s_norm = rows.iter().map(|r| r.s.norm()).fold(0.0, f64::max);

        let times: Vec<f64> = rows.iter().map(|r| r.controller_ns as f64).collect();
        let mean_step_ns = if n == 0 { 0.0 } else { times.iter().sum::<f64>() / n as f64 };

        let count = |f: &dyn Fn(&super::LogRow) -> bool| rows.iter().filter(|r| f(r)).count();
        let modified = count(&|r| r.modified);

        RunMetrics {
            rows: n,
            min_h,
            min_h_normalized,
            safe: min_h_normalized.is_none_or(|m| m >= -SAFETY_TOL),
            min_h_per_obstacle,
            steady_ep_norm,
            steady_s_norm,
            max_s_norm,
            mean_step_ns,
            p99_step_ns: crate::math::percentile(&times, 0.99),
            median_step_ns: crate::math::percentile(&times, 0.5),
            modification_rate: if n == 0 { 0.0 } else { modified as f64 / n as f64 },
            infeasible_steps: count(&|r| !r.feasible),
            saturation_steps: count(&|r| r.thruster_saturated),
            disturbance_clip_steps: count(&|r| r.d_clipped),
            max_delta_u: rows.iter().map(|r| r.delta_u.norm()).fold(0.0, f64::max),
            goal_reach_time: goal_reach_time(log),
        }
    }

    pub fn goal_reached(&self) -> bool {
        self.goal_reach_time.is_some()
    }
}

fn in_goal(e_p: &crate::math::Vec3) -> bool {
    e_p.xy().norm() < GOAL_POSITION_TOL && e_p.z.abs() < GOAL_HEADING_TOL
}

fn goal_reach_time(log: &TrajectoryLog) -> Option<f64> {
    let mut entered: Option<f64> = None;
    for row in &log.rows {
        if in_goal(&row.e_p) {
            let t0 = *entered.get_or_insert(row.t);
            if row.t - t0 >= GOAL_HOLD_TIME - 1e-9 {
                return Some(t0);
            }
        } else {
            entered = None;
        }
    }
    None
}
