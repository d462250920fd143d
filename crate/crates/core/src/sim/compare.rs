use serde::Serialize;

use super::{run_scenario_with, ScenarioConfig};
use crate::error::Result;
use crate::filter::FilterMode;
use crate::math::percentile;

#[derive(Debug, Clone, Serialize)]
pub struct PairedRun {
    pub seed: u64,
    /// Largest pose difference between the two closed loops over the run.
    pub max_divergence: f64,
    pub projection_median_ns: f64,
    pub oracle_median_ns: f64,
    pub projection_max_residual: f64,
    pub oracle_max_residual: f64,
    pub projection_min_h: Option<f64>,
    pub oracle_min_h: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CompareReport {
    pub runs: Vec<PairedRun>,
    pub max_divergence: f64,
    /// Pooled over every step of every run.
    pub projection_median_ns: f64,
    pub projection_p99_ns: f64,
    pub oracle_median_ns: f64,
    pub oracle_p99_ns: f64,
    pub speedup_median: f64,
    pub projection_faster: bool,
}

/// Runs each scenario with the projection filter and with the exact QP in
/// the loop. Runs are sequential so that the two timings see the same load.
pub fn compare_filters(configs: &[ScenarioConfig]) -> Result<CompareReport> {
    let mut runs = Vec::with_capacity(configs.len());
    let mut proj_times = Vec::new();
    let mut oracle_times = Vec::new();
    for cfg in configs {
        let (pl, pm) = run_scenario_with(cfg, FilterMode::Projection)?;
        let (ol, om) = run_scenario_with(cfg, FilterMode::QpOracle)?;
        let max_divergence = pl
            .rows
            .iter()
            .zip(&ol.rows)
            .map(|(p, o)| (p.eta - o.eta).norm())
            .fold(0.0, f64::max);
        let residual = |l: &super::TrajectoryLog| l.rows.iter().map(|r| r.max_residual).fold(0.0, f64::max);
        runs.push(PairedRun {
            seed: cfg.seed,
            max_divergence,
            projection_median_ns: pm.median_step_ns,
            oracle_median_ns: om.median_step_ns,
            projection_max_residual: residual(&pl),
            oracle_max_residual: residual(&ol),
            projection_min_h: pm.min_h,
            oracle_min_h: om.min_h,
        });
        proj_times.extend(pl.rows.iter().map(|r| r.controller_ns as f64));
        oracle_times.extend(ol.rows.iter().map(|r| r.controller_ns as f64));
    }
    let projection_median_ns = percentile(&proj_times, 0.5);
    let oracle_median_ns = percentile(&oracle_times, 0.5);
    Ok(CompareReport {
        max_divergence: runs.iter().map(|r| r.max_divergence).fold(0.0, f64::max),
        projection_p99_ns: percentile(&proj_times, 0.99),
        oracle_p99_ns: percentile(&oracle_times, 0.99),
        speedup_median: oracle_median_ns / projection_median_ns,
        projection_faster: projection_median_ns < oracle_median_ns,
        projection_median_ns,
        oracle_median_ns,
        runs,
    })
}
