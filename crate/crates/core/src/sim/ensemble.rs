use rayon::prelude::*;
use serde::Serialize;

use super::{run_scenario_with, RunMetrics, ScenarioConfig};
use crate::filter::FilterMode;
use crate::math::mix_seed;

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleMember {
    pub index: usize,
    pub seed: u64,
    pub metrics: Option<RunMetrics>,
    /// Set when the run aborted.
    pub error: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    pub runs: usize,
    pub completed: usize,
    pub safe: usize,
    pub goal_reached: usize,
    pub runs_with_infeasible_steps: usize,
    pub members: Vec<EnsembleMember>,
}

impl EnsembleReport {
    pub fn all_safe_and_converged(&self) -> bool {
        self.completed == self.runs && self.safe == self.runs && self.goal_reached == self.runs
    }
}

/// `runs` copies of `base` with seeds derived from `(base.seed, index)`.
pub fn seeded_ensemble(base: &ScenarioConfig, runs: usize) -> Vec<ScenarioConfig> {
    (0..runs).map(|i| base.with_seed(mix_seed(base.seed, i as u64))).collect()
}

/// Runs every member in parallel; each has its own RNG streams.
pub fn run_ensemble(configs: &[ScenarioConfig], mode: FilterMode) -> EnsembleReport {
    let members: Vec<EnsembleMember> = configs
        .par_iter()
        .enumerate()
        .map(|(index, cfg)| match run_scenario_with(cfg, mode) {
            Ok((_, metrics)) => EnsembleMember {
                index,
                seed: cfg.seed,
                metrics: Some(metrics),
                error: None,
            },
            Err(e) => EnsembleMember {
                index,
                seed: cfg.seed,
                metrics: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let done = || members.iter().filter_map(|m| m.metrics.as_ref());
    EnsembleReport {
        runs: configs.len(),
        completed: done().count(),
        safe: done().filter(|m| m.safe).count(),
        goal_reached: done().filter(|m| m.goal_reached()).count(),
        runs_with_infeasible_steps: done().filter(|m| m.infeasible_steps > 0).count(),
        members,
    }
}
