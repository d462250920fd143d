//! Scenario configuration, the closed-loop driver, logging, metrics and the
//! empirical stability and safety checks.

mod compare;
mod config;
mod ensemble;
mod log;
mod metrics;
mod runner;
pub mod scenarios;
mod theorems;

pub use compare::{compare_filters, CompareReport, PairedRun};
pub use config::{PoseNoise, ScenarioConfig};
pub use ensemble::{run_ensemble, seeded_ensemble, EnsembleMember, EnsembleReport};
pub use log::{LogRow, ObstacleLog, TrajectoryLog};
pub use metrics::{
    RunMetrics, GOAL_HEADING_TOL, GOAL_HOLD_TIME, GOAL_POSITION_TOL, SAFETY_TOL, STEADY_FRACTION,
};
pub use runner::{run_scenario, run_scenario_with};
pub use theorems::{
    check_theorem2, check_theorem3, phi_scaling, PhiScaling, Theorem2Report, Theorem2Run, Theorem3Report, Theorem3Run,
    PHI_SCALING_TOL, ULTIMATE_BALL_FACTOR,
};
