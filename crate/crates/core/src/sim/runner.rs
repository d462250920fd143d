use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::log::{LogRow, ObstacleLog, TrajectoryLog};
use super::metrics::RunMetrics;
use super::ScenarioConfig;
use crate::disturbance::DisturbanceProcess;
use crate::dynamics::{integrate_step, VesselState};
use crate::error::Result;
use crate::filter::{filter_pipeline, ControlContext, FilterMode};
use crate::hocbf::barrier_reading;
use crate::math::{mix_seed, Vec3};
use crate::smc::{pose_error, sliding_surface, ReferenceSignal};

/// RNG stream used for pose noise, disjoint from the disturbance streams.
const POSE_NOISE_STREAM: u64 = 10;

/// Runs the closed loop with the projection filter.
pub fn run_scenario(config: &ScenarioConfig) -> Result<(TrajectoryLog, RunMetrics)> {
    run_scenario_with(config, FilterMode::Projection)
}

/// Per step: sample `d`, run the control pipeline on the (possibly noisy) pose,
/// allocate, then integrate the realized wrench plus the true disturbance.
pub fn run_scenario_with(config: &ScenarioConfig, mode: FilterMode) -> Result<(TrajectoryLog, RunMetrics)> {
    config.validate()?;
    config.check_initial_safety()?;

    let bounds = config.thrusters.wrench_box();
    let ctx = ControlContext {
        params: &config.vessel,
        gains: &config.gains,
        barrier: &config.barrier,
        bounds: &bounds,
        filter: &config.filter,
        obstacles: &config.obstacles,
    };
    let goal = config.goal();
    let reference = ReferenceSignal::regulation(goal);
    let mut disturbance = DisturbanceProcess::new(&config.disturbance, config.seed)?;
    let mut noise = config.pose_noise.map(|n| {
        let rng = ChaCha8Rng::seed_from_u64(mix_seed(config.seed, POSE_NOISE_STREAM));
        let normals = n.sigma.map(|s| Normal::new(0.0, s).expect("sigma validated"));
        (rng, normals)
    });

    let steps = config.steps();
    let dt = config.dt;
    let mut log = TrajectoryLog::new(config.obstacles.len());
    log.rows.reserve(steps + 1);
    let mut state = config.initial;

    for k in 0..=steps {
        let t = k as f64 * dt;
        let d = disturbance.sample(t, dt)?;

        let measured = match noise.as_mut() {
            Some((rng, normals)) => {
                let offset = Vec3::from_fn(|i, _| normals[i].sample(rng));
                VesselState::new(state.eta + offset, state.nu)
            }
            None => state,
        };

        let started = Instant::now();
        let out = filter_pipeline(&ctx, &measured, &reference, mode);
        let controller_ns = started.elapsed().as_nanos() as u64;

        let alloc = config.thrusters.allocate(&out.tau_safe());
        let applied = alloc.realized;

        let obstacles = config
            .obstacles
            .iter()
            .zip(&out.constraints)
            .map(|(o, c)| {
                let r = barrier_reading(&config.barrier, o, &state);
                ObstacleLog {
                    h: r.h,
                    h_dot: r.h_dot,
                    alpha: r.alpha,
                    residual: c.residual(&applied),
                }
            })
            .collect();

        log.rows.push(LogRow {
            t,
            eta: state.eta,
            nu: state.nu,
            e_p: pose_error(&state.eta, &goal),
            s: sliding_surface(&config.gains, &measured, &reference),
            tau_smc: out.tau_smc,
            tau_safe: out.tau_safe(),
            tau_applied: applied,
            delta_u: out.delta_u,
            d_total: d.total,
            d_wind: d.wind,
            d_wave: d.wave,
            d_current: d.current,
            d_clipped: d.clipped,
            obstacles,
            modified: out.result.modified,
            sweeps: out.result.sweeps_used,
            max_residual: out.result.max_residual,
            feasible: out.result.feasible,
            thruster_mag: alloc.command.magnitudes(),
            thruster_azimuth: alloc.command.azimuths(),
            thruster_saturated: alloc.saturated,
            controller_ns,
        });

        if k < steps {
            state = integrate_step(&config.vessel, &state, &applied, &d.total, dt)?;
        }
    }

    let metrics = RunMetrics::from_log(&log, config);
    Ok((log, metrics))
}
