//! Seeded scenario generators for the closed-loop ensemble checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ScenarioConfig;
use crate::disturbance::DisturbanceConfig;
use crate::dynamics::VesselState;
use crate::hocbf::Obstacle;
use crate::math::{mix_seed, Vec3};

/// Start at the origin and drive straight at an obstacle that sits next to
/// the route to `base.goal`. Along-track position, radius, lateral offset
/// (0.9 to 1.2 radii, so the circle grazes or just clears the straight route),
/// initial speed and disturbance intensity vary per member. Intensity is
/// scaled by 0.5 to 1 while `d_max` is kept, so every member stays inside the
/// gain margin of the base configuration.
///
/// Obstacles that cut deeper into the route create a stable equilibrium on
/// the circle (the lateral sliding-surface term pulls the vessel back onto
/// the route harder than the circle's curvature pushes it around), so those
/// runs stay safe but stall; [`head_on`] builds such a case.
pub fn collision_course(base: &ScenarioConfig, count: usize, seed: u64) -> Vec<ScenarioConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let goal = base.goal();
    let length = goal.xy().norm();
    let dir = goal.xy() / length;
    let normal = nalgebra::Vector2::new(-dir.y, dir.x);
    (0..count)
        .map(|i| {
            let along = rng.random_range(0.3..0.7) * length;
            let radius = rng.random_range(8.0..20.0);
            let side = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            let offset = side * rng.random_range(0.9..1.2) * radius;
            let center = dir * along + normal * offset;
            let speed = rng.random_range(0.5..2.0);
            let scale = rng.random_range(0.5..1.0);
            ScenarioConfig {
                obstacles: vec![Obstacle {
                    center: [center.x, center.y],
                    radius,
                }],
                initial: VesselState::new(Vec3::new(0.0, 0.0, center.y.atan2(center.x)), Vec3::new(speed, 0.0, 0.0)),
                disturbance: base.disturbance.scaled(scale),
                seed: mix_seed(seed, i as u64),
                ..base.clone()
            }
        })
        .collect()
}

/// Obstacle centred almost on the route, approached at `speed`.
pub fn head_on(base: &ScenarioConfig, speed: f64) -> ScenarioConfig {
    let goal = base.goal();
    let mid = goal.xy() * 0.5;
    ScenarioConfig {
        obstacles: vec![Obstacle {
            center: [mid.x, mid.y + 1.0],
            radius: 15.0,
        }],
        initial: VesselState::new(Vec3::new(0.0, 0.0, goal.y.atan2(goal.x)), Vec3::new(speed, 0.0, 0.0)),
        ..base.clone()
    }
}

/// Obstacle-free goal regulation from random start poses near the goal.
pub fn regulation(base: &ScenarioConfig, count: usize, seed: u64) -> Vec<ScenarioConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let goal = base.goal();
    (0..count)
        .map(|i| {
            let start = goal
                + Vec3::new(
                    rng.random_range(-30.0..30.0),
                    rng.random_range(-30.0..30.0),
                    rng.random_range(-0.3..0.3),
                );
            ScenarioConfig {
                obstacles: vec![],
                initial: VesselState::at_rest(start),
                seed: mix_seed(seed, i as u64),
                ..base.clone()
            }
        })
        .collect()
}

/// The same ensemble with the disturbance switched off.
pub fn undisturbed(configs: &[ScenarioConfig]) -> Vec<ScenarioConfig> {
    configs
        .iter()
        .map(|c| ScenarioConfig {
            disturbance: DisturbanceConfig::calm(),
            ..c.clone()
        })
        .collect()
}
