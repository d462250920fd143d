//! Shared fixtures for the criterion benchmarks.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use seaguard_core::filter::suite::{multi_row_instance, Instance};
use seaguard_core::sim::scenarios;
use seaguard_core::{ScenarioConfig, Vec3, VesselState};

/// Seeded filter instances with `rows` half-spaces each.
pub fn filter_instances(rows: usize, count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| multi_row_instance(&mut rng, rows)).collect()
}

/// The default encounter shortened to `horizon` seconds.
pub fn encounter(horizon: f64) -> ScenarioConfig {
    ScenarioConfig {
        horizon,
        ..ScenarioConfig::default()
    }
}

/// Collision-course encounters shortened to `horizon` seconds.
pub fn collision_courses(count: usize, horizon: f64) -> Vec<ScenarioConfig> {
    scenarios::collision_course(&ScenarioConfig::default(), count, 2024)
        .into_iter()
        .map(|c| ScenarioConfig { horizon, ..c })
        .collect()
}

/// A state closing on the default obstacle, so every filter call is active.
pub fn closing_state() -> VesselState {
    VesselState::new(Vec3::new(55.0, 8.0, 0.3), Vec3::new(1.2, 0.1, 0.0))
}
