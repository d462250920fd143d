//! Projection-versus-exact-QP property suite on random small instances.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{max_violation, project, qp_oracle, ActuatorBox, FilterConfig, HalfSpaceConstraint};
use crate::math::{percentile, Vec3, Wrench};

#[derive(Debug, Clone)]
pub struct Instance {
    pub bounds: ActuatorBox,
    pub constraints: Vec<HalfSpaceConstraint>,
    pub tau_nominal: Wrench,
}

fn random_direction(rng: &mut ChaCha8Rng) -> Vec3 {
    loop {
        let v = Vec3::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let n = v.norm();
        if n > 0.1 && n <= 1.0 {
            return v / n;
        }
    }
}

/// One half-space, box far away from the optimum.
pub fn single_row_instance(rng: &mut ChaCha8Rng) -> Instance {
    let bounds = ActuatorBox::symmetric(Vec3::repeat(1.0e3));
    let tau_nominal = Vec3::from_fn(|_, _| rng.random_range(-3.0..3.0));
    let scale = 10f64.powf(rng.random_range(-1.0..1.0));
    let a = random_direction(rng) * scale;
    let b = a.dot(&tau_nominal) + rng.random_range(0.0..2.0) * scale;
    Instance {
        bounds,
        constraints: vec![HalfSpaceConstraint::new(a, b)],
        tau_nominal,
    }
}

/// Box plus `rows` half-spaces sharing a strictly feasible point inside the box.
pub fn multi_row_instance(rng: &mut ChaCha8Rng, rows: usize) -> Instance {
    let min = Vec3::from_fn(|_, _| -rng.random_range(0.5..2.0));
    let max = Vec3::from_fn(|_, _| rng.random_range(0.5..2.0));
    let bounds = ActuatorBox { min, max };
    let interior = Vec3::from_fn(|k, _| {
        let mid = 0.5 * (min[k] + max[k]);
        let half = 0.45 * (max[k] - min[k]);
        rng.random_range(mid - half..mid + half)
    });
    let constraints = (0..rows)
        .map(|i| {
            let scale = 10f64.powf(rng.random_range(-1.0..1.0));
            let a = random_direction(rng) * scale;
            let slack = rng.random_range(0.0..0.5) * scale;
            HalfSpaceConstraint {
                a,
                b: a.dot(&interior) - slack,
                obstacle_id: i,
            }
        })
        .collect();
    let tau_nominal = Vec3::from_fn(|_, _| rng.random_range(-3.0..3.0));
    Instance {
        bounds,
        constraints,
        tau_nominal,
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteConfig {
    pub instances: usize,
    pub seed: u64,
    pub filter: FilterConfig,
    /// Required agreement on single-row instances (absolute).
    pub single_tol: f64,
    /// Required normalized deviation `‖τ_safe − τ_QP‖ / (1 + ‖τ_QP‖)` on multi-row instances.
    pub deviation_tol: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            instances: 1000,
            seed: 2024,
            filter: FilterConfig {
                gamma: 1.0,
                sweeps: 20,
                tol: 1e-6,
            },
            single_tol: 1e-9,
            deviation_tol: 1e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct DeviationStats {
    pub p50: f64,
    pub p90: f64,
    pub p99: f64,
    pub max: f64,
    pub exceeding: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub config: SuiteConfig,
    pub single_row_instances: usize,
    pub single_row_max_deviation: f64,
    pub multi_row_instances: usize,
    /// Instances where the projection reported `feasible = true`.
    pub multi_row_feasible: usize,
    pub multi_row_max_residual: f64,
    pub multi_row_max_sweeps: usize,
    pub deviation: DeviationStats,
    /// Instances where no half-space was violated after the initial clip.
    pub untouched_by_rows: usize,
    pub single_row_pass: bool,
    pub feasibility_pass: bool,
    pub deviation_pass: bool,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.single_row_pass && self.feasibility_pass && self.deviation_pass
    }
}

pub fn run_oracle_suite(config: &SuiteConfig) -> SuiteReport {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);

    let mut single_max: f64 = 0.0;
    for _ in 0..config.instances {
        let inst = single_row_instance(&mut rng);
        let fast = project(&inst.bounds, &inst.constraints, &config.filter, &inst.tau_nominal);
        let exact = qp_oracle(&inst.bounds, &inst.constraints, &inst.tau_nominal)
            .expect("single-row instances are feasible");
        single_max = single_max.max((fast.tau_safe - exact).norm());
    }

    let mut deviations = Vec::with_capacity(config.instances);
    let mut feasible = 0;
    let mut max_residual: f64 = 0.0;
    let mut max_sweeps = 0;
    let mut untouched = 0;
    for i in 0..config.instances {
        let rows = 2 + i % 3;
        let inst = multi_row_instance(&mut rng, rows);
        let fast = project(&inst.bounds, &inst.constraints, &config.filter, &inst.tau_nominal);
        let exact = qp_oracle(&inst.bounds, &inst.constraints, &inst.tau_nominal)
            .expect("generated instances contain a feasible point");
        if fast.feasible {
            feasible += 1;
        }
        let start = super::clip_box(&inst.bounds, &inst.tau_nominal);
        if max_violation(&inst.constraints, &start) <= 0.0 {
            untouched += 1;
        }
        max_residual = max_residual.max(fast.max_residual);
        max_sweeps = max_sweeps.max(fast.sweeps_used);
        deviations.push((fast.tau_safe - exact).norm() / (1.0 + exact.norm()));
    }

    let deviation = DeviationStats {
        p50: percentile(&deviations, 0.5),
        p90: percentile(&deviations, 0.9),
        p99: percentile(&deviations, 0.99),
        max: deviations.iter().copied().fold(0.0, f64::max),
        exceeding: deviations.iter().filter(|d| **d > config.deviation_tol).count(),
    };
    SuiteReport {
        config: *config,
        single_row_instances: config.instances,
        single_row_max_deviation: single_max,
        multi_row_instances: config.instances,
        multi_row_feasible: feasible,
        multi_row_max_residual: max_residual,
        multi_row_max_sweeps: max_sweeps,
        single_row_pass: single_max <= config.single_tol,
        feasibility_pass: feasible == config.instances,
        deviation_pass: deviation.exceeding == 0,
        deviation,
        untouched_by_rows: untouched,
    }
}
