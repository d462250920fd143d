//! Independent numerical oracles shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use seaguard_core::dynamics::{coriolis, integrate_step, rotation, state_derivative};
use seaguard_core::hocbf::{build_constraint, h_dot, h_value};
use seaguard_core::smc::{sat, sliding_surface, smc_wrench};
use seaguard_core::{BarrierParams, Obstacle, ReferenceSignal, SmcGains, Vec3, VesselParams, VesselState};

pub fn random_state(rng: &mut ChaCha8Rng) -> VesselState {
    VesselState::new(
        Vec3::new(rng.random_range(-50.0..50.0), rng.random_range(-50.0..50.0), rng.random_range(-3.0..3.0)),
        Vec3::new(rng.random_range(-3.0..3.0), rng.random_range(-1.0..1.0), rng.random_range(-0.1..0.1)),
    )
}

/// Largest `|νᵀ(C + Cᵀ)ν| / (1 + ‖ν‖²)` over `samples` seeded velocities.
pub fn skew_symmetry_defect(params: &VesselParams, samples: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| {
            let nu = Vec3::new(rng.random_range(-10.0..10.0), rng.random_range(-10.0..10.0), rng.random_range(-1.0..1.0));
            let c = coriolis(params, &nu);
            (nu.transpose() * (c + c.transpose()) * nu)[0].abs() / (1.0 + nu.norm_squared())
        })
        .fold(0.0, f64::max)
}

/// Largest relative energy increase per step with `τ = d = 0`.
pub fn passivity_defect(params: &VesselParams, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = f64::NEG_INFINITY;
    for _ in 0..20 {
        let mut state = random_state(&mut rng);
        let mut energy = params.kinetic_energy(&state.nu);
        for _ in 0..500 {
            state = integrate_step(params, &state, &Vec3::zeros(), &Vec3::zeros(), 0.1).unwrap();
            let next = params.kinetic_energy(&state.nu);
            worst = worst.max((next - energy) / energy.max(1e-300));
            energy = next;
        }
    }
    worst
}

fn integrate(params: &VesselParams, state: &VesselState, tau: &Vec3, d: &Vec3, dt: f64, horizon: f64) -> VesselState {
    let steps = (horizon / dt).round() as usize;
    let mut s = *state;
    for _ in 0..steps {
        s = integrate_step(params, &s, tau, d, dt).unwrap();
    }
    s
}

fn state_distance(a: &VesselState, b: &VesselState) -> f64 {
    let mut de = a.eta - b.eta;
    de.z = seaguard_core::math::wrap_angle(de.z);
    (de.norm_squared() + (a.nu - b.nu).norm_squared()).sqrt()
}

/// Empirical convergence order of the RK4 step from errors at `dt`, `dt/2`,
/// `dt/4` against a fine reference. Returns the smaller of the two slopes.
pub fn rk4_order(params: &VesselParams) -> f64 {
    let state = VesselState::new(Vec3::new(1.0, -2.0, 0.3), Vec3::new(4.0, -1.5, 0.15));
    let tau = Vec3::new(2.0e4, -1.5e4, 3.0e5);
    let d = Vec3::new(-3.0e3, 2.0e3, -1.0e4);
    let horizon = 40.0;
    let reference = integrate(params, &state, &tau, &d, 1.0 / 64.0, horizon);
    let errs: Vec<f64> = [4.0, 2.0, 1.0]
        .iter()
        .map(|dt| state_distance(&integrate(params, &state, &tau, &d, *dt, horizon), &reference))
        .collect();
    let o1 = (errs[0] / errs[1]).log2();
    let o2 = (errs[1] / errs[2]).log2();
    o1.min(o2)
}

/// Applies the unclipped SMC wrench to the undisturbed plant and compares a
/// second-order one-sided difference of `s` with `−K_s sat(s/φ)` at every
/// step. Probes within `1e−3·φ` of a saturation kink, or crossing one, are
/// skipped. Returns (worst relative error, samples used).
pub fn smc_sdot_check(params: &VesselParams, gains: &SmcGains, start: VesselState, goal: Vec3, steps: usize) -> (f64, usize) {
    let reference = ReferenceSignal::regulation(goal);
    let phi = gains.phi();
    let probe = 1e-3;
    let mut state = start;
    let mut worst: f64 = 0.0;
    let mut used = 0;
    for _ in 0..steps {
        let s0 = sliding_surface(gains, &state, &reference);
        let tau = smc_wrench(params, gains, &state, &reference);
        let one = integrate_step(params, &state, &tau, &Vec3::zeros(), probe).unwrap();
        let two = integrate_step(params, &one, &tau, &Vec3::zeros(), probe).unwrap();
        let s1 = sliding_surface(gains, &one, &reference);
        let s2 = sliding_surface(gains, &two, &reference);
        let side = |s: &Vec3| s.map(|x| x.abs() > phi);
        let near_kink = s0.iter().any(|x| (x.abs() - phi).abs() < 1e-3 * phi) || side(&s0) != side(&s2);
        if !near_kink {
            let fd = (-3.0 * s0 + 4.0 * s1 - s2) / (2.0 * probe);
            let expected = -gains.k_s().component_mul(&sat(&s0, phi));
            let err = (fd - expected).norm() / expected.norm().max(1e-12);
            worst = worst.max(err);
            used += 1;
        }
        state = integrate_step(params, &state, &tau, &Vec3::zeros(), 0.1).unwrap();
    }
    (worst, used)
}

/// `ḧ` from the model's state derivative and an explicit `Ṙ`, independent of
/// the constraint builder.
pub fn h_ddot_oracle(params: &VesselParams, obstacle: &Obstacle, state: &VesselState, tau: &Vec3) -> f64 {
    let nu_dot = state_derivative(params, state, tau, &Vec3::zeros()).nu_dot;
    let psi = state.eta.z;
    let r = state.nu.z;
    let rot = rotation(psi);
    let rot_dot = seaguard_core::Mat3::new(
        -r * psi.sin(),
        -r * psi.cos(),
        0.0,
        r * psi.cos(),
        -r * psi.sin(),
        0.0,
        0.0,
        0.0,
        0.0,
    );
    let p_dot = (rot * state.nu).xy();
    let delta = state.eta.xy() - nalgebra::Vector2::new(obstacle.center[0], obstacle.center[1]);
    2.0 * p_dot.norm_squared() + 2.0 * delta.dot(&(rot_dot * state.nu + rot * nu_dot).xy())
}

/// Worst relative mismatch between the analytic row `a` and a central
/// finite-difference `∂ḧ/∂τ` over `count` seeded states.
pub fn row_fd_check(params: &VesselParams, count: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let barrier = BarrierParams::default();
    let obstacle = Obstacle::new([12.0, -7.0], 6.0).unwrap();
    let mut worst: f64 = 0.0;
    for _ in 0..count {
        let state = random_state(&mut rng);
        let tau = Vec3::new(rng.random_range(-3e4..3e4), rng.random_range(-3e4..3e4), rng.random_range(-2e5..2e5));
        let row = build_constraint(params, &barrier, &obstacle, 0, &state);
        let mut fd = Vec3::zeros();
        for k in 0..3 {
            let step = 1.0e3;
            let mut up = tau;
            let mut down = tau;
            up[k] += step;
            down[k] -= step;
            fd[k] = (h_ddot_oracle(params, &obstacle, &state, &up) - h_ddot_oracle(params, &obstacle, &state, &down)) / (2.0 * step);
        }
        worst = worst.max((fd - row.a).norm() / row.a.norm());
    }
    worst
}

/// Finite-difference `∂ḣ/∂τ` at the current instant, relative to `‖a‖·1 s`.
///
/// The wrench moves `ḣ` only through `ν`, so after a step of length δ the
/// sensitivity is `a·δ + O(δ²)`. Richardson extrapolation of two step lengths
/// to δ = 0 estimates the instantaneous derivative, which is zero for a
/// relative-degree-two barrier. Also returns the smallest `‖a‖` seen.
pub fn h_dot_tau_sensitivity(params: &VesselParams, count: usize, seed: u64) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let barrier = BarrierParams::default();
    let obstacle = Obstacle::new([12.0, -7.0], 6.0).unwrap();
    let mut worst: f64 = 0.0;
    let mut min_row: f64 = f64::INFINITY;
    for _ in 0..count {
        let state = random_state(&mut rng);
        let a = build_constraint(params, &barrier, &obstacle, 0, &state).a;
        min_row = min_row.min(a.norm());
        let sens = |dt: f64, k: usize| {
            let step = 1.0e3;
            let mut up = Vec3::zeros();
            up[k] = step;
            let hd = |tau: Vec3| h_dot(&obstacle, &integrate_step(params, &state, &tau, &Vec3::zeros(), dt).unwrap());
            (hd(up) - hd(-up)) / (2.0 * step)
        };
        for k in 0..3 {
            let extrapolated = 2.0 * sens(5e-4, k) - sens(1e-3, k);
            worst = worst.max(extrapolated.abs() / a.norm());
        }
    }
    (worst, min_row)
}

/// Forward-difference `dh/dt` along a short simulated trajectory against `ḣ`.
pub fn h_dot_fd_check(params: &VesselParams, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let obstacle = Obstacle::new([30.0, 10.0], 8.0).unwrap();
    let mut state = VesselState::new(Vec3::new(0.0, 0.0, 0.2), Vec3::new(2.0, 0.3, 0.01));
    let probe = 1e-4;
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let tau = Vec3::new(rng.random_range(-2e4..2e4), rng.random_range(-2e4..2e4), rng.random_range(-1e5..1e5));
        let h0 = h_value(&obstacle, &state.eta);
        let slope = |dt: f64| {
            let ahead = integrate_step(params, &state, &tau, &Vec3::zeros(), dt).unwrap();
            (h_value(&obstacle, &ahead.eta) - h0) / dt
        };
        // Richardson extrapolation cancels the first-order truncation term.
        let fd = 2.0 * slope(probe) - slope(2.0 * probe);
        let analytic = h_dot(&obstacle, &state);
        worst = worst.max((fd - analytic).abs() / analytic.abs().max(1e-3));
        state = integrate_step(params, &state, &tau, &Vec3::zeros(), 0.1).unwrap();
    }
    worst
}
