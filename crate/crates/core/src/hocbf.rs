//! Circular-obstacle barrier functions and their wrench-space constraints.
//!
//! For an obstacle at `p_o` with safety radius `R`, `h(η) = ‖p − p_o‖² − R²`
//! where `p = [x, y]`. `h` has relative degree two in `τ`, so safety is
//! enforced through the second-order condition
//!
//! ```text
//! ḧ + 2αḣ + α²h ≥ 0
//! ```
//!
//! Writing `δ = p − p_o`, `ṗ = R₂ν` and `p̈ = Ṙ₂ν + R₂ν̇` with `R₂` the top two
//! rows of `R(ψ)`:
//!
//! ```text
//! ḧ = 2‖ṗ‖² + 2δᵀṘ₂ν + 2δᵀR₂M⁻¹(τ − C(ν)ν − D(ν)ν)
//! ```
//!
//! which is affine in `τ`, giving one half-space `aᵀτ ≥ b` per obstacle. The
//! disturbance is taken as zero when building the row.

use nalgebra::{Matrix2x3, Vector2};
use serde::{Deserialize, Serialize};

use crate::dynamics::{velocity_forces, VesselParams, VesselState};
use crate::error::{Error, Result};
use crate::filter::HalfSpaceConstraint;
use crate::math::{Vec3, Wrench};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Obstacle {
    pub center: [f64; 2],
    /// Safety radius in metres, vessel inflation included.
    pub radius: f64,
}

impl Obstacle {
    pub fn new(center: [f64; 2], radius: f64) -> Result<Self> {
        let o = Obstacle { center, radius };
        o.validate(0)?;
        Ok(o)
    }

    pub fn validate(&self, index: usize) -> Result<()> {
        if self.center.iter().any(|x| !x.is_finite()) {
            return Err(Error::config(format!("obstacles[{index}].center"), "must be finite"));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::config(format!("obstacles[{index}].radius"), "must be positive"));
        }
        Ok(())
    }

    fn offset(&self, eta: &Vec3) -> Vector2<f64> {
        Vector2::new(eta.x - self.center[0], eta.y - self.center[1])
    }
}

/// Optional state-dependent class-K gain,
/// `α(h, ḣ) = min(α_max, α₀ (1 + κ max(0, −ḣ) / max(h + ε_h, ε_h)))`.
///
/// Raises α while the vessel closes on an obstacle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlphaSchedule {
    pub kappa: f64,
    pub eps_h: f64,
    pub alpha_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BarrierParams {
    /// Base class-K gain α₀ in 1/s.
    pub alpha: f64,
    #[serde(default)]
    pub schedule: Option<AlphaSchedule>,
    /// Bound on the unmodelled matched force, N. The row is tightened by
    /// `‖a‖·disturbance_margin` so the barrier inequality holds for every
    /// disturbance up to this norm. Zero gives the nominal row.
    #[serde(default)]
    pub disturbance_margin: f64,
}

impl Default for BarrierParams {
    fn default() -> Self {
        BarrierParams {
            alpha: 0.1,
            schedule: None,
            disturbance_margin: 0.0,
        }
    }
}

impl BarrierParams {
    pub fn constant(alpha: f64) -> Self {
        BarrierParams {
            alpha,
            schedule: None,
            disturbance_margin: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::config("barrier.alpha", "must be positive"));
        }
        if !(self.disturbance_margin >= 0.0 && self.disturbance_margin.is_finite()) {
            return Err(Error::config("barrier.disturbance_margin", "must be finite and >= 0"));
        }
        if let Some(s) = &self.schedule {
            if !(s.kappa >= 0.0 && s.kappa.is_finite()) {
                return Err(Error::config("barrier.schedule.kappa", "must be >= 0"));
            }
            if !(s.eps_h > 0.0 && s.eps_h.is_finite()) {
                return Err(Error::config("barrier.schedule.eps_h", "must be positive"));
            }
            if !(s.alpha_max >= self.alpha && s.alpha_max.is_finite()) {
                return Err(Error::config("barrier.schedule.alpha_max", "must be >= alpha"));
            }
        }
        Ok(())
    }

    pub fn alpha_at(&self, h: f64, h_dot: f64) -> f64 {
        match &self.schedule {
            None => self.alpha,
            Some(s) => {
                let closing = (-h_dot).max(0.0);
                let a = self.alpha * (1.0 + s.kappa * closing / (h + s.eps_h).max(s.eps_h));
                a.min(s.alpha_max)
            }
        }
    }
}

/// `h(η) = (x − x_o)² + (y − y_o)² − R²`.
pub fn h_value(obstacle: &Obstacle, eta: &Vec3) -> f64 {
    obstacle.offset(eta).norm_squared() - obstacle.radius * obstacle.radius
}

fn r2(psi: f64) -> Matrix2x3<f64> {
    let (s, c) = psi.sin_cos();
    Matrix2x3::new(c, -s, 0.0, s, c, 0.0)
}

fn r2_dot(psi: f64, r: f64) -> Matrix2x3<f64> {
    let (s, c) = psi.sin_cos();
    Matrix2x3::new(-s, -c, 0.0, c, -s, 0.0) * r
}

/// `ḣ = 2(x − x_o)ẋ + 2(y − y_o)ẏ` with `[ẋ, ẏ]` from `R(ψ)ν`.
pub fn h_dot(obstacle: &Obstacle, state: &VesselState) -> f64 {
    let p_dot = r2(state.eta.z) * state.nu;
    2.0 * obstacle.offset(&state.eta).dot(&p_dot)
}

/// Drift part and input gain of `ḧ`: `ḧ = drift + aᵀτ` at `d = 0`.
fn h_ddot_terms(params: &VesselParams, obstacle: &Obstacle, state: &VesselState) -> (f64, Vec3) {
    let delta = obstacle.offset(&state.eta);
    let rot = r2(state.eta.z);
    let p_dot = rot * state.nu;
    let rot_dot = r2_dot(state.eta.z, state.nu.z);
    let m_inv = params.mass_inv();
    // a = 2 M⁻ᵀ R₂ᵀ δ
    let a = m_inv.transpose() * rot.transpose() * delta * 2.0;
    let free_accel = -(m_inv * velocity_forces(params, &state.nu));
    let drift = 2.0 * p_dot.norm_squared()
        + 2.0 * delta.dot(&(rot_dot * state.nu))
        + 2.0 * delta.dot(&(rot * free_accel));
    (drift, a)
}

/// Analytic `ḧ` under wrench `τ` and zero disturbance.
pub fn h_ddot(params: &VesselParams, obstacle: &Obstacle, state: &VesselState, tau: &Wrench) -> f64 {
    let (drift, a) = h_ddot_terms(params, obstacle, state);
    drift + a.dot(tau)
}

/// Builds `aᵀτ ≥ b` equivalent to `ḧ + 2αḣ + α²h ≥ 0` at `d = 0`, tightened
/// by the configured disturbance margin.
pub fn build_constraint(
    params: &VesselParams,
    barrier: &BarrierParams,
    obstacle: &Obstacle,
    obstacle_id: usize,
    state: &VesselState,
) -> HalfSpaceConstraint {
    let h = h_value(obstacle, &state.eta);
    let hd = h_dot(obstacle, state);
    let alpha = barrier.alpha_at(h, hd);
    let (drift, a) = h_ddot_terms(params, obstacle, state);
    HalfSpaceConstraint {
        a,
        b: -(drift + 2.0 * alpha * hd + alpha * alpha * h) + a.norm() * barrier.disturbance_margin,
        obstacle_id,
    }
}

/// One row per obstacle, in obstacle-index order.
pub fn build_all(
    params: &VesselParams,
    barrier: &BarrierParams,
    obstacles: &[Obstacle],
    state: &VesselState,
) -> Vec<HalfSpaceConstraint> {
    obstacles
        .iter()
        .enumerate()
        .map(|(i, o)| build_constraint(params, barrier, o, i, state))
        .collect()
}

/// Per-obstacle values recorded in the trajectory log.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierReading {
    pub h: f64,
    pub h_dot: f64,
    pub alpha: f64,
}

pub fn barrier_reading(barrier: &BarrierParams, obstacle: &Obstacle, state: &VesselState) -> BarrierReading {
    let h = h_value(obstacle, &state.eta);
    let h_dot = h_dot(obstacle, state);
    BarrierReading {
        h,
        h_dot,
        alpha: barrier.alpha_at(h, h_dot),
    }
}
