//! Boundary-layer sliding-mode controller.
//!
//! Sliding variable `s = (ν − ν_d) + Λ(η − η_d)` and control
//!
//! ```text
//! τ_SMC = C(ν)ν + D(ν)ν + M(−K_s sat(s/φ) + ν̇_d − ΛR(ψ)ν + Λη̇_d)
//! ```
//!
//! which makes `ṡ = −K_s sat(s/φ)` on the undisturbed plant. The velocity error
//! is taken in the body frame and the pose error in the world frame, exactly
//! as written above; no frame transformation is applied to `e_p`.

use serde::{Deserialize, Serialize};

use crate::dynamics::{rotation, velocity_forces, VesselParams, VesselState};
use crate::error::{Error, Result};
use crate::math::{vec3, wrap_angle, Mat3, Vec3, Wrench};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GainsSpec", into = "GainsSpec")]
pub struct SmcGains {
    lambda: Vec3,
    k_s: Vec3,
    phi: f64,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct GainsSpec {
    /// Diagonal of Λ, 1/s.
    lambda: [f64; 3],
    /// Diagonal of K_s, acceleration units.
    k_s: [f64; 3],
    phi: f64,
}

impl TryFrom<GainsSpec> for SmcGains {
    type Error = Error;
    fn try_from(g: GainsSpec) -> Result<Self> {
        SmcGains::new(vec3(g.lambda), vec3(g.k_s), g.phi)
    }
}

impl From<SmcGains> for GainsSpec {
    fn from(g: SmcGains) -> Self {
        GainsSpec {
            lambda: g.lambda.into(),
            k_s: g.k_s.into(),
            phi: g.phi,
        }
    }
}

impl Default for SmcGains {
    /// Tube radius `φ/λ_min(Λ) = 1 m`; `λ_min(K_s)` clears the default
    /// disturbance bound `d_max/λ_min(M) ≈ 0.017 m/s²` by a factor above two.
    fn default() -> Self {
        SmcGains::new(
            Vec3::new(0.02, 0.02, 0.05),
            Vec3::new(0.04, 0.04, 0.04),
            0.02,
        )
        .expect("default gains are valid")
    }
}

impl SmcGains {
    pub fn new(lambda: Vec3, k_s: Vec3, phi: f64) -> Result<Self> {
        if lambda.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::config("gains.lambda", "diagonal must be strictly positive"));
        }
        if k_s.iter().any(|x| !(*x > 0.0 && x.is_finite())) {
            return Err(Error::config("gains.k_s", "diagonal must be strictly positive"));
        }
        if !(phi > 0.0 && phi.is_finite()) {
            return Err(Error::config("gains.phi", "must be positive"));
        }
        Ok(SmcGains { lambda, k_s, phi })
    }

    pub fn lambda(&self) -> &Vec3 {
        &self.lambda
    }

    pub fn k_s(&self) -> &Vec3 {
        &self.k_s
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn with_phi(&self, phi: f64) -> Result<Self> {
        Self::new(self.lambda, self.k_s, phi)
    }

    pub fn with_k_s(&self, k_s: Vec3) -> Result<Self> {
        Self::new(self.lambda, k_s, self.phi)
    }

    pub fn lambda_min(&self) -> f64 {
        self.lambda.min()
    }

    pub fn k_s_min(&self) -> f64 {
        self.k_s.min()
    }

    /// Steady-state position error bound `φ / λ_min(Λ)`.
    pub fn tube_radius(&self) -> f64 {
        self.phi / self.lambda_min()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceSignal {
    pub eta_d: Vec3,
    pub etadot_d: Vec3,
    pub nu_d: Vec3,
    pub nudot_d: Vec3,
}

impl ReferenceSignal {
    /// Point regulation to a fixed goal pose: all reference rates are zero.
    pub fn regulation(goal: Vec3) -> Self {
        ReferenceSignal {
            eta_d: goal,
            etadot_d: Vec3::zeros(),
            nu_d: Vec3::zeros(),
            nudot_d: Vec3::zeros(),
        }
    }
}

/// `η − η_d` with the heading component wrapped to `(−π, π]`.
pub fn pose_error(eta: &Vec3, eta_d: &Vec3) -> Vec3 {
    let mut e = eta - eta_d;
    e.z = wrap_angle(e.z);
    e
}

pub fn sliding_surface(gains: &SmcGains, state: &VesselState, reference: &ReferenceSignal) -> Vec3 {
    let e_v = state.nu - reference.nu_d;
    let e_p = pose_error(&state.eta, &reference.eta_d);
    e_v + gains.lambda.component_mul(&e_p)
}

/// Elementwise `clamp(x/φ, −1, 1)`.
pub fn sat(x: &Vec3, phi: f64) -> Vec3 {
    x.map(|v| {
        if v.abs() <= phi {
            v / phi
        } else {
            v.signum()
        }
    })
}

pub fn smc_wrench(
    params: &VesselParams,
    gains: &SmcGains,
    state: &VesselState,
    reference: &ReferenceSignal,
) -> Wrench {
    let s = sliding_surface(gains, state, reference);
    let lam = Mat3::from_diagonal(&gains.lambda);
    let switching = -gains.k_s.component_mul(&sat(&s, gains.phi));
    let accel = switching + reference.nudot_d - lam * rotation(state.eta.z) * state.nu
        + lam * reference.etadot_d;
    velocity_forces(params, &state.nu) + params.mass_matrix() * accel
}
