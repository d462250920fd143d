//! 3-DOF horizontal-plane vessel model.
//!
//! Kinematics `η̇ = R(ψ)ν` and dynamics `Mν̇ + C(ν)ν + D(ν)ν = τ + d`, with
//! `η = [x, y, ψ]` in the world frame and `ν = [u, v, r]` in the body frame.

use nalgebra::Vector6;
use serde::{Deserialize, Serialize};

use crate::allocation::ThrusterLayout;
use crate::error::{Error, Result};
use crate::math::{is_finite3, mat3_from_rows, mat3_to_rows, min_eigenvalue, vec3, wrap_angle, Mat3, Vec3, Wrench};

/// Platform mass in kg.
pub const DEFAULT_MASS: f64 = 425.0e3;
/// Added mass as a fraction of the rigid-body diagonal.
pub const DEFAULT_ADDED_MASS_RATIO: f64 = 0.10;
/// Open-loop linear decay time constant for each axis, in seconds.
pub const DEFAULT_DECAY_TIME: f64 = 50.0;
/// Quadratic damping per unit speed, as a fraction of the linear coefficient.
pub const DEFAULT_QUAD_RATIO: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "StateSpec", into = "StateSpec")]
pub struct VesselState {
    /// World-frame pose `[x m, y m, ψ rad]`, ψ wrapped to `(-π, π]`.
    pub eta: Vec3,
    /// Body velocity `[u m/s, v m/s, r rad/s]`.
    pub nu: Vec3,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateSpec {
    eta: [f64; 3],
    #[serde(default)]
    nu: [f64; 3],
}

impl TryFrom<StateSpec> for VesselState {
    type Error = Error;

    fn try_from(spec: StateSpec) -> Result<Self> {
        let state = VesselState::new(vec3(spec.eta), vec3(spec.nu));
        if !state.is_finite() {
            return Err(Error::config("state", "all components must be finite"));
        }
        Ok(state)
    }
}

impl From<VesselState> for StateSpec {
    fn from(s: VesselState) -> Self {
        StateSpec {
            eta: s.eta.into(),
            nu: s.nu.into(),
        }
    }
}

impl VesselState {
    pub fn new(mut eta: Vec3, nu: Vec3) -> Self {
        eta.z = wrap_angle(eta.z);
        VesselState { eta, nu }
    }

    pub fn at_rest(eta: Vec3) -> Self {
        Self::new(eta, Vec3::zeros())
    }

    pub fn is_finite(&self) -> bool {
        is_finite3(&self.eta) && is_finite3(&self.nu)
    }

    pub fn heading(&self) -> f64 {
        self.eta.z
    }

    fn to_vector(self) -> Vector6<f64> {
        Vector6::new(
            self.eta.x, self.eta.y, self.eta.z, self.nu.x, self.nu.y, self.nu.z,
        )
    }

    fn from_vector(x: &Vector6<f64>) -> Self {
        Self::new(Vec3::new(x[0], x[1], x[2]), Vec3::new(x[3], x[4], x[5]))
    }
}

/// Rigid-body + hydrodynamic parameters.
///
/// `M` must be symmetric positive definite. Damping is
/// `D(ν) = D_lin + diag(D_quad ∘ |ν|)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ParamsSpec", into = "ParamsSpec")]
pub struct VesselParams {
    mass: f64,
    mass_matrix: Mat3,
    mass_inv: Mat3,
    d_lin: Mat3,
    d_quad: Vec3,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ParamsSpec {
    mass: f64,
    /// Row-major inertia plus added mass.
    mass_matrix: [[f64; 3]; 3],
    /// Row-major linear damping.
    d_lin: [[f64; 3]; 3],
    d_quad: [f64; 3],
}

impl TryFrom<ParamsSpec> for VesselParams {
    type Error = Error;

    fn try_from(spec: ParamsSpec) -> Result<Self> {
        VesselParams::new(
            spec.mass,
            mat3_from_rows(&spec.mass_matrix),
            mat3_from_rows(&spec.d_lin),
            vec3(spec.d_quad),
        )
    }
}

impl From<VesselParams> for ParamsSpec {
    fn from(p: VesselParams) -> Self {
        ParamsSpec {
            mass: p.mass,
            mass_matrix: mat3_to_rows(&p.mass_matrix),
            d_lin: mat3_to_rows(&p.d_lin),
            d_quad: p.d_quad.into(),
        }
    }
}

impl Default for VesselParams {
    fn default() -> Self {
        Self::from_geometry(DEFAULT_MASS, &ThrusterLayout::default())
            .expect("default vessel parameters are valid")
    }
}

impl VesselParams {
    pub fn new(mass: f64, mass_matrix: Mat3, d_lin: Mat3, d_quad: Vec3) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::config("vessel.mass", "must be positive and finite"));
        }
        if mass_matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("vessel.mass_matrix", "must be finite"));
        }
        let asym = (mass_matrix - mass_matrix.transpose()).abs().max();
        if asym > 1e-9 * mass_matrix.abs().max() {
            return Err(Error::config("vessel.mass_matrix", "must be symmetric"));
        }
        if !(min_eigenvalue(&mass_matrix) > 0.0) {
            return Err(Error::config("vessel.mass_matrix", "must be positive definite"));
        }
        if d_lin.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("vessel.d_lin", "must be finite"));
        }
        // D_lin enters only through νᵀD_linν, so its symmetric part decides passivity.
        let sym = (d_lin + d_lin.transpose()) * 0.5;
        if min_eigenvalue(&sym) < -1e-12 * d_lin.abs().max() {
            return Err(Error::config("vessel.d_lin", "symmetric part must be positive semi-definite"));
        }
        if d_quad.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::config("vessel.d_quad", "coefficients must be finite and >= 0"));
        }
        let mass_inv = mass_matrix
            .try_inverse()
            .ok_or_else(|| Error::config("vessel.mass_matrix", "singular"))?;
        Ok(VesselParams {
            mass,
            mass_matrix,
            mass_inv,
            d_lin,
            d_quad,
        })
    }

    /// Default parameter set derived from the mass and thruster triangle.
    ///
    /// Yaw inertia is that of a uniform triangular lamina spanning the thruster
    /// vertices, `m(a² + b² + c²)/36` about its centroid. Added mass is 10% of
    /// each rigid-body diagonal entry, and linear damping gives a 50 s
    /// open-loop decay time constant on each axis.
    pub fn from_geometry(mass: f64, layout: &ThrusterLayout) -> Result<Self> {
        let p = layout.positions();
        let side2 = |i: usize, j: usize| (p[i][0] - p[j][0]).powi(2) + (p[i][1] - p[j][1]).powi(2);
        let iz = mass * (side2(0, 1) + side2(1, 2) + side2(2, 0)) / 36.0;
        let k = 1.0 + DEFAULT_ADDED_MASS_RATIO;
        let m_diag = Vec3::new(k * mass, k * mass, k * iz);
        let d_diag = m_diag / DEFAULT_DECAY_TIME;
        Self::new(
            mass,
            Mat3::from_diagonal(&m_diag),
            Mat3::from_diagonal(&d_diag),
            d_diag * DEFAULT_QUAD_RATIO,
        )
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn mass_matrix(&self) -> &Mat3 {
        &self.mass_matrix
    }

    pub fn mass_inv(&self) -> &Mat3 {
        &self.mass_inv
    }

    pub fn d_lin(&self) -> &Mat3 {
        &self.d_lin
    }

    pub fn d_quad(&self) -> &Vec3 {
        &self.d_quad
    }

    pub fn min_mass_eigenvalue(&self) -> f64 {
        min_eigenvalue(&self.mass_matrix)
    }

    /// Kinetic energy `½νᵀMν`.
    pub fn kinetic_energy(&self, nu: &Vec3) -> f64 {
        0.5 * nu.dot(&(self.mass_matrix * nu))
    }
}

/// `R(ψ)`, rotation from body to world frame about the vertical axis.
pub fn rotation(psi: f64) -> Mat3 {
    let (s, c) = psi.sin_cos();
    Mat3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0)
}

/// Coriolis-centripetal matrix built from the generalized momentum `p = Mν`:
///
/// ```text
/// C(ν) = [  0    0   -p₂ ]
///        [  0    0    p₁ ]
///        [  p₂  -p₁   0  ]
/// ```
///
/// `C` is skew-symmetric, so `νᵀ(C + Cᵀ)ν = 0` holds for every `ν`.
pub fn coriolis(params: &VesselParams, nu: &Vec3) -> Mat3 {
    let p = params.mass_matrix * nu;
    Mat3::new(0.0, 0.0, -p.y, 0.0, 0.0, p.x, p.y, -p.x, 0.0)
}

/// `D(ν) = D_lin + diag(D_quad,i · |ν_i|)`.
pub fn damping(params: &VesselParams, nu: &Vec3) -> Mat3 {
    params.d_lin + Mat3::from_diagonal(&params.d_quad.component_mul(&nu.abs()))
}

/// `C(ν)ν + D(ν)ν`, the velocity-dependent force the actuators must overcome.
pub fn velocity_forces(params: &VesselParams, nu: &Vec3) -> Vec3 {
    (coriolis(params, nu) + damping(params, nu)) * nu
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDerivative {
    pub eta_dot: Vec3,
    pub nu_dot: Vec3,
}

pub fn state_derivative(
    params: &VesselParams,
    state: &VesselState,
    tau: &Wrench,
    d: &Vec3,
) -> StateDerivative {
    let eta_dot = rotation(state.eta.z) * state.nu;
    let nu_dot = params.mass_inv * (tau + d - velocity_forces(params, &state.nu));
    StateDerivative { eta_dot, nu_dot }
}

fn derivative_vector(params: &VesselParams, x: &Vector6<f64>, tau: &Wrench, d: &Vec3) -> Vector6<f64> {
    let eta = Vec3::new(x[0], x[1], x[2]);
    let nu = Vec3::new(x[3], x[4], x[5]);
    // ψ is left unwrapped inside a step; only the final state is wrapped.
    let eta_dot = rotation(eta.z) * nu;
    let nu_dot = params.mass_inv * (tau + d - velocity_forces(params, &nu));
    Vector6::new(eta_dot.x, eta_dot.y, eta_dot.z, nu_dot.x, nu_dot.y, nu_dot.z)
}

/// One classical RK4 step with `τ` and `d` held over the interval.
pub fn integrate_step(
    params: &VesselParams,
    state: &VesselState,
    tau: &Wrench,
    d: &Vec3,
    dt: f64,
) -> Result<VesselState> {
    debug_assert!(dt > 0.0);
    let x = state.to_vector();
    let k1 = derivative_vector(params, &x, tau, d);
    let k2 = derivative_vector(params, &(x + k1 * (0.5 * dt)), tau, d);
    let k3 = derivative_vector(params, &(x + k2 * (0.5 * dt)), tau, d);
    let k4 = derivative_vector(params, &(x + k3 * dt), tau, d);
    let next = x + (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    let out = VesselState::from_vector(&next);
    if !out.is_finite() {
        return Err(Error::IntegrationFault {
            eta: state.eta,
            nu: state.nu,
        });
    }
    Ok(out)
}
