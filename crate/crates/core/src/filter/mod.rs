//! Safety filtering of the nominal wrench.
//!
//! [`project`] is the online filter: clip to the actuator box, then sweep the
//! barrier half-spaces with relaxed projections, re-clipping after each step.
//! [`qp_oracle`] solves the exact least-distance QP by active-set enumeration and
//! is only used for testing and benchmarking.

mod oracle;
mod pipeline;
mod projection;
pub mod suite;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{vec3, Vec3, Wrench};

pub use oracle::qp_oracle;
pub use pipeline::{filter_pipeline, ControlContext, FilterMode, PipelineOutput};
pub use projection::{clip_box, max_violation, project, DEGENERATE_ROW_NORM};

/// Half-space `aᵀτ ≥ b` in wrench space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSpaceConstraint {
    pub a: Vec3,
    pub b: f64,
    pub obstacle_id: usize,
}

impl HalfSpaceConstraint {
    pub fn new(a: Vec3, b: f64) -> Self {
        HalfSpaceConstraint { a, b, obstacle_id: 0 }
    }

    /// `b − aᵀτ`; positive when violated.
    pub fn violation(&self, tau: &Wrench) -> f64 {
        self.b - self.a.dot(tau)
    }

    /// `aᵀτ − b`; non-negative when satisfied.
    pub fn residual(&self, tau: &Wrench) -> f64 {
        -self.violation(tau)
    }
}

/// Componentwise actuator bounds `τ_min ≤ τ ≤ τ_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BoxSpec", into = "BoxSpec")]
pub struct ActuatorBox {
    pub min: Wrench,
    pub max: Wrench,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BoxSpec {
    min: [f64; 3],
    max: [f64; 3],
}

impl TryFrom<BoxSpec> for ActuatorBox {
    type Error = Error;
    fn try_from(b: BoxSpec) -> Result<Self> {
        ActuatorBox::new(vec3(b.min), vec3(b.max))
    }
}

impl From<ActuatorBox> for BoxSpec {
    fn from(b: ActuatorBox) -> Self {
        BoxSpec {
            min: b.min.into(),
            max: b.max.into(),
        }
    }
}

impl ActuatorBox {
    pub fn new(min: Wrench, max: Wrench) -> Result<Self> {
        if min.iter().chain(max.iter()).any(|x| x.is_nan()) {
            return Err(Error::config("box", "bounds must not be NaN"));
        }
        if (0..3).any(|k| min[k] > max[k]) {
            return Err(Error::config("box", "tau_min must not exceed tau_max"));
        }
        Ok(ActuatorBox { min, max })
    }

    pub fn symmetric(half_width: Wrench) -> Self {
        ActuatorBox {
            min: -half_width,
            max: half_width,
        }
    }

    pub fn unbounded() -> Self {
        Self::symmetric(Vec3::repeat(f64::INFINITY))
    }

    pub fn contains(&self, tau: &Wrench) -> bool {
        (0..3).all(|k| tau[k] >= self.min[k] && tau[k] <= self.max[k])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FilterConfig {
    /// Relaxation γ in `(0, 1]`.
    pub gamma: f64,
    /// Maximum number of sweeps K.
    pub sweeps: usize,
    /// Residual tolerance, in the units of `b` (m²/s²).
    pub tol: f64,
}

impl Default for FilterConfig {
    fn default() -> Self {
        FilterConfig {
            gamma: 1.0,
            sweeps: 20,
            tol: 1e-6,
        }
    }
}

impl FilterConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma <= 1.0) {
            return Err(Error::config("filter.gamma", "must lie in (0, 1]"));
        }
        if self.sweeps < 1 {
            return Err(Error::config("filter.sweeps", "must be >= 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::config("filter.tol", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterResult {
    pub tau_safe: Wrench,
    /// True when the result differs from the clip-only wrench.
    pub modified: bool,
    pub sweeps_used: usize,
    /// Largest `b − aᵀτ_safe` over all rows, floored at zero.
    pub max_residual: f64,
    pub feasible: bool,
}
