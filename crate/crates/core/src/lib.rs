//! Safe sliding-mode control for an over-actuated 3-DOF marine surface vessel.
//!
//! The crate is organised bottom-up:
//!
//! * [`dynamics`]: kinematics, rigid-body + hydrodynamic model and an RK4 integrator.
//! * [`disturbance`]: seeded, bounded wind / wave / current force generators.
//! * [`smc`]: sliding surface and the boundary-layer sliding-mode wrench.
//! * [`hocbf`]: circular-obstacle barrier functions and their linear wrench constraints.
//! * [`filter`]: the sequential relaxed-projection safety filter and an exact
//!   active-set QP oracle used for testing and benchmarking.
//! * [`allocation`]: pseudo-inverse thrust allocation over three azimuth thrusters.
//! * [`sim`]: scenario configuration, closed-loop driver, logs, metrics and the
//!   empirical stability / safety checks.
//!
//! Everything is deterministic given a [`sim::ScenarioConfig`] and its seed.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod allocation;
pub mod disturbance;
pub mod dynamics;
mod error;
pub mod filter;
pub mod hocbf;
pub mod math;
pub mod sim;
pub mod smc;

pub use allocation::{AllocationResult, ThrusterCommand, ThrusterLayout};
pub use disturbance::{ChannelConfig, DisturbanceConfig, DisturbanceProcess, DisturbanceSample};
pub use dynamics::{VesselParams, VesselState};
pub use error::{Error, Result};
pub use filter::{ActuatorBox, FilterConfig, FilterResult, HalfSpaceConstraint};
pub use hocbf::{AlphaSchedule, BarrierParams, Obstacle};
pub use math::{Mat3, Vec3, Wrench};
pub use sim::{RunMetrics, ScenarioConfig, TrajectoryLog};
pub use smc::{ReferenceSignal, SmcGains};
