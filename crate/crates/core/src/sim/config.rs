use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::allocation::ThrusterLayout;
use crate::disturbance::DisturbanceConfig;
use crate::dynamics::{VesselParams, VesselState};
use crate::error::{Error, Result};
use crate::filter::FilterConfig;
use crate::hocbf::{h_value, BarrierParams, Obstacle};
use crate::math::{vec3, Vec3};
use crate::smc::SmcGains;

/// Additive Gaussian noise on the pose fed to the controller.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseNoise {
    /// Standard deviation per pose component `[m, m, rad]`.
    pub sigma: [f64; 3],
}

/// Complete description of one closed-loop run. Loaded from JSON; every
/// section is optional and falls back to its default, unknown keys are errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScenarioConfig {
    pub vessel: VesselParams,
    pub thrusters: ThrusterLayout,
    pub gains: SmcGains,
    pub barrier: BarrierParams,
    pub filter: FilterConfig,
    pub disturbance: DisturbanceConfig,
    pub obstacles: Vec<Obstacle>,
    pub initial: VesselState,
    /// Goal pose `[x m, y m, ψ rad]`.
    pub goal: [f64; 3],
    /// Integration and control period, s.
    pub dt: f64,
    /// Simulated duration, s.
    pub horizon: f64,
    pub seed: u64,
    pub pose_noise: Option<PoseNoise>,
    /// Permits `h(0) < 0`; the run is then outside the safety guarantee.
    pub allow_unsafe_start: bool,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        let disturbance = DisturbanceConfig::default();
        ScenarioConfig {
            vessel: VesselParams::default(),
            thrusters: ThrusterLayout::default(),
            gains: SmcGains::default(),
            // The barrier rows are tightened against the full disturbance bound.
            barrier: BarrierParams {
                disturbance_margin: disturbance.d_max,
                ..BarrierParams::default()
            },
            filter: FilterConfig::default(),
            disturbance,
            obstacles: vec![Obstacle {
                center: [80.0, 13.0],
                radius: 12.0,
            }],
            initial: VesselState::at_rest(Vec3::zeros()),
            goal: [160.0, 0.0, 0.0],
            dt: 0.1,
            horizon: 600.0,
            seed: 1,
            pose_noise: None,
            allow_unsafe_start: false,
        }
    }
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: ScenarioConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn goal(&self) -> Vec3 {
        vec3(self.goal)
    }

    /// Number of integration steps; the log holds one more row than this.
    pub fn steps(&self) -> usize {
        (self.horizon / self.dt).round() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::config("dt", "must be positive"));
        }
        if !(self.horizon >= self.dt && self.horizon.is_finite()) {
            return Err(Error::config("horizon", "must be at least dt"));
        }
        if self.goal.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("goal", "must be finite"));
        }
        self.barrier.validate()?;
        self.filter.validate()?;
        self.disturbance.validate()?;
        for (i, o) in self.obstacles.iter().enumerate() {
            o.validate(i)?;
        }
        if let Some(noise) = &self.pose_noise {
            if noise.sigma.iter().any(|s| !(s.is_finite() && *s >= 0.0)) {
                return Err(Error::config("pose_noise.sigma", "must be finite and >= 0"));
            }
        }
        Ok(())
    }

    /// Rejects initial states inside an obstacle unless explicitly allowed.
    pub fn check_initial_safety(&self) -> Result<()> {
        if self.allow_unsafe_start {
            return Ok(());
        }
        for (i, o) in self.obstacles.iter().enumerate() {
            let h = h_value(o, &self.initial.eta);
            if h < 0.0 {
                return Err(Error::UnsafeStart { obstacle: i, h });
            }
        }
        Ok(())
    }

    /// Matched-disturbance gain margin `d_max / λ_min(M)`.
    pub fn equivalent_disturbance(&self) -> f64 {
        self.disturbance.d_max / self.vessel.min_mass_eigenvalue()
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        ScenarioConfig {
            seed,
            ..self.clone()
        }
    }
}
