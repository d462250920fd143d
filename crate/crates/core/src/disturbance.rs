//! Environmental disturbance forces (wind, wave, current).
//!
//! Each source is a constant mean force plus a zero-mean first-order
//! Gauss–Markov component per axis,
//!
//! ```text
//! x(t+Δ) = ρ x(t) + σ √(1 − ρ²) ξ,    ρ = exp(−Δ/T),  ξ ~ N(0, 1)
//! ```
//!
//! which is the exact discretization of an Ornstein–Uhlenbeck process with
//! stationary standard deviation `σ` and correlation time `T`. The summed force
//! is clipped radially so that `‖d‖ ≤ d_max` always.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::math::{mix_seed, vec3, Vec3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelConfig {
    /// Mean (drift) force `[N, N, N·m]`.
    pub mean: [f64; 3],
    /// Stationary standard deviation of the stochastic part, per axis.
    pub intensity: [f64; 3],
    /// Correlation time in seconds.
    pub correlation_time: f64,
}

impl ChannelConfig {
    pub fn zero() -> Self {
        ChannelConfig {
            mean: [0.0; 3],
            intensity: [0.0; 3],
            correlation_time: 1.0,
        }
    }

    pub fn constant(mean: [f64; 3]) -> Self {
        ChannelConfig {
            mean,
            ..Self::zero()
        }
    }

    fn validate(&self, name: &str) -> Result<()> {
        if self.mean.iter().any(|x| !x.is_finite()) {
            return Err(Error::config(format!("disturbance.{name}.mean"), "must be finite"));
        }
        if self.intensity.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
            return Err(Error::config(
                format!("disturbance.{name}.intensity"),
                "must be finite and >= 0",
            ));
        }
        if !(self.correlation_time > 0.0 && self.correlation_time.is_finite()) {
            return Err(Error::config(
                format!("disturbance.{name}.correlation_time"),
                "must be positive",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DisturbanceConfig {
    pub wind: ChannelConfig,
    /// Mean is the slow wave-drift force; the stochastic part models irregular waves.
    pub wave: ChannelConfig,
    pub current: ChannelConfig,
    /// Hard bound on `‖d‖` (mixed N / N·m Euclidean norm).
    pub d_max: f64,
}

impl Default for DisturbanceConfig {
    /// Peak `‖d‖` around 8 kN, roughly 13% of the three-thruster 60 kN budget.
    fn default() -> Self {
        DisturbanceConfig {
            wind: ChannelConfig {
                mean: [2000.0, 1200.0, 1500.0],
                intensity: [700.0, 700.0, 800.0],
                correlation_time: 20.0,
            },
            wave: ChannelConfig {
                mean: [1200.0, 800.0, 600.0],
                intensity: [500.0, 500.0, 500.0],
                correlation_time: 8.0,
            },
            current: ChannelConfig {
                mean: [800.0, 400.0, 300.0],
                intensity: [150.0, 150.0, 150.0],
                correlation_time: 120.0,
            },
            d_max: 8000.0,
        }
    }
}

impl DisturbanceConfig {
    pub fn calm() -> Self {
        DisturbanceConfig {
            wind: ChannelConfig::zero(),
            wave: ChannelConfig::zero(),
            current: ChannelConfig::zero(),
            d_max: 1.0,
        }
    }

    /// Same structure with every mean and intensity multiplied by `k`.
    pub fn scaled(&self, k: f64) -> Self {
        let s = |c: &ChannelConfig| ChannelConfig {
            mean: c.mean.map(|x| x * k),
            intensity: c.intensity.map(|x| x * k),
            correlation_time: c.correlation_time,
        };
        DisturbanceConfig {
            wind: s(&self.wind),
            wave: s(&self.wave),
            current: s(&self.current),
            d_max: self.d_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.wind.validate("wind")?;
        self.wave.validate("wave")?;
        self.current.validate("current")?;
        if !(self.d_max > 0.0 && self.d_max.is_finite()) {
            return Err(Error::config("disturbance.d_max", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DisturbanceSample {
    pub t: f64,
    pub total: Vec3,
    pub wind: Vec3,
    pub wave: Vec3,
    pub current: Vec3,
    /// True when the raw sum exceeded `d_max` and all components were scaled down.
    pub clipped: bool,
}

#[derive(Debug, Clone)]
struct GaussMarkov {
    mean: Vec3,
    sigma: Vec3,
    tau_c: f64,
    state: Vec3,
    rng: ChaCha8Rng,
}

impl GaussMarkov {
    fn new(cfg: &ChannelConfig, seed: u64) -> Self {
        GaussMarkov {
            mean: vec3(cfg.mean),
            sigma: vec3(cfg.intensity),
            tau_c: cfg.correlation_time,
            state: Vec3::zeros(),
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn normal3(&mut self) -> Vec3 {
        Vec3::from_fn(|_, _| StandardNormal.sample(&mut self.rng))
    }

    /// Draws the initial value from the stationary distribution.
    fn start(&mut self) {
        let xi = self.normal3();
        self.state = self.sigma.component_mul(&xi);
    }

    fn advance(&mut self, dt: f64) {
        let rho = (-dt / self.tau_c).exp();
        let gain = (1.0 - rho * rho).max(0.0).sqrt();
        let xi = self.normal3();
        self.state = self.state * rho + self.sigma.component_mul(&xi) * gain;
    }

    fn value(&self) -> Vec3 {
        self.mean + self.state
    }

    fn stochastic(&self) -> Vec3 {
        self.state
    }
}

/// Stateful, single-consumer disturbance generator.
#[derive(Debug, Clone)]
pub struct DisturbanceProcess {
    d_max: f64,
    wind: GaussMarkov,
    wave: GaussMarkov,
    current: GaussMarkov,
    last_t: Option<f64>,
    clip_events: u64,
}

impl DisturbanceProcess {
    pub fn new(config: &DisturbanceConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        Ok(DisturbanceProcess {
            d_max: config.d_max,
            wind: GaussMarkov::new(&config.wind, mix_seed(seed, 1)),
            wave: GaussMarkov::new(&config.wave, mix_seed(seed, 2)),
            current: GaussMarkov::new(&config.current, mix_seed(seed, 3)),
            last_t: None,
            clip_events: 0,
        })
    }

    pub fn d_max(&self) -> f64 {
        self.d_max
    }

    pub fn clip_events(&self) -> u64 {
        self.clip_events
    }

    /// Samples the disturbance at `t`. The first call may be at any `t ≥ 0`;
    /// every later call must be exactly one `dt` after the previous one.
    pub fn sample(&mut self, t: f64, dt: f64) -> Result<DisturbanceSample> {
        match self.last_t {
            None => {
                if !(t >= 0.0 && t.is_finite()) {
                    return Err(Error::DisturbanceOrder { expected: 0.0, got: t });
                }
                self.wind.start();
                self.wave.start();
                self.current.start();
            }
            Some(prev) => {
                let expected = prev + dt;
                if !(dt > 0.0) || (t - expected).abs() > 1e-9 * expected.abs().max(1.0) {
                    return Err(Error::DisturbanceOrder { expected, got: t });
                }
                self.wind.advance(dt);
                self.wave.advance(dt);
                self.current.advance(dt);
            }
        }
        self.last_t = Some(t);

        let mut wind = self.wind.value();
        let mut wave = self.wave.value();
        let mut current = self.current.value();
        let mut total = wind + wave + current;
        let norm = total.norm();
        let clipped = norm > self.d_max;
        if clipped {
            self.clip_events += 1;
            let mut k = self.d_max / norm;
            loop {
                total = wind * k + wave * k + current * k;
                if total.norm() <= self.d_max {
                    break;
                }
                k *= 1.0 - 1e-12;
            }
            wind *= k;
            wave *= k;
            current *= k;
            total = wind + wave + current;
        }
        Ok(DisturbanceSample {
            t,
            total,
            wind,
            wave,
            current,
            clipped,
        })
    }

    /// Zero-mean stochastic parts of each source at the last sample.
    pub fn stochastic_parts(&self) -> [Vec3; 3] {
        [
            self.wind.stochastic(),
            self.wave.stochastic(),
            self.current.stochastic(),
        ]
    }
}
