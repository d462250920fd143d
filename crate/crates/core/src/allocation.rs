//! Thrust allocation for three azimuth thrusters.
//!
//! Each thruster delivers a planar force `[F_x, F_y]` at a body-frame lever arm
//! `[l_x, l_y]`. Stacking the six force components gives the linear wrench map
//! `τ = B f` with `B` the 3×6 configuration matrix. Allocation uses the
//! minimum-norm right inverse `Bᵀ(BBᵀ)⁻¹` followed by radial saturation of each
//! thruster to `f_max`.

use nalgebra::{SMatrix, SVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::filter::ActuatorBox;
use crate::math::{Mat3, Vec3, Wrench};

pub type AllocationMatrix = SMatrix<f64, 3, 6>;
pub type StackedForces = SVector<f64, 6>;

/// Default thruster force limit, 20 kN per unit.
pub const DEFAULT_F_MAX: f64 = 20.0e3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "LayoutSpec", into = "LayoutSpec")]
pub struct ThrusterLayout {
    positions: [[f64; 2]; 3],
    f_max: f64,
    force_factor: f64,
    moment_factor: f64,
    matrix: AllocationMatrix,
    pinv: SMatrix<f64, 6, 3>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayoutSpec {
    /// Body-frame lever arms `[l_x, l_y]` in metres.
    positions: [[f64; 2]; 3],
    /// Per-thruster force limit in newtons.
    f_max: f64,
    /// `c_f` in the wrench box, fraction of `3·f_max` usable on each force axis.
    #[serde(default = "default_force_factor")]
    force_factor: f64,
    /// `c_n` in the wrench box, fraction of `Σ‖l_i‖·f_max` usable as yaw moment.
    #[serde(default = "default_moment_factor")]
    moment_factor: f64,
}

fn default_force_factor() -> f64 {
    ThrusterLayout::DEFAULT_FORCE_FACTOR
}

fn default_moment_factor() -> f64 {
    ThrusterLayout::DEFAULT_MOMENT_FACTOR
}

impl TryFrom<LayoutSpec> for ThrusterLayout {
    type Error = Error;

    fn try_from(spec: LayoutSpec) -> Result<Self> {
        ThrusterLayout::with_box_factors(
            spec.positions,
            spec.f_max,
            spec.force_factor,
            spec.moment_factor,
        )
    }
}

impl From<ThrusterLayout> for LayoutSpec {
    fn from(layout: ThrusterLayout) -> Self {
        LayoutSpec {
            positions: layout.positions,
            f_max: layout.f_max,
            force_factor: layout.force_factor,
            moment_factor: layout.moment_factor,
        }
    }
}

impl Default for ThrusterLayout {
    fn default() -> Self {
        Self::isosceles(20.0, 25.0, DEFAULT_F_MAX).expect("default layout is valid")
    }
}

impl ThrusterLayout {
    // Largest round values for which every wrench in the box is allocatable
    // without saturation on the default isosceles layout (see `box_is_allocatable`).
    pub const DEFAULT_FORCE_FACTOR: f64 = 0.5;
    pub const DEFAULT_MOMENT_FACTOR: f64 = 0.25;

    pub fn new(positions: [[f64; 2]; 3], f_max: f64) -> Result<Self> {
        Self::with_box_factors(
            positions,
            f_max,
            Self::DEFAULT_FORCE_FACTOR,
            Self::DEFAULT_MOMENT_FACTOR,
        )
    }

    pub fn with_box_factors(
        positions: [[f64; 2]; 3],
        f_max: f64,
        force_factor: f64,
        moment_factor: f64,
    ) -> Result<Self> {
        if positions.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::config("thrusters.positions", "must be finite"));
        }
        if !(f_max >= 0.0 && f_max.is_finite()) {
            return Err(Error::config("thrusters.f_max", "must be finite and >= 0"));
        }
        for (name, c) in [("force_factor", force_factor), ("moment_factor", moment_factor)] {
            if !(c > 0.0 && c <= 1.0) {
                return Err(Error::config(format!("thrusters.{name}"), "must lie in (0, 1]"));
            }
        }
        let matrix = build_matrix(&positions);
        let gram: Mat3 = matrix * matrix.transpose();
        let eig = gram.symmetric_eigenvalues();
        let (lo, hi) = (eig.min(), eig.max());
        if !(lo > 1e-9 * hi.max(1.0)) {
            return Err(Error::config(
                "thrusters.positions",
                "configuration matrix is rank deficient",
            ));
        }
        let gram_inv = gram
            .try_inverse()
            .ok_or_else(|| Error::config("thrusters.positions", "singular configuration"))?;
        let pinv = matrix.transpose() * gram_inv;
        Ok(ThrusterLayout {
            positions,
            f_max,
            force_factor,
            moment_factor,
            matrix,
            pinv,
        })
    }

    /// Thrusters at the vertices of an isosceles triangle whose centroid sits at
    /// the body origin: apex forward on the x axis, base of width `base` aft.
    pub fn isosceles(base: f64, height: f64, f_max: f64) -> Result<Self> {
        let apex = 2.0 * height / 3.0;
        let aft = -height / 3.0;
        Self::new(
            [[apex, 0.0], [aft, base / 2.0], [aft, -base / 2.0]],
            f_max,
        )
    }

    pub fn positions(&self) -> &[[f64; 2]; 3] {
        &self.positions
    }

    pub fn f_max(&self) -> f64 {
        self.f_max
    }

    pub fn force_factor(&self) -> f64 {
        self.force_factor
    }

    pub fn moment_factor(&self) -> f64 {
        self.moment_factor
    }

    pub fn with_f_max(&self, f_max: f64) -> Result<Self> {
        Self::with_box_factors(self.positions, f_max, self.force_factor, self.moment_factor)
    }

    pub fn allocation_matrix(&self) -> &AllocationMatrix {
        &self.matrix
    }

    /// Wrench produced by a stacked force vector `[F_x0, F_y0, F_x1, ...]`.
    pub fn wrench(&self, forces: &StackedForces) -> Wrench {
        self.matrix * forces
    }

    /// Minimum-norm force distribution, then per-thruster radial saturation.
    pub fn allocate(&self, tau_cmd: &Wrench) -> AllocationResult {
        let raw = self.pinv * tau_cmd;
        let mut forces = [Vector2::zeros(); 3];
        let mut saturated = false;
        for (i, f) in forces.iter_mut().enumerate() {
            let mut v = Vector2::new(raw[2 * i], raw[2 * i + 1]);
            let mag = v.norm();
            if mag > self.f_max {
                saturated = true;
                v *= if mag > 0.0 { self.f_max / mag } else { 0.0 };
            }
            *f = v;
        }
        let command = ThrusterCommand { forces };
        let realized = self.wrench(&command.stacked());
        AllocationResult {
            command,
            realized,
            saturated,
        }
    }

    /// Conservative axis-aligned inner box of the attainable wrench set.
    pub fn wrench_box(&self) -> ActuatorBox {
        let arm_sum: f64 = self
            .positions
            .iter()
            .map(|p| (p[0] * p[0] + p[1] * p[1]).sqrt())
            .sum();
        let f = self.force_factor * 3.0 * self.f_max;
        let n = self.moment_factor * arm_sum * self.f_max;
        ActuatorBox::symmetric(Vec3::new(f, f, n))
    }

    /// Worst-case thruster load over a box, as a fraction of `f_max`.
    ///
    /// The minimum-norm forces are linear in τ, so each thruster's force
    /// magnitude is convex over the box and peaks at one of its 8 vertices.
    pub fn box_load(&self, bounds: &ActuatorBox) -> f64 {
        let mut worst: f64 = 0.0;
        for corner in 0..8 {
            let tau = Vec3::from_fn(|k, _| {
                if corner >> k & 1 == 1 {
                    bounds.max[k]
                } else {
                    bounds.min[k]
                }
            });
            let raw = self.pinv * tau;
            for i in 0..3 {
                worst = worst.max(Vector2::new(raw[2 * i], raw[2 * i + 1]).norm());
            }
        }
        if self.f_max > 0.0 {
            worst / self.f_max
        } else if worst > 0.0 {
            f64::INFINITY
        } else {
            0.0
        }
    }

    /// True when every wrench in `bounds` is allocatable without saturation.
    pub fn box_is_allocatable(&self, bounds: &ActuatorBox) -> bool {
        self.box_load(bounds) <= 1.0 + 1e-12
    }
}

fn build_matrix(positions: &[[f64; 2]; 3]) -> AllocationMatrix {
    let mut b = AllocationMatrix::zeros();
    for (i, p) in positions.iter().enumerate() {
        let (lx, ly) = (p[0], p[1]);
        b[(0, 2 * i)] = 1.0;
        b[(1, 2 * i + 1)] = 1.0;
        b[(2, 2 * i)] = -ly;
        b[(2, 2 * i + 1)] = lx;
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThrusterCommand {
    pub forces: [Vector2<f64>; 3],
}

impl ThrusterCommand {
    pub fn stacked(&self) -> StackedForces {
        StackedForces::from_fn(|k, _| self.forces[k / 2][k % 2])
    }

    pub fn magnitudes(&self) -> [f64; 3] {
        self.forces.map(|f| f.norm())
    }

    /// Azimuth of each thruster force in the body frame, `atan2(F_y, F_x)`.
    pub fn azimuths(&self) -> [f64; 3] {
        self.forces.map(|f| f.y.atan2(f.x))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AllocationResult {
    pub command: ThrusterCommand,
    pub realized: Wrench,
    pub saturated: bool,
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn matrix_columns() {
        let layout = ThrusterLayout::new([[0.0, 0.0], [0.0, 2.0], [5.0, -1.0]], 1.0).unwrap();
        let mut f = StackedForces::zeros();
        assert_eq!(layout.wrench(&f), Vec3::zeros());
        f[0] = 1.0;
        assert_eq!(layout.wrench(&f), Vec3::new(1.0, 0.0, 0.0));
        let mut f = StackedForces::zeros();
        f[2] = 1.0;
        assert_eq!(layout.wrench(&f), Vec3::new(1.0, 0.0, -2.0));
    }

    #[test]
    fn collinear_through_origin_rejected() {
        // Colocated thrusters at the origin cannot produce a yaw moment.
        let err = ThrusterLayout::new([[0.0, 0.0], [0.0, 0.0], [0.0, 0.0]], 1.0);
        assert!(err.is_err());
    }

    #[test]
    fn zero_command_zero_forces() {
        let layout = ThrusterLayout::default();
        let r = layout.allocate(&Vec3::zeros());
        assert_eq!(r.command.magnitudes(), [0.0; 3]);
        assert_eq!(r.realized, Vec3::zeros());
        assert!(!r.saturated);
    }

    #[test]
    fn surge_splits_equally() {
        let layout = ThrusterLayout::default();
        let r = layout.allocate(&Vec3::new(3000.0, 0.0, 0.0));
        for f in r.command.forces {
            assert!((f.x - 1000.0).abs() < 1e-9);
            assert!(f.y.abs() < 1e-9);
        }
        assert!((r.realized - Vec3::new(3000.0, 0.0, 0.0)).norm() < 1e-9);
    }

    #[test]
    fn surge_overload_saturates_each_thruster() {
        let layout = ThrusterLayout::default();
        let r = layout.allocate(&Vec3::new(90.0e3, 0.0, 0.0));
        assert!(r.saturated);
        for m in r.command.magnitudes() {
            assert!((m - 20.0e3).abs() < 1e-6);
        }
        assert!((r.realized.x - 60.0e3).abs() < 1e-6);
    }

    #[test]
    fn unit_box_factors_give_full_surge() {
        let layout = ThrusterLayout::with_box_factors(
            *ThrusterLayout::default().positions(),
            20.0e3,
            1.0,
            1.0,
        )
        .unwrap();
        let b = layout.wrench_box();
        assert_eq!(b.max.x, 60.0e3);
        // τ = [60 kN, 0, 0] is attainable: every thruster at full surge.
        let r = layout.allocate(&Vec3::new(60.0e3, 0.0, 0.0));
        assert!((r.realized.x - 60.0e3).abs() < 1e-6);
    }

    #[test]
    fn zero_force_limit_zero_box() {
        let layout = ThrusterLayout::default().with_f_max(0.0).unwrap();
        let b = layout.wrench_box();
        assert_eq!(b.max, Vec3::zeros());
        assert_eq!(b.min, Vec3::zeros());
    }

    #[test]
    fn default_box_is_sound_by_sampling() {
        let layout = ThrusterLayout::default();
        let b = layout.wrench_box();
        assert!(layout.box_is_allocatable(&b));
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let tau = Vec3::from_fn(|k, _| rng.random_range(b.min[k]..=b.max[k]));
            let r = layout.allocate(&tau);
            assert!(!r.saturated, "tau {tau:?} saturates");
            assert!((r.realized - tau).norm() < 1e-9 * (1.0 + tau.norm()));
        }
    }

    #[test]
    fn pseudo_inverse_is_minimum_norm() {
        let layout = ThrusterLayout::default();
        let b = layout.allocation_matrix();
        // I − B⁺B projects onto the null space of B.
        let null = nalgebra::SMatrix::<f64, 6, 6>::identity() - layout.pinv * b;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let tau = Vec3::new(
                rng.random_range(-1e4..1e4),
                rng.random_range(-1e4..1e4),
                rng.random_range(-1e5..1e5),
            );
            let f0 = layout.pinv * tau;
            for _ in 0..3 {
                let dir = null * StackedForces::from_fn(|_, _| rng.random_range(-1.0..1.0));
                let step = rng.random_range(-500.0..500.0);
                let f = f0 + dir * step;
                assert!((layout.wrench(&f) - tau).norm() < 1e-6 * (1.0 + tau.norm()));
                assert!(f.norm() >= f0.norm() - 1e-9);
            }
        }
    }
}
