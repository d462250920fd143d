use super::{ActuatorBox, FilterConfig, FilterResult, HalfSpaceConstraint};
use crate::math::Wrench;

/// Rows with `‖a‖` below this are never used for an update step.
pub const DEGENERATE_ROW_NORM: f64 = 1e-9;

/// Componentwise `median(τ_min, τ, τ_max)`.
pub fn clip_box(bounds: &ActuatorBox, tau: &Wrench) -> Wrench {
    Wrench::from_fn(|k, _| tau[k].max(bounds.min[k]).min(bounds.max[k]))
}

/// Largest violation `b − aᵀτ` over the rows, floored at zero.
pub fn max_violation(constraints: &[HalfSpaceConstraint], tau: &Wrench) -> f64 {
    constraints
        .iter()
        .map(|c| c.violation(tau))
        .fold(0.0, f64::max)
}

/// Sequential relaxed projection onto the barrier half-spaces and the box.
///
/// Starts from `clip_box(τ_nominal)` and sweeps the rows in order. Each
/// violated row `v = b − aᵀτ > 0` moves `τ ← τ + γ v a / ‖a‖²`, followed by
/// a clip. Stops after the first sweep whose largest violation is within
/// `tol`, or after `sweeps` sweeps. The iterate with the smallest residual
/// seen (including the clipped start) is returned, so the result never has
/// a larger residual than the clip-only wrench.
pub fn project(
    bounds: &ActuatorBox,
    constraints: &[HalfSpaceConstraint],
    config: &FilterConfig,
    tau_nominal: &Wrench,
) -> FilterResult {
    let start = clip_box(bounds, tau_nominal);
    let mut tau = start;
    let mut best = start;
    let mut best_residual = max_violation(constraints, &start);
    let mut sweeps_used = 0;
    let min_norm2 = DEGENERATE_ROW_NORM * DEGENERATE_ROW_NORM;

    for _ in 0..config.sweeps {
        sweeps_used += 1;
        let mut sweep_max: f64 = 0.0;
        for row in constraints {
            let v = row.violation(&tau);
            sweep_max = sweep_max.max(v);
            let norm2 = row.a.norm_squared();
            if v > 0.0 && norm2 >= min_norm2 {
                tau += row.a * (config.gamma * v / norm2);
                tau = clip_box(bounds, &tau);
            }
        }
        let residual = max_violation(constraints, &tau);
        if residual < best_residual {
            best = tau;
            best_residual = residual;
        }
        if sweep_max <= config.tol {
            break;
        }
    }

    FilterResult {
        tau_safe: best,
        modified: best != start,
        sweeps_used,
        max_residual: best_residual,
        feasible: best_residual <= config.tol,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::Vec3;

    fn wide() -> ActuatorBox {
        ActuatorBox::symmetric(Vec3::repeat(1.0e6))
    }

    #[test]
    fn clip_examples() {
        let b = ActuatorBox::symmetric(Vec3::new(1.0, 2.0, 3.0));
        let inside = Vec3::new(0.5, -1.0, 2.9);
        assert_eq!(clip_box(&b, &inside), inside);
        let out = clip_box(&b, &Vec3::new(2.0, -9.0, 0.0));
        assert_eq!(out, Vec3::new(1.0, -2.0, 0.0));
        assert_eq!(clip_box(&b, &out), out);
    }

    #[test]
    fn satisfied_rows_leave_clip_result() {
        let b = ActuatorBox::symmetric(Vec3::repeat(1.0));
        let rows = [HalfSpaceConstraint::new(Vec3::new(1.0, 0.0, 0.0), -5.0)];
        let r = project(&b, &rows, &FilterConfig::default(), &Vec3::new(3.0, 0.2, 0.0));
        assert_eq!(r.tau_safe, Vec3::new(1.0, 0.2, 0.0));
        assert!(!r.modified);
        assert_eq!(r.sweeps_used, 1);
        assert!(r.feasible);
    }

    #[test]
    fn single_row_one_step() {
        let rows = [HalfSpaceConstraint::new(Vec3::new(1.0, 0.0, 0.0), 5.0)];
        let r = project(&wide(), &rows, &FilterConfig::default(), &Vec3::zeros());
        assert_eq!(r.tau_safe, Vec3::new(5.0, 0.0, 0.0));
        assert!(r.modified && r.feasible);
        assert_eq!(r.max_residual, 0.0);
    }

    #[test]
    fn relaxation_under_one_converges_over_sweeps() {
        let rows = [HalfSpaceConstraint::new(Vec3::new(0.0, 2.0, 0.0), 4.0)];
        let cfg = FilterConfig {
            gamma: 0.5,
            sweeps: 40,
            tol: 1e-6,
        };
        let r = project(&wide(), &rows, &cfg, &Vec3::zeros());
        assert!(r.feasible);
        assert!((r.tau_safe.y - 2.0).abs() < 1e-6);
        assert!(r.sweeps_used > 10);
    }

    #[test]
    fn infeasible_reports_best_iterate_inside_box() {
        let b = ActuatorBox::symmetric(Vec3::repeat(1.0));
        let rows = [HalfSpaceConstraint::new(Vec3::new(1.0, 0.0, 0.0), 5.0)];
        let r = project(&b, &rows, &FilterConfig::default(), &Vec3::zeros());
        assert!(!r.feasible);
        assert!(b.contains(&r.tau_safe));
        assert_eq!(r.tau_safe.x, 1.0);
        assert!((r.max_residual - 4.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_row_counts_but_never_steps() {
        let rows = [HalfSpaceConstraint::new(Vec3::zeros(), 1.0)];
        let r = project(&wide(), &rows, &FilterConfig::default(), &Vec3::new(1.0, 1.0, 1.0));
        assert_eq!(r.tau_safe, Vec3::new(1.0, 1.0, 1.0));
        assert!(!r.feasible);
        assert_eq!(r.max_residual, 1.0);
    }
}
