use nalgebra::{DMatrix, DVector};

use super::{ActuatorBox, HalfSpaceConstraint};
use crate::error::{Error, Result};
use crate::math::{Vec3, Wrench};

const FEAS_TOL: f64 = 1e-9;

/// Unit-normal row `nᵀτ ≥ c`.
#[derive(Debug, Clone, Copy)]
struct Row {
    n: Vec3,
    c: f64,
}

/// Exact minimizer of `‖τ − τ_nominal‖²` subject to the half-spaces and box.
///
/// With three unknowns at most three linearly independent constraints are
/// active at the optimum, so every subset of up to three rows (barrier rows
/// plus the six box faces) is tried: project `τ_nominal` onto the subset's
/// affine intersection, keep candidates that are feasible and have
/// non-negative multipliers, and return the closest one.
pub fn qp_oracle(
    bounds: &ActuatorBox,
    constraints: &[HalfSpaceConstraint],
    tau_nominal: &Wrench,
) -> Result<Wrench> {
    let mut rows = Vec::with_capacity(constraints.len() + 6);
    for c in constraints {
        let norm = c.a.norm();
        if norm < super::DEGENERATE_ROW_NORM {
            if c.b > FEAS_TOL * (1.0 + c.b.abs()) {
                return Err(Error::Infeasible);
            }
            continue;
        }
        rows.push(Row {
            n: c.a / norm,
            c: c.b / norm,
        });
    }
    for k in 0..3 {
        let e = Vec3::from_fn(|i, _| if i == k { 1.0 } else { 0.0 });
        if bounds.min[k].is_finite() {
            rows.push(Row { n: e, c: bounds.min[k] });
        }
        if bounds.max[k].is_finite() {
            rows.push(Row { n: -e, c: -bounds.max[k] });
        }
    }

    let scale = 1.0 + tau_nominal.norm();
    let feasible = |tau: &Wrench| {
        rows.iter()
            .all(|r| r.n.dot(tau) >= r.c - FEAS_TOL * (1.0 + r.c.abs() + tau.norm()))
    };

    let mut best_kkt: Option<(f64, Wrench)> = None;
    let mut best_feasible: Option<(f64, Wrench)> = None;
    let mut consider = |subset: &[usize]| {
        let Some((tau, multipliers_ok)) = solve_subset(&rows, subset, tau_nominal, scale) else {
            return;
        };
        if !feasible(&tau) {
            return;
        }
        let dist = (tau - tau_nominal).norm();
        if best_feasible.is_none_or(|(d, _)| dist < d) {
            best_feasible = Some((dist, tau));
        }
        if multipliers_ok && best_kkt.is_none_or(|(d, _)| dist < d) {
            best_kkt = Some((dist, tau));
        }
    };

    let m = rows.len();
    consider(&[]);
    for i in 0..m {
        consider(&[i]);
        for j in i + 1..m {
            consider(&[i, j]);
            for k in j + 1..m {
                consider(&[i, j, k]);
            }
        }
    }

    best_kkt
        .or(best_feasible)
        .map(|(_, tau)| tau)
        .ok_or(Error::Infeasible)
}

/// Projects onto `{τ : n_iᵀτ = c_i, i ∈ subset}`. Returns the point and
/// whether all multipliers are non-negative, or `None` for dependent normals.
fn solve_subset(rows: &[Row], subset: &[usize], tau0: &Wrench, scale: f64) -> Option<(Wrench, bool)> {
    let k = subset.len();
    if k == 0 {
        return Some((*tau0, true));
    }
    let n = DMatrix::from_fn(k, 3, |r, c| rows[subset[r]].n[c]);
    let gram = &n * n.transpose();
    if gram.clone().symmetric_eigenvalues().min() < 1e-10 {
        return None;
    }
    let rhs = DVector::from_fn(k, |r, _| rows[subset[r]].c - rows[subset[r]].n.dot(tau0));
    let lambda = gram.cholesky()?.solve(&rhs);
    let step = n.transpose() * &lambda;
    let tau = tau0 + Vec3::new(step[0], step[1], step[2]);
    let ok = lambda.iter().all(|l| *l >= -FEAS_TOL * scale);
    Some((tau, ok))
}
