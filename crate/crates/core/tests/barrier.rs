mod common;

use seaguard_core::hocbf::{build_constraint, h_ddot, h_value};
use seaguard_core::{BarrierParams, Obstacle, Vec3, VesselParams, VesselState};

#[test]
fn row_matches_finite_difference_at_seeded_states() {
    let worst = common::row_fd_check(&VesselParams::default(), 10, 3);
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn h_dot_is_input_free() {
    let (sens, min_row) = common::h_dot_tau_sensitivity(&VesselParams::default(), 10, 4);
    assert!(sens <= 1e-6, "{sens}");
    assert!(min_row > 0.0);
}

#[test]
fn h_dot_matches_finite_difference_along_trajectory() {
    let worst = common::h_dot_fd_check(&VesselParams::default(), 5);
    assert!(worst <= 1e-6, "{worst}");
}

#[test]
fn analytic_h_ddot_matches_oracle() {
    let p = VesselParams::default();
    let o = Obstacle::new([5.0, 5.0], 3.0).unwrap();
    let s = VesselState::new(Vec3::new(-4.0, 1.0, 2.5), Vec3::new(1.2, -0.4, 0.03));
    let tau = Vec3::new(1.0e4, -2.0e4, 5.0e4);
    let a = h_ddot(&p, &o, &s, &tau);
    let b = common::h_ddot_oracle(&p, &o, &s, &tau);
    assert!((a - b).abs() <= 1e-12 * (1.0 + b.abs()));
}

#[test]
fn satisfied_row_implies_barrier_inequality() {
    let p = VesselParams::default();
    let bp = BarrierParams::constant(0.3);
    let o = Obstacle::new([20.0, 0.0], 6.0).unwrap();
    let s = VesselState::new(Vec3::new(0.0, 1.0, 0.0), Vec3::new(2.0, 0.0, 0.0));
    let row = build_constraint(&p, &bp, &o, 0, &s);
    let tau = row.a * (row.b / row.a.norm_squared());
    let lhs = common::h_ddot_oracle(&p, &o, &s, &tau)
        + 2.0 * 0.3 * seaguard_core::hocbf::h_dot(&o, &s)
        + 0.09 * h_value(&o, &s.eta);
    assert!(lhs.abs() < 1e-9, "{lhs}");
}
