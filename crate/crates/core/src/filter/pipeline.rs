use super::{clip_box, max_violation, project, qp_oracle, ActuatorBox, FilterConfig, FilterResult, HalfSpaceConstraint};
use crate::dynamics::{VesselParams, VesselState};
use crate::hocbf::{build_all, BarrierParams, Obstacle};
use crate::math::Wrench;
use crate::smc::{smc_wrench, ReferenceSignal, SmcGains};

/// Which safety filter sits in the control loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FilterMode {
    #[default]
    Projection,
    /// Exact QP by active-set enumeration. Benchmarking only.
    QpOracle,
}

/// Everything the controller needs besides the state and reference.
#[derive(Debug, Clone, Copy)]
pub struct ControlContext<'a> {
    pub params: &'a VesselParams,
    pub gains: &'a SmcGains,
    pub barrier: &'a BarrierParams,
    pub bounds: &'a ActuatorBox,
    pub filter: &'a FilterConfig,
    pub obstacles: &'a [Obstacle],
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineOutput {
    pub tau_smc: Wrench,
    pub result: FilterResult,
    /// `τ_safe − τ_SMC`, clipping included.
    pub delta_u: Wrench,
    pub constraints: Vec<HalfSpaceConstraint>,
}

impl PipelineOutput {
    pub fn tau_safe(&self) -> Wrench {
        self.result.tau_safe
    }
}

/// `τ_SMC` → barrier rows → safety filter → `τ_safe`.
pub fn filter_pipeline(
    ctx: &ControlContext<'_>,
    state: &VesselState,
    reference: &ReferenceSignal,
    mode: FilterMode,
) -> PipelineOutput {
    let tau_smc = smc_wrench(ctx.params, ctx.gains, state, reference);
    let constraints = build_all(ctx.params, ctx.barrier, ctx.obstacles, state);
    let result = match mode {
        FilterMode::Projection => project(ctx.bounds, &constraints, ctx.filter, &tau_smc),
        FilterMode::QpOracle => oracle_result(ctx.bounds, &constraints, &tau_smc),
    };
    PipelineOutput {
        tau_smc,
        delta_u: result.tau_safe - tau_smc,
        result,
        constraints,
    }
}

fn oracle_result(bounds: &ActuatorBox, constraints: &[HalfSpaceConstraint], tau_smc: &Wrench) -> FilterResult {
    let clipped = clip_box(bounds, tau_smc);
    match qp_oracle(bounds, constraints, tau_smc) {
        Ok(tau) => {
            // The oracle can land a rounding error outside a box face.
            let tau = clip_box(bounds, &tau);
            FilterResult {
                tau_safe: tau,
                modified: tau != clipped,
                sweeps_used: 0,
                max_residual: max_violation(constraints, &tau),
                feasible: true,
            }
        }
        Err(_) => FilterResult {
            tau_safe: clipped,
            modified: false,
            sweeps_used: 0,
            max_residual: max_violation(constraints, &clipped),
            feasible: false,
        },
    }
}
