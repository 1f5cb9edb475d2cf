//! Equations of motion, boundary closures, reductions and time stepping.

mod equations;
mod extrinsic;
mod integrate;
mod reduced;

pub(crate) use equations::bulk_q;
pub use equations::{rhs_open_intrinsic, rhs_periodic, Derivatives};
pub use extrinsic::{
    from_extrinsic, ghost_closure, ghost_from_velocity, push_forward, rhs_open_extrinsic, to_extrinsic, validate_branch,
    ExtrinsicState, ROUND_TRIP_TOL,
};
pub use integrate::{
    integrate, integrate_partial, rk4_step, step_halving, ExtrinsicFlow, Flow, IntegrateOptions, Monitor, OpenFlow, PeriodicFlow, ReducedFlow,
    StepHalving, Trajectory, BLOWUP_CAP,
};
pub use reduced::{reduced_ghost, rhs_reduced};
