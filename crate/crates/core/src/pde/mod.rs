//! Method-of-lines heat equation `u_t = u_xx + f` in one dimension, advanced
//! by the integrator, with its amplification operator and CFL bound.

mod amplification;
mod operator;
mod solve;

pub use amplification::{
    amplification_radius, cfl_max_step, AmplificationMethod, AmplificationOperator, FULL_ASSEMBLY_LIMIT,
};
pub use operator::{laplacian_1d, BoundaryCondition, SpatialOperator};
pub use solve::{heat_solve, l2_stability_check, HeatOptions, HeatSystem, L2Check, Trajectory};
