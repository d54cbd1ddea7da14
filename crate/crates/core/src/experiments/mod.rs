//! Drivers that rebuild the reference tables and bundle them with
//! pass/fail checks.

mod algebra;
mod convergence;
mod heat;
mod report;
mod tables;

pub use algebra::{char_poly_equivalence, run_appendix_report, EquivalenceCase};
pub use convergence::{
    allen_cahn_exact, allen_cahn_rhs, convergence_report, quadrature_order_law, reference_convergence,
    run_ode_convergence, ConvergenceRow, ConvergenceTable, QuadratureLaw, REFERENCE_STEPS,
};
pub use heat::{heat_runs, run_heat_blowup, HeatRun, FORCED_STEPS, REFERENCE_RHO};
pub use report::{Check, ExperimentReport, Table, Tolerance};
pub use tables::{
    run_decay_witness, run_max_order_table, run_radius_table, DecayParameters, REFERENCE_MAX_ORDERS, REFERENCE_RADII,
};
