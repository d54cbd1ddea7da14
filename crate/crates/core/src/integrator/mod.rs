//! Matrices and the iterator/propagator/reconstruction pipeline.

mod config;
mod matrices;
mod scheme;
mod system;

pub use config::IntegratorConfig;
pub use matrices::{build_stepper, roots_of_unity, StepperMatrices};
pub use scheme::{Integrator, SolutionVector};
pub use system::{rhs_jacobian, OdeSystem, ScalarRhs};
