//! Shared numerical kernels: dense eigenvalues, polynomial roots, Newton
//! iteration, periodic trapezoidal quadrature and compensated arithmetic.
//!
//! Everything here is a pure function of its inputs.

mod compensated;
mod linalg;
mod newton;
mod poly;
mod quadrature;

pub use compensated::{comp_horner, horner_dd, two_prod, two_sum, CompensatedSum, DoubleDouble};
pub use linalg::{dense_eigvals, determinant, kron, spectral_radius, DenseMatrix};
pub use newton::{fd_jacobian, newton_solve, NewtonOutcome};
pub use poly::{poly_roots, poly_roots_with, DensePolynomial, RootMethod};
pub use quadrature::{periodic_quadrature, PeriodicQuadrature, QuadratureValue};
