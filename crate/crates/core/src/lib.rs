//! Adams-Bashforth-type integrator (ABTI) on roots-of-unity contours.
//!
//! The scheme advances a vector of `s` solution values attached to the
//! complex time nodes `t_n + r·ω_j`, `ω_j = exp(2πij/s)`:
//!
//! ```text
//! u[n+1] = A·u[n] + r·B(α)·f(t[n], u[n]),   α = τ / r
//! ```
//!
//! and reconstructs the real-time solution as the mean of the node values.
//! Besides the integrator itself the crate carries the full linear
//! stability toolkit for the scheme: the closed-form characteristic
//! polynomial of `A + z·B(α)/α`, root-locus curves, parabolic radii, the
//! generating-function/Fourier discriminant for the maximum permissible
//! order, the fully discrete heat-equation scheme with its CFL bound, and
//! executable witnesses for the algebraic identities behind the
//! characteristic polynomial.
//!
//! ```
//! use abti::integrator::{IntegratorConfig, Integrator, ScalarRhs};
//! use num_complex::Complex64;
//!
//! // u' = -u on [0, 1], q = 2, s = 3, r = τ.
//! let cfg = IntegratorConfig::unit_alpha(2, 3, 1.0 / 64.0).unwrap();
//! let rhs = ScalarRhs::new(|_t: Complex64, u: Complex64| -u);
//! let integrator = Integrator::new(cfg);
//! let mut state = integrator.init_vector(&rhs, &[Complex64::new(1.0, 0.0)], 1e-14, 20).unwrap();
//! for _ in 0..64 {
//!     state = integrator.propagate(&state, &rhs).unwrap();
//! }
//! let u1 = integrator.reconstruct(&state)[0];
//! assert!((u1.re - (-1.0f64).exp()).abs() < 1e-4);
//! ```

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod appendix;
pub mod error;
pub mod experiments;
pub mod integrator;
pub mod numerics;
pub mod pde;
pub mod stability;

pub use error::{Error, Result};
pub use num_complex::Complex64;
