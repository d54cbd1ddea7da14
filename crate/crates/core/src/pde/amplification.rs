use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::SpatialOperator;
use crate::error::{Error, Result};
use crate::integrator::{IntegratorConfig, StepperMatrices};
use crate::numerics::{kron, spectral_radius, DenseMatrix};
use crate::stability::radius_for_config;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AmplificationMethod {
    /// `max_μ ρ(A + τμ·B(α)/α)` over the spectrum of `K`.
    Reduced,
    /// `ρ(A⊗I + r·B(α)⊗K)` assembled densely.
    Full,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmplificationOperator {
    pub cfg: IntegratorConfig,
    pub n_h: usize,
    pub reduced_radius: Option<f64>,
    pub full_radius: Option<f64>,
}

impl AmplificationOperator {
    pub fn radius(&self) -> f64 {
        self.reduced_radius.or(self.full_radius).expect("at least one path computed")
    }
}

/// Largest `s·n_h` for which the dense Kronecker assembly is attempted.
pub const FULL_ASSEMBLY_LIMIT: usize = 512;

pub fn amplification_radius(
    cfg: &IntegratorConfig,
    spatial: &SpatialOperator,
    method: AmplificationMethod,
) -> Result<AmplificationOperator> {
    let stepper = StepperMatrices::new(cfg.q, cfg.s, cfg.alpha)?;
    let want_reduced = matches!(method, AmplificationMethod::Reduced | AmplificationMethod::Both);
    let want_full = matches!(method, AmplificationMethod::Full | AmplificationMethod::Both);
    let reduced_radius = if want_reduced {
        if !spatial.mass_is_identity() {
            return Err(Error::InvalidArgument("the reduced path needs an identity mass matrix".into()));
        }
        let radii = spatial
            .stiffness_eigenvalues()
            .par_iter()
            .map(|&mu| spectral_radius(&stepper.stability_matrix(Complex64::new(cfg.tau * mu, 0.0), cfg.alpha)))
            .collect::<Result<Vec<f64>>>()?;
        Some(radii.into_iter().fold(0.0, f64::max))
    } else {
        None
    };
    let full_radius = if want_full {
        let dim = cfg.s * spatial.n_h;
        if dim > FULL_ASSEMBLY_LIMIT {
            return Err(Error::InvalidArgument(format!(
                "full assembly of size {dim} exceeds the limit {FULL_ASSEMBLY_LIMIT}"
            )));
        }
        let to_c = |m: &DMatrix<f64>| m.map(|v| Complex64::new(v, 0.0));
        let m_inv = spatial.m.clone().try_inverse().ok_or(Error::Singular { iteration: 0 })?;
        let k = to_c(&(&m_inv * &spatial.k));
        let eye: DenseMatrix = DenseMatrix::identity(spatial.n_h, spatial.n_h);
        let g = kron(&stepper.a, &eye) + kron(&stepper.b_alpha, &k) * Complex64::new(cfg.r, 0.0);
        Some(spectral_radius(&g)?)
    } else {
        None
    };
    if let (Some(reduced), Some(full)) = (reduced_radius, full_radius) {
        if (reduced - full).abs() > 1e-6 {
            return Err(Error::AmplificationMismatch { reduced, full });
        }
    }
    Ok(AmplificationOperator { cfg: *cfg, n_h: spatial.n_h, reduced_radius, full_radius })
}

/// `τ_max = r·h²/4` with `r` the parabolic radius of the `(q, s)` scheme.
pub fn cfl_max_step(q: usize, s: usize, h: f64) -> Result<f64> {
    if s < q || q == 0 {
        return Err(Error::InvalidConfig(format!("need 1 <= q <= s, got q = {q}, s = {s}")));
    }
    Ok(radius_for_config(q, u8::from(s == q))?.radius * h * h / 4.0)
}
