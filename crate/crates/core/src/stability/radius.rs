use serde::{Deserialize, Serialize};

use super::polys::variant_poly_real;
use crate::error::{Error, Result};
use crate::numerics::{poly_roots, DensePolynomial};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParabolicRadiusResult {
    pub n: usize,
    pub delta_q: u8,
    pub radius: f64,
    /// Zeros of `p̃(ζ; π)`, ascending.
    pub all_real_zeros: Vec<f64>,
}

/// Length of the stable segment `(-r, 0)` for expansion order `q`: the
/// smallest-modulus zero of `p̃_q(ζ; π)`.
pub fn radius_for_config(q: usize, delta_q: u8) -> Result<ParabolicRadiusResult> {
    if q == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let coeffs = variant_poly_real(q, delta_q, 1.0);
    let roots = poly_roots(&DensePolynomial::from_real(&coeffs))?;
    let mut zeros = Vec::with_capacity(roots.len());
    for z in roots {
        if z.im.abs() > 1e-8 * z.norm().max(1.0) {
            return Err(Error::RealnessViolated { zero: z, imag: z.im });
        }
        zeros.push(z.re);
    }
    zeros.sort_by(f64::total_cmp);
    let separation = zeros.windows(2).map(|w| w[1] - w[0]).fold(f64::INFINITY, f64::min);
    if separation <= 1e-6 {
        return Err(Error::NotDistinct { separation });
    }
    let radius = zeros.iter().map(|z| z.abs()).fold(f64::INFINITY, f64::min);
    Ok(ParabolicRadiusResult { n: q, delta_q, radius, all_real_zeros: zeros })
}

/// Parabolic radius for order `n`. With `δ = 1` (`s = q`) one order is lost,
/// so the radius comes from `p̃_{n+1}`.
pub fn parabolic_radius(n: usize, delta_q: u8) -> Result<ParabolicRadiusResult> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    let mut out = radius_for_config(n + delta_q as usize, delta_q)?;
    out.n = n;
    Ok(out)
}
