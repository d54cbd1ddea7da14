use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Composite trapezoidal rule on `[0, 2π)` with node doubling.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PeriodicQuadrature {
    pub start_nodes: usize,
    pub max_nodes: usize,
    /// Sample at `2π(k + 1/2)/n` instead of `2πk/n`, which keeps `φ = 0`
    /// out of the node set.
    pub half_shift: bool,
}

impl Default for PeriodicQuadrature {
    fn default() -> Self {
        Self { start_nodes: 64, max_nodes: 1 << 20, half_shift: false }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureValue {
    pub value: Complex64,
    pub nodes: usize,
    /// `|I_n - I_{n/2}|` at the accepted level.
    pub difference: f64,
}

impl PeriodicQuadrature {
    pub fn shifted() -> Self {
        Self { half_shift: true, ..Self::default() }
    }

    /// Integrates `f` over one period, doubling until two successive
    /// estimates differ by less than `tol`.
    pub fn integrate<F>(&self, mut f: F, tol: f64) -> Result<QuadratureValue>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let mut n = self.start_nodes.max(1);
        let mut sum = self.raw_sum(&mut f, n, 0)?;
        let mut estimate = sum * (2.0 * PI / n as f64);
        let mut difference = f64::INFINITY;
        while n < self.max_nodes {
            if self.half_shift {
                n *= 2;
                sum = self.raw_sum(&mut f, n, 0)?;
            } else {
                // The old nodes are the even nodes of the refined rule.
                sum += self.raw_sum(&mut f, 2 * n, 1)?;
                n *= 2;
            }
            let next = sum * (2.0 * PI / n as f64);
            difference = (next - estimate).norm();
            estimate = next;
            if difference < tol {
                return Ok(QuadratureValue { value: estimate, nodes: n, difference });
            }
        }
        Err(Error::QuadratureStagnation { nodes: n, difference })
    }

    // Sum over nodes k = offset, offset + step, ... of the n-point rule
    // (step 2 when offset is 1, else every node).
    fn raw_sum<F>(&self, f: &mut F, n: usize, offset: usize) -> Result<Complex64>
    where
        F: FnMut(f64) -> Result<Complex64>,
    {
        let step = if offset == 1 { 2 } else { 1 };
        let shift = if self.half_shift { 0.5 } else { 0.0 };
        let h = 2.0 * PI / n as f64;
        let mut acc = Complex64::new(0.0, 0.0);
        let mut k = offset;
        while k < n {
            acc += f((k as f64 + shift) * h)?;
            k += step;
        }
        Ok(acc)
    }
}

/// `∫₀^{2π} f(φ) dφ` with the default node schedule (64 up to 2²⁰).
pub fn periodic_quadrature<F>(f: F, tol: f64) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    PeriodicQuadrature::default().integrate(|phi| Ok(f(phi)), tol).map(|q| q.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn orthogonality() {
        let v = periodic_quadrature(|phi| Complex64::from_polar(1.0, phi), 1e-14).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn constant() {
        let v = periodic_quadrature(|_| Complex64::new(1.0, 0.0), 1e-14).unwrap();
        assert!((v.re - 2.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn cauchy_coefficient_of_variant_polynomial() {
        // (1 + t)/(e^{-ζt} - t) sampled at |t| = 1/2 and rescaled: the
        // coefficient of t² at ζ = -0.2 is 0.02 - 0.6 + 2.
        let zeta = -0.2;
        let rho = 0.5;
        let v = periodic_quadrature(
            |phi| {
                let t = Complex64::from_polar(rho, phi);
                (1.0 + t) / ((-zeta * t).exp() - t) * Complex64::from_polar(1.0, -2.0 * phi)
            },
            1e-14,
        )
        .unwrap()
            / (2.0 * PI * rho * rho);
        assert!((v.re - 1.42).abs() < 1e-12, "{v}");
        assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn shifted_nodes_agree() {
        let f = |phi: f64| Ok(Complex64::new((phi.cos()).exp(), 0.0));
        let a = PeriodicQuadrature::default().integrate(f, 1e-13).unwrap();
        let b = PeriodicQuadrature::shifted().integrate(f, 1e-13).unwrap();
        assert!((a.value - b.value).norm() < 1e-12);
    }

    #[test]
    fn stagnation_is_reported() {
        // Jump plus square-root cusp at φ = 0: the error decays algebraically.
        let q = PeriodicQuadrature { max_nodes: 1 << 10, ..Default::default() };
        let err = q.integrate(|phi| Ok(Complex64::new(phi.sqrt(), 0.0)), 1e-14).unwrap_err();
        assert!(matches!(err, Error::QuadratureStagnation { nodes: 1024, .. }));
    }

    proptest! {
        #[test]
        fn trigonometric_polynomials_are_exact(
            coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 1..=31)
        ) {
            // Σ c_k e^{ikφ}; only k = 0 survives.
            let coeffs: Vec<Complex64> = coeffs.into_iter().map(|(a, b)| Complex64::new(a, b)).collect();
            let c0 = coeffs[0];
            let v = periodic_quadrature(
                |phi| coeffs.iter().enumerate().map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * phi)).sum(),
                1e-13,
            ).unwrap();
            prop_assert!((v - c0 * 2.0 * PI).norm() < 1e-13 * 2.0 * PI * 8.0);
        }
    }
}
