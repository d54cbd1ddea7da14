use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::IntegratorConfig;
use crate::error::{Error, Result};
use crate::numerics::DenseMatrix;

/// `ω_j = exp(2πij/s)` for `j = 1..s`, so the last node is 1.
pub fn roots_of_unity(s: usize) -> Result<Vec<Complex64>> {
    if s == 0 {
        return Err(Error::InvalidArgument("number of roots of unity must be at least 1".into()));
    }
    Ok((1..=s)
        .map(
            |j| {
                if j == s {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::from_polar(1.0, 2.0 * PI * j as f64 / s as f64)
                }
            },
        )
        .collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepperMatrices {
    /// `s×s` averaging matrix, all entries `1/s`.
    pub a: DenseMatrix,
    /// `s×q`, `σ_{j,k} = (α + ω_j)^k / k`.
    pub s_alpha: DenseMatrix,
    /// `q×s`, `F_{ν,m} = ω_m^{1-ν} / s`.
    pub f: DenseMatrix,
    pub b_alpha: DenseMatrix,
    pub b_zero: DenseMatrix,
    pub nodes: Vec<Complex64>,
}

impl StepperMatrices {
    pub fn new(q: usize, s: usize, alpha: f64) -> Result<Self> {
        if q == 0 || s < q {
            return Err(Error::InvalidConfig(format!("need 1 <= q <= s, got q = {q}, s = {s}")));
        }
        let nodes = roots_of_unity(s)?;
        let a = DenseMatrix::from_element(s, s, Complex64::new(1.0 / s as f64, 0.0));
        let s_alpha = integral_matrix(&nodes, q, alpha);
        let s_zero = integral_matrix(&nodes, q, 0.0);
        let f = DenseMatrix::from_fn(q, s, |nu, m| nodes[m].powi(-(nu as i32)) / s as f64);
        let b_alpha = &s_alpha * &f;
        let b_zero = &s_zero * &f;
        Ok(Self { a, s_alpha, f, b_alpha, b_zero, nodes })
    }

    pub fn s(&self) -> usize {
        self.nodes.len()
    }

    pub fn q(&self) -> usize {
        self.f.nrows()
    }

    /// `R(z) = A + z·B(α)/α`.
    pub fn stability_matrix(&self, z: Complex64, alpha: f64) -> DenseMatrix {
        &self.a + &self.b_alpha * (z / alpha)
    }
}

fn integral_matrix(nodes: &[Complex64], q: usize, alpha: f64) -> DenseMatrix {
    DenseMatrix::from_fn(nodes.len(), q, |j, k| {
        let k = k as i32 + 1;
        (nodes[j] + alpha).powi(k) / k as f64
    })
}

pub fn build_stepper(cfg: &IntegratorConfig) -> Result<StepperMatrices> {
    cfg.validate()?;
    StepperMatrices::new(cfg.q, cfg.s, cfg.alpha)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn small_root_sets() {
        assert_eq!(roots_of_unity(1).unwrap(), vec![c(1.0, 0.0)]);
        let r2 = roots_of_unity(2).unwrap();
        assert!(close(r2[0], c(-1.0, 0.0), 1e-15) && r2[1] == c(1.0, 0.0));
        let r4 = roots_of_unity(4).unwrap();
        let want = [c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0), c(1.0, 0.0)];
        for (a, b) in r4.iter().zip(want) {
            assert!(close(*a, b, 1e-15));
        }
        assert!(roots_of_unity(0).is_err());
    }

    #[test]
    fn roots_sum_to_zero() {
        for s in 2..40 {
            let sum: Complex64 = roots_of_unity(s).unwrap().iter().sum();
            assert!(sum.norm() < 1e-13);
        }
    }

    #[test]
    fn scalar_euler_case() {
        let m = StepperMatrices::new(1, 1, 1.0).unwrap();
        assert_eq!(m.a[(0, 0)], c(1.0, 0.0));
        assert_eq!(m.s_alpha[(0, 0)], c(2.0, 0.0));
        assert_eq!(m.f[(0, 0)], c(1.0, 0.0));
        assert_eq!(m.b_alpha[(0, 0)], c(2.0, 0.0));
    }

    #[test]
    fn b_alpha_matches_triple_loop() {
        let (q, s, alpha) = (2, 3, 1.0);
        let m = StepperMatrices::new(q, s, alpha).unwrap();
        let w = roots_of_unity(s).unwrap();
        for j in 0..s {
            for mm in 0..s {
                let mut acc = c(0.0, 0.0);
                for k in 1..=q {
                    let sigma = (alpha + w[j]).powu(k as u32) / k as f64;
                    acc += sigma * w[mm].powi(1 - k as i32);
                }
                acc /= s as f64;
                assert!(close(m.b_alpha[(j, mm)], acc, 1e-14));
            }
        }
    }

    #[test]
    fn structural_identities() {
        for s in 1..=64 {
            for q in [1, s.min(3), s] {
                let m = StepperMatrices::new(q, s, 0.7).unwrap();
                let ones = DenseMatrix::from_element(s, 1, c(1.0, 0.0));
                let f1 = &m.f * &ones;
                for nu in 0..q {
                    let want = if nu == 0 { 1.0 } else { 0.0 };
                    assert!(close(f1[(nu, 0)], c(want, 0.0), 1e-14), "s = {s}");
                }
                let aa = &m.a * &m.a;
                assert!((aa - &m.a).camax() < 1e-15);
                let col_sums = ones.transpose() * &m.a;
                for v in col_sums.iter() {
                    assert!(close(*v, c(1.0, 0.0), 1e-15 * s as f64));
                }
            }
        }
    }

    #[test]
    fn b_alpha_at_zero_is_b_zero() {
        let m = StepperMatrices::new(3, 4, 0.0).unwrap();
        assert_eq!(m.b_alpha, m.b_zero);
    }
}
