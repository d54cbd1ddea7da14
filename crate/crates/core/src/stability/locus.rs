use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polys::char_poly_in_z;
use crate::error::{Error, Result};
use crate::numerics::poly_roots;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootLocusCurve {
    pub q: usize,
    pub alpha: f64,
    pub delta_q: u8,
    /// Equally spaced on `[-π, π)`.
    pub thetas: Vec<f64>,
    /// `branches[k][b]`: branch `b` at `thetas[k]`.
    pub branches: Vec<Vec<Complex64>>,
}

impl RootLocusCurve {
    pub fn branch(&self, b: usize) -> Vec<Complex64> {
        self.branches.iter().map(|roots| roots[b]).collect()
    }

    pub fn n_branches(&self) -> usize {
        self.branches.first().map_or(0, Vec::len)
    }
}

/// Zeros in `z` of `p_q(e^{iθ}; z)` for `n_theta` angles.
///
/// Branches start ordered by modulus at `θ = -π` and are continued by
/// nearest-neighbour matching.
pub fn root_locus(q: usize, alpha: f64, delta_q: u8, n_theta: usize) -> Result<RootLocusCurve> {
    if n_theta < 8 {
        return Err(Error::InvalidArgument("root locus needs at least 8 angles".into()));
    }
    let thetas: Vec<f64> = (0..n_theta).map(|k| -PI + 2.0 * PI * k as f64 / n_theta as f64).collect();
    let raw = thetas
        .par_iter()
        .map(|&theta| {
            let lambda = if theta == 0.0 { Complex64::new(1.0, 0.0) } else { Complex64::from_polar(1.0, theta) };
            poly_roots(&char_poly_in_z(q, lambda, alpha, delta_q))
        })
        .collect::<Result<Vec<_>>>()?;
    let mut branches: Vec<Vec<Complex64>> = Vec::with_capacity(n_theta);
    for roots in raw {
        let next = match branches.last() {
            None => {
                let mut r = roots;
                r.sort_by(|a, b| a.norm().total_cmp(&b.norm()));
                r
            }
            Some(prev) => match_branches(prev, roots),
        };
        branches.push(next);
    }
    Ok(RootLocusCurve { q, alpha, delta_q, thetas, branches })
}

// Greedy matching of new roots onto previous branch positions, closest
// pairs first; ties broken by modulus.
fn match_branches(prev: &[Complex64], roots: Vec<Complex64>) -> Vec<Complex64> {
    let n = prev.len();
    let mut pairs: Vec<(f64, f64, usize, usize)> = Vec::with_capacity(n * n);
    for (b, p) in prev.iter().enumerate() {
        for (k, r) in roots.iter().enumerate() {
            pairs.push(((p - r).norm(), r.norm(), b, k));
        }
    }
    pairs.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
    let mut out = vec![Complex64::new(f64::NAN, f64::NAN); n];
    let mut used_b = vec![false; n];
    let mut used_k = vec![false; roots.len()];
    for (_, _, b, k) in pairs {
        if !used_b[b] && !used_k[k] {
            out[b] = roots[k];
            used_b[b] = true;
            used_k[k] = true;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stability::variant_poly;

    #[test]
    fn q2_at_pi() {
        let c = root_locus(2, 1.0, 0, 16).unwrap();
        assert_eq!(c.thetas[0], -PI);
        let mut r: Vec<f64> = c.branches[0].iter().map(|z| z.re).collect();
        r.sort_by(f64::total_cmp);
        assert!((r[0] + 3.0 + 5f64.sqrt()).abs() < 1e-12);
        assert!((r[1] + 3.0 - 5f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn zero_at_theta_zero() {
        for q in 1..=6 {
            let c = root_locus(q, 1.0, 0, 32).unwrap();
            let k = c.thetas.iter().position(|&t| t == 0.0).unwrap();
            assert!(c.branches[k].iter().any(|z| z.norm() < 1e-14));
        }
    }

    #[test]
    fn conjugate_symmetry() {
        let n = 64;
        for q in 1..=6 {
            let c = root_locus(q, 1.0, 0, n).unwrap();
            for k in 1..n {
                let mirror = n - k;
                for z in &c.branches[k] {
                    let best = c.branches[mirror].iter().map(|w| (w.conj() - z).norm()).fold(f64::INFINITY, f64::min);
                    assert!(best < 1e-10);
                }
            }
        }
    }

    #[test]
    fn moduli_match_variant_polynomial() {
        for q in 1..=6 {
            for delta in [0u8, 1] {
                let c = root_locus(q, 1.0, delta, 24).unwrap();
                for (k, &theta) in c.thetas.iter().enumerate() {
                    let mut a: Vec<f64> = c.branches[k].iter().map(|z| z.norm()).collect();
                    let mut b: Vec<f64> = crate::numerics::poly_roots(&variant_poly(q, theta, delta, 1.0))
                        .unwrap()
                        .iter()
                        .map(|z| z.norm())
                        .collect();
                    a.sort_by(f64::total_cmp);
                    b.sort_by(f64::total_cmp);
                    assert_eq!(a.len(), b.len());
                    for (x, y) in a.iter().zip(&b) {
                        assert!((x - y).abs() < 1e-9 * x.max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn branches_are_continuous() {
        let c = root_locus(3, 1.0, 0, 512).unwrap();
        for b in 0..c.n_branches() {
            let path = c.branch(b);
            for w in path.windows(2) {
                assert!((w[1] - w[0]).norm() < 0.2);
            }
        }
    }
}
