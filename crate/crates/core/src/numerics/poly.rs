use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::linalg::schur_diagonal;
use crate::error::{Error, Result};

/// Polynomial with complex coefficients in ascending degree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensePolynomial {
    coeffs: Vec<Complex64>,
}

impl DensePolynomial {
    /// Builds a polynomial, dropping exactly-zero high-order coefficients.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(Complex64::new(0.0, 0.0));
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `Π (x - r)` for the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().expect("non-empty")
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return Self::new(vec![Complex64::new(0.0, 0.0)]);
        }
        Self::new(self.coeffs.iter().enumerate().skip(1).map(|(k, &c)| c * k as f64).collect())
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Drops high-order coefficients below `tol` times the largest one.
    pub fn trim_relative(&self, tol: f64) -> Self {
        let cut = tol * self.scale();
        let mut coeffs = self.coeffs.clone();
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm() <= cut) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    /// Checks every coefficient is within `tol` of its counterpart.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        (0..n).all(|k| {
            let a = self.coeffs.get(k).copied().unwrap_or(zero);
            let b = other.coeffs.get(k).copied().unwrap_or(zero);
            (a - b).norm() <= tol
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum RootMethod {
    /// Eigenvalues of the balanced companion matrix.
    #[default]
    Companion,
    /// Aberth–Ehrlich simultaneous iteration.
    Aberth,
}

/// All roots of `p`, with multiplicity, via the balanced companion matrix.
pub fn poly_roots(p: &DensePolynomial) -> Result<Vec<Complex64>> {
    poly_roots_with(p, RootMethod::Companion)
}

pub fn poly_roots_with(p: &DensePolynomial, method: RootMethod) -> Result<Vec<Complex64>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let c = p.coeffs();
    // Exact zero roots come off first so the iterative part sees a nonzero
    // constant term.
    let zeros = c.iter().take_while(|v| **v == Complex64::new(0.0, 0.0)).count();
    let reduced = DensePolynomial::new(c[zeros..].to_vec());
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    if reduced.degree() == 0 {
        return Ok(roots);
    }
    let found = match method {
        RootMethod::Companion => companion_roots(&reduced)?,
        RootMethod::Aberth => aberth_roots(&reduced, 1000)?,
    };
    roots.extend(found.into_iter().map(|r| polish(&reduced, r)));
    Ok(roots)
}

fn companion_roots(p: &DensePolynomial) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let c = p.coeffs();
    let lead = p.leading();
    if n == 1 {
        return Ok(vec![-c[0] / lead]);
    }
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -c[i] / lead;
    }
    balance(&mut m);
    schur_diagonal(m)
}

/// Parlett–Reinsch diagonal similarity scaling by powers of two.
fn balance(m: &mut DMatrix<Complex64>) {
    let n = m.nrows();
    const RADIX: f64 = 2.0;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut row = 0.0;
            let mut col = 0.0;
            for j in 0..n {
                if j != i {
                    col += m[(j, i)].l1_norm();
                    row += m[(i, j)].l1_norm();
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            let mut g = row / RADIX;
            while col < g {
                f *= RADIX;
                col *= RADIX * RADIX;
            }
            g = row * RADIX;
            while col > g {
                f /= RADIX;
                col /= RADIX * RADIX;
            }
            if (col + row) / f < 0.95 * total {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                }
                for j in 0..n {
                    m[(j, i)] *= f;
                }
            }
        }
    }
}

fn aberth_roots(p: &DensePolynomial, max_iter: usize) -> Result<Vec<Complex64>> {
    let n = p.degree();
    let dp = p.derivative();
    let c = p.coeffs();
    let lead = p.leading().norm();
    // Cauchy bound on root moduli.
    let bound = 1.0 + c[..n].iter().map(|v| v.norm() / lead).fold(0.0, f64::max);
    let lower = {
        let c0 = c[0].norm();
        let m = c[1..].iter().map(|v| v.norm()).fold(0.0, f64::max);
        c0 / (c0 + m)
    };
    let radius = (bound * lower).sqrt().max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / n as f64 + 0.4))
        .collect();
    for _ in 0..max_iter {
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let pk = p.eval(z[k]);
            if pk == Complex64::new(0.0, 0.0) {
                continue;
            }
            let ratio = pk / dp.eval(z[k]);
            let repulsion: Complex64 =
                (0..n).filter(|&j| j != k).map(|j| Complex64::new(1.0, 0.0) / (z[k] - z[j])).sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                max_step = max_step.max(step.norm() / z[k].norm().max(1e-300));
            }
        }
        if max_step < 1e-15 {
            return Ok(z);
        }
    }
    Err(Error::RootFinder { degree: n })
}

/// A couple of Newton steps, kept only when they reduce the residual.
fn polish(p: &DensePolynomial, mut r: Complex64) -> Complex64 {
    let dp = p.derivative();
    let mut res = p.eval(r).norm();
    for _ in 0..3 {
        let d = dp.eval(r);
        if d.norm() == 0.0 {
            break;
        }
        let cand = r - p.eval(r) / d;
        let cand_res = p.eval(cand).norm();
        if cand.is_finite() && cand_res < res {
            r = cand;
            res = cand_res;
        } else {
            break;
        }
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap().then(a.im.partial_cmp(&b.im).unwrap()));
        v
    }

    #[test]
    fn quadratic_from_variant_polynomial() {
        // ζ²/2 + 3ζ + 2 has roots −3 ± √5.
        let p = DensePolynomial::from_real(&[2.0, 3.0, 0.5]);
        for method in [RootMethod::Companion, RootMethod::Aberth] {
            let r = sorted_by_re(poly_roots_with(&p, method).unwrap());
            assert!((r[0] - c(-3.0 - 5f64.sqrt(), 0.0)).norm() < 1e-12);
            assert!((r[1] - c(-3.0 + 5f64.sqrt(), 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn linear_stability_function() {
        // λ − (1 + z) at z = 0.
        let p = DensePolynomial::new(vec![c(-1.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(poly_roots(&p).unwrap(), vec![c(1.0, 0.0)]);
    }

    #[test]
    fn zero_polynomial_is_an_error() {
        let p = DensePolynomial::new(vec![c(0.0, 0.0); 3]);
        assert!(matches!(poly_roots(&p), Err(Error::ZeroPolynomial)));
    }

    #[test]
    fn exact_zero_roots_are_split_off() {
        // x^2 (x - 1)
        let p = DensePolynomial::from_real(&[0.0, 0.0, -1.0, 1.0]);
        let r = sorted_by_re(poly_roots(&p).unwrap());
        assert_eq!(r[0], c(0.0, 0.0));
        assert_eq!(r[1], c(0.0, 0.0));
        assert!((r[2] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn random_degree_six_residuals() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(6);
        for _ in 0..20 {
            let coeffs: Vec<Complex64> =
                (0..7).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let p = DensePolynomial::new(coeffs);
            for method in [RootMethod::Companion, RootMethod::Aberth] {
                let roots = poly_roots_with(&p, method).unwrap();
                assert_eq!(roots.len(), 6);
                for r in roots {
                    assert!(p.eval(r).norm() < 1e-10, "{method:?} residual {}", p.eval(r).norm());
                }
            }
        }
    }

    #[test]
    fn derivative_and_eval() {
        let p = DensePolynomial::from_real(&[1.0, 2.0, 3.0]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(17.0, 0.0));
        assert_eq!(p.derivative().coeffs(), &[c(2.0, 0.0), c(6.0, 0.0)]);
    }

    proptest! {
        #[test]
        fn roots_of_product_recover_the_multiset(
            raw in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 1..=12)
        ) {
            // Keep roots well separated.
            let mut roots: Vec<Complex64> = Vec::new();
            for (re, im) in raw {
                let r = c(re, im);
                if roots.iter().all(|q| (q - r).norm() > 0.5) {
                    roots.push(r);
                }
            }
            let p = DensePolynomial::from_roots(&roots);
            let found = poly_roots(&p).unwrap();
            prop_assert_eq!(found.len(), roots.len());
            for r in &roots {
                let best = found.iter().map(|f| (f - r).norm()).fold(f64::INFINITY, f64::min);
                prop_assert!(best <= 1e-8 * r.norm().max(1.0), "root {} off by {}", r, best);
            }
        }
    }
}
