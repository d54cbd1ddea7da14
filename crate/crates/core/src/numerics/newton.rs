use nalgebra::DVector;
use num_complex::Complex64;

use super::linalg::DenseMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct NewtonOutcome {
    pub x: DVector<Complex64>,
    pub iterations: usize,
    pub residual: f64,
}

fn inf_norm(v: &DVector<Complex64>) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

/// Newton's method for `residual(x) = 0`.
///
/// Stops as soon as `‖residual(x)‖∞ <= tol`; the initial guess counts as
/// iteration zero.
pub fn newton_solve<R, J>(
    mut residual: R,
    mut jacobian: J,
    x0: DVector<Complex64>,
    tol: f64,
    max_iter: usize,
) -> Result<NewtonOutcome>
where
    R: FnMut(&DVector<Complex64>) -> Result<DVector<Complex64>>,
    J: FnMut(&DVector<Complex64>) -> Result<DenseMatrix>,
{
    let mut x = x0;
    let mut r = residual(&x)?;
    let mut norm = inf_norm(&r);
    for iteration in 0..max_iter {
        if norm <= tol {
            return Ok(NewtonOutcome { x, iterations: iteration, residual: norm });
        }
        let jac = jacobian(&x)?;
        if jac.nrows() != x.len() || jac.ncols() != x.len() {
            return Err(Error::DimensionMismatch { expected: x.len(), got: jac.nrows() });
        }
        let step = jac.lu().solve(&r).ok_or(Error::Singular { iteration })?;
        if step.iter().any(|c| !c.is_finite()) {
            return Err(Error::Singular { iteration });
        }
        x -= step;
        r = residual(&x)?;
        norm = inf_norm(&r);
    }
    if norm <= tol {
        return Ok(NewtonOutcome { x, iterations: max_iter, residual: norm });
    }
    Err(Error::MaxIter { iterations: max_iter, residual: norm, last: x.iter().copied().collect() })
}

/// Forward-difference jacobian with step `1e-7·(1 + |x_j|)`.
pub fn fd_jacobian<R>(residual: &mut R, x: &DVector<Complex64>) -> Result<DenseMatrix>
where
    R: FnMut(&DVector<Complex64>) -> Result<DVector<Complex64>>,
{
    let n = x.len();
    let base = residual(x)?;
    let mut jac = DenseMatrix::zeros(base.len(), n);
    let mut xp = x.clone();
    for j in 0..n {
        let h = 1e-7 * (1.0 + x[j].norm());
        xp[j] = x[j] + h;
        let col = (residual(&xp)? - &base) / Complex64::new(h, 0.0);
        jac.set_column(j, &col);
        xp[j] = x[j];
    }
    Ok(jac)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn square_root_of_four() {
        let out = newton_solve(
            |x| Ok(x.map(|v| v * v - c(4.0))),
            |x| Ok(DenseMatrix::from_element(1, 1, x[0] * 2.0)),
            DVector::from_element(1, c(3.0)),
            1e-14,
            50,
        )
        .unwrap();
        assert!((out.x[0] - c(2.0)).norm() < 1e-14);
    }

    #[test]
    fn linear_system_one_step() {
        let a = DenseMatrix::from_row_slice(2, 2, &[c(2.0), c(1.0), c(1.0), c(3.0)]);
        let b = DVector::from_vec(vec![c(1.0), c(2.0)]);
        let out = newton_solve(|x| Ok(&a * x - &b), |_| Ok(a.clone()), DVector::zeros(2), 1e-13, 5).unwrap();
        assert_eq!(out.iterations, 1);
        assert!(((&a * &out.x) - &b).norm() < 1e-13);
    }

    #[test]
    fn singular_jacobian() {
        let err = newton_solve(
            |x| Ok(x.map(|v| v * v + c(1.0))),
            |_| Ok(DenseMatrix::zeros(1, 1)),
            DVector::from_element(1, c(0.0)),
            1e-12,
            5,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Singular { iteration: 0 }));
    }

    #[test]
    fn max_iter_keeps_last_iterate() {
        // x² + 1 has no real root; from a real start Newton wanders on ℝ.
        let err = newton_solve(
            |x| Ok(x.map(|v| v * v + c(1.0))),
            |x| Ok(DenseMatrix::from_element(1, 1, x[0] * 2.0)),
            DVector::from_element(1, c(0.5)),
            1e-12,
            7,
        )
        .unwrap_err();
        match err {
            Error::MaxIter { iterations, last, .. } => {
                assert_eq!(iterations, 7);
                assert_eq!(last.len(), 1);
            }
            other => panic!("unexpected {other}"),
        }
    }

    #[test]
    fn finite_difference_jacobian() {
        let mut f = |x: &DVector<Complex64>| Ok(DVector::from_vec(vec![x[0] * x[1], x[0] * x[0] * x[0]]));
        let x = DVector::from_vec(vec![c(2.0), c(-1.0)]);
        let j = fd_jacobian(&mut f, &x).unwrap();
        assert!((j[(0, 0)] - c(-1.0)).norm() < 1e-6);
        assert!((j[(0, 1)] - c(2.0)).norm() < 1e-6);
        assert!((j[(1, 0)] - c(12.0)).norm() < 1e-5);
    }
}
