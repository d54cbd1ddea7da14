use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Dense complex matrix, column-major storage as in nalgebra.
pub type DenseMatrix = DMatrix<Complex64>;

const SCHUR_EPS: f64 = 1e-15;
const SCHUR_MAX_ITER: usize = 100_000;

pub(crate) fn schur_diagonal(m: DenseMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let schur = Schur::try_new(m, SCHUR_EPS, SCHUR_MAX_ITER).ok_or(Error::EigenNoConvergence { dim: n })?;
    let (_, t) = schur.unpack();
    Ok((0..n).map(|i| t[(i, i)]).collect())
}

/// Eigenvalues with multiplicity, read off the complex Schur form.
pub fn dense_eigvals(m: &DenseMatrix) -> Result<Vec<Complex64>> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    schur_diagonal(m.clone())
}

pub fn spectral_radius(m: &DenseMatrix) -> Result<f64> {
    Ok(dense_eigvals(m)?.iter().map(|l| l.norm()).fold(0.0, f64::max))
}

pub fn kron(a: &DenseMatrix, b: &DenseMatrix) -> DenseMatrix {
    a.kronecker(b)
}

/// Determinant by LU with partial pivoting.
pub fn determinant(m: &DenseMatrix) -> Result<Complex64> {
    if m.nrows() != m.ncols() {
        return Err(Error::NotSquare { rows: m.nrows(), cols: m.ncols() });
    }
    Ok(m.clone().lu().determinant())
}
