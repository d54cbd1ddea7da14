use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryCondition {
    /// Homogeneous Dirichlet: interior nodes only.
    Dirichlet,
    /// Circulant stiffness, nodes on `[a, b)`.
    Periodic,
}

/// Finite-difference pair `(M, K)` on a uniform 1-D mesh; `M` is the
/// identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpatialOperator {
    pub k: DMatrix<f64>,
    pub m: DMatrix<f64>,
    pub h: f64,
    pub n_h: usize,
    pub bc: BoundaryCondition,
    /// Node coordinates (`i·h` when built without an interval).
    pub x: Vec<f64>,
}

/// `tridiag(1, -2, 1)/h²`, plus the corner entries when periodic.
pub fn laplacian_1d(n_h: usize, h: f64, bc: BoundaryCondition) -> Result<SpatialOperator> {
    if n_h < 2 || !(h > 0.0) {
        return Err(Error::InvalidArgument(format!("need n_h >= 2 and h > 0, got n_h = {n_h}, h = {h}")));
    }
    let inv = 1.0 / (h * h);
    let mut k = DMatrix::zeros(n_h, n_h);
    for i in 0..n_h {
        k[(i, i)] = -2.0 * inv;
        if i + 1 < n_h {
            k[(i, i + 1)] += inv;
            k[(i + 1, i)] += inv;
        }
    }
    if bc == BoundaryCondition::Periodic {
        k[(0, n_h - 1)] += inv;
        k[(n_h - 1, 0)] += inv;
    }
    let x = (0..n_h).map(|i| i as f64 * h).collect();
    Ok(SpatialOperator { k, m: DMatrix::identity(n_h, n_h), h, n_h, bc, x })
}

impl SpatialOperator {
    /// Uniform mesh on `[a, b]`: `n_h` interior nodes for Dirichlet, `n_h`
    /// nodes on `[a, b)` for periodic.
    pub fn on_interval(a: f64, b: f64, n_h: usize, bc: BoundaryCondition) -> Result<Self> {
        if !(b > a) {
            return Err(Error::InvalidArgument(format!("empty interval [{a}, {b}]")));
        }
        let (h, first) = match bc {
            BoundaryCondition::Dirichlet => ((b - a) / (n_h + 1) as f64, 1),
            BoundaryCondition::Periodic => ((b - a) / n_h as f64, 0),
        };
        let mut op = laplacian_1d(n_h, h, bc)?;
        op.x = (0..n_h).map(|i| a + (i + first) as f64 * h).collect();
        Ok(op)
    }

    /// Mesh of width `h` on `[a, b]`; `(b - a)/h` must be an integer.
    pub fn with_width(a: f64, b: f64, h: f64, bc: BoundaryCondition) -> Result<Self> {
        let cells = ((b - a) / h).round();
        if cells < 2.0 || ((b - a) / h - cells).abs() > 1e-9 * cells {
            return Err(Error::InvalidArgument(format!("h = {h} does not divide [{a}, {b}]")));
        }
        let cells = cells as usize;
        let n_h = match bc {
            BoundaryCondition::Dirichlet => cells - 1,
            BoundaryCondition::Periodic => cells,
        };
        Self::on_interval(a, b, n_h, bc)
    }

    /// Arbitrary symmetric stiffness with identity mass.
    pub fn from_stiffness(k: DMatrix<f64>, h: f64, bc: BoundaryCondition) -> Result<Self> {
        if k.nrows() != k.ncols() {
            return Err(Error::NotSquare { rows: k.nrows(), cols: k.ncols() });
        }
        let n_h = k.nrows();
        let x = (0..n_h).map(|i| i as f64 * h).collect();
        Ok(Self { m: DMatrix::identity(n_h, n_h), k, h, n_h, bc, x })
    }

    pub fn mass_is_identity(&self) -> bool {
        self.m == DMatrix::identity(self.n_h, self.n_h)
    }

    /// Eigenvalues of the symmetric `K`, ascending.
    pub fn stiffness_eigenvalues(&self) -> Vec<f64> {
        let mut e: Vec<f64> = SymmetricEigen::new(self.k.clone()).eigenvalues.iter().copied().collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn spectral_radius(&self) -> f64 {
        self.stiffness_eigenvalues().iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// `sqrt(h·Σ vᵢ²)`.
    pub fn l2_norm(&self, v: &[f64]) -> f64 {
        (self.h * v.iter().map(|x| x * x).sum::<f64>()).sqrt()
    }
}
