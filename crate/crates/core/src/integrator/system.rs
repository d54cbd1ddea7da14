use num_complex::Complex64;

use crate::error::Result;
use crate::numerics::DenseMatrix;

/// Right-hand side `f(t, u)` of `u' = f(t, u)`, evaluated at complex time.
pub trait OdeSystem {
    fn dim(&self) -> usize;

    fn rhs(&self, t: Complex64, u: &[Complex64], out: &mut [Complex64]) -> Result<()>;

    /// Analytic `∂f/∂u`; `None` falls back to finite differences.
    fn jacobian(&self, _t: Complex64, _u: &[Complex64]) -> Option<DenseMatrix> {
        None
    }
}

type ScalarFn = Box<dyn Fn(Complex64, Complex64) -> Complex64 + Send + Sync>;

/// Scalar ODE from closures.
pub struct ScalarRhs {
    f: ScalarFn,
    df: Option<ScalarFn>,
}

impl ScalarRhs {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(Complex64, Complex64) -> Complex64 + Send + Sync + 'static,
    {
        Self { f: Box::new(f), df: None }
    }

    pub fn with_jacobian<D>(mut self, df: D) -> Self
    where
        D: Fn(Complex64, Complex64) -> Complex64 + Send + Sync + 'static,
    {
        self.df = Some(Box::new(df));
        self
    }

    pub fn eval(&self, t: Complex64, u: Complex64) -> Complex64 {
        (self.f)(t, u)
    }
}

impl std::fmt::Debug for ScalarRhs {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ScalarRhs").field("jacobian", &self.df.is_some()).finish()
    }
}

impl OdeSystem for ScalarRhs {
    fn dim(&self) -> usize {
        1
    }

    fn rhs(&self, t: Complex64, u: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        out[0] = (self.f)(t, u[0]);
        Ok(())
    }

    fn jacobian(&self, t: Complex64, u: &[Complex64]) -> Option<DenseMatrix> {
        self.df.as_ref().map(|df| DenseMatrix::from_element(1, 1, df(t, u[0])))
    }
}

/// `∂f/∂u` at `(t, u)`: analytic when available, else forward differences
/// with step `1e-7·(1 + |u_j|)`.
pub fn rhs_jacobian<S: OdeSystem + ?Sized>(system: &S, t: Complex64, u: &[Complex64]) -> Result<DenseMatrix> {
    if let Some(j) = system.jacobian(t, u) {
        return Ok(j);
    }
    let d = system.dim();
    let mut base = vec![Complex64::new(0.0, 0.0); d];
    system.rhs(t, u, &mut base)?;
    let mut jac = DenseMatrix::zeros(d, d);
    let mut up = u.to_vec();
    let mut fp = vec![Complex64::new(0.0, 0.0); d];
    for j in 0..d {
        let h = 1e-7 * (1.0 + u[j].norm());
        up[j] = u[j] + h;
        system.rhs(t, &up, &mut fp)?;
        for i in 0..d {
            jac[(i, j)] = (fp[i] - base[i]) / h;
        }
        up[j] = u[j];
    }
    Ok(jac)
}
