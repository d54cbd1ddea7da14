use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::system::{rhs_jacobian, OdeSystem};
use super::{build_stepper, IntegratorConfig, StepperMatrices};
use crate::error::{Error, Result};
use crate::numerics::{newton_solve, DenseMatrix};

/// Node values at one time level: row `j` holds the state at `t_n + r·ω_j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolutionVector {
    pub values: DenseMatrix,
    pub time_index: usize,
    pub base_time: f64,
}

impl SolutionVector {
    pub fn s(&self) -> usize {
        self.values.nrows()
    }

    pub fn dim(&self) -> usize {
        self.values.ncols()
    }

    /// Largest `|u_j - conj(u_k)|` over conjugate node pairs `ω_k = conj(ω_j)`.
    pub fn conjugate_asymmetry(&self) -> f64 {
        let s = self.s();
        let mut worst: f64 = 0.0;
        for j in 0..s {
            // ω_{j+1} and ω_{s-j-1} are conjugate; index s-1 is ω = 1.
            let k = (2 * s - j - 2) % s;
            for d in 0..self.dim() {
                worst = worst.max((self.values[(j, d)] - self.values[(k, d)].conj()).norm());
            }
        }
        worst
    }
}

/// The scheme for one configuration, with its matrices built once.
#[derive(Debug, Clone)]
pub struct Integrator {
    cfg: IntegratorConfig,
    stepper: StepperMatrices,
    start_time: f64,
}

impl Integrator {
    pub fn new(cfg: IntegratorConfig) -> Self {
        let stepper = build_stepper(&cfg).expect("validated configuration");
        Self { cfg, stepper, start_time: 0.0 }
    }

    pub fn try_new(cfg: IntegratorConfig) -> Result<Self> {
        Ok(Self { stepper: build_stepper(&cfg)?, cfg, start_time: 0.0 })
    }

    pub fn with_start_time(mut self, t0: f64) -> Self {
        self.start_time = t0;
        self
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.cfg
    }

    pub fn stepper(&self) -> &StepperMatrices {
        &self.stepper
    }

    pub fn time_at(&self, time_index: usize) -> f64 {
        self.start_time + time_index as f64 * self.cfg.tau
    }

    /// Complex nodes `t_n + r·ω_j`.
    pub fn node_times(&self, base_time: f64) -> Vec<Complex64> {
        self.stepper.nodes.iter().map(|w| base_time + self.cfg.r * w).collect()
    }

    /// `f` at every node, one row per node.
    pub fn sample_rhs<S: OdeSystem + ?Sized>(&self, system: &S, state: &SolutionVector) -> Result<DenseMatrix> {
        let (s, d) = (state.s(), state.dim());
        let mut out = DenseMatrix::zeros(s, d);
        let mut u = vec![Complex64::new(0.0, 0.0); d];
        let mut fu = vec![Complex64::new(0.0, 0.0); d];
        for (j, t) in self.node_times(state.base_time).into_iter().enumerate() {
            for k in 0..d {
                u[k] = state.values[(j, k)];
            }
            system.rhs(t, &u, &mut fu)?;
            for k in 0..d {
                out[(j, k)] = fu[k];
            }
        }
        Ok(out)
    }

    /// Initial node vector from `u⁰𝟙 = U - r·B(0)·f(U)`, solved by Newton
    /// from `u⁰𝟙`. A linear `f` converges after one step.
    pub fn init_vector<S: OdeSystem + ?Sized>(
        &self,
        system: &S,
        u0: &[Complex64],
        tol: f64,
        max_iter: usize,
    ) -> Result<SolutionVector> {
        let d = system.dim();
        if u0.len() != d {
            return Err(Error::DimensionMismatch { expected: d, got: u0.len() });
        }
        let s = self.cfg.s;
        let r = self.cfg.r;
        let t0 = self.start_time;
        let times = self.node_times(t0);
        let b0 = &self.stepper.b_zero;
        let as_state = |x: &DVector<Complex64>| SolutionVector {
            values: DenseMatrix::from_fn(s, d, |j, k| x[j * d + k]),
            time_index: 0,
            base_time: t0,
        };
        let x0 = DVector::from_fn(s * d, |i, _| u0[i % d]);
        let residual = |x: &DVector<Complex64>| -> Result<DVector<Complex64>> {
            let fx = self.sample_rhs(system, &as_state(x))?;
            let bf = b0 * fx;
            Ok(DVector::from_fn(s * d, |i, _| x[i] - u0[i % d] - r * bf[(i / d, i % d)]))
        };
        let jacobian = |x: &DVector<Complex64>| -> Result<DenseMatrix> {
            let mut jac = DenseMatrix::identity(s * d, s * d);
            for (m, t) in times.iter().enumerate() {
                let um: Vec<Complex64> = (0..d).map(|k| x[m * d + k]).collect();
                let jm = rhs_jacobian(system, *t, &um)?;
                for j in 0..s {
                    let w = b0[(j, m)] * r;
                    for a in 0..d {
                        for b in 0..d {
                            jac[(j * d + a, m * d + b)] -= w * jm[(a, b)];
                        }
                    }
                }
            }
            Ok(jac)
        };
        let out = newton_solve(residual, jacobian, x0, tol, max_iter)?;
        Ok(as_state(&out.x))
    }

    /// `u[n+1] = A·u[n] + r·B(α)·f[n]`, one rhs evaluation per node.
    pub fn propagate<S: OdeSystem + ?Sized>(&self, state: &SolutionVector, system: &S) -> Result<SolutionVector> {
        let fx = self.sample_rhs(system, state)?;
        Ok(self.propagate_with(state, &fx))
    }

    /// Propagator step with precomputed node samples of `f`.
    pub fn propagate_with(&self, state: &SolutionVector, samples: &DenseMatrix) -> SolutionVector {
        let mean = self.mean_row(&state.values);
        let update = &self.stepper.b_alpha * samples * Complex64::new(self.cfg.r, 0.0);
        let values = DenseMatrix::from_fn(state.s(), state.dim(), |j, k| mean[k] + update[(j, k)]);
        SolutionVector { values, time_index: state.time_index + 1, base_time: state.base_time + self.cfg.tau }
    }

    /// Arithmetic mean of the node values, per component. The imaginary
    /// part is kept.
    pub fn reconstruct(&self, state: &SolutionVector) -> Vec<Complex64> {
        self.mean_row(&state.values)
    }

    fn mean_row(&self, values: &DenseMatrix) -> Vec<Complex64> {
        let s = values.nrows() as f64;
        values.column_iter().map(|c| c.sum() / s).collect()
    }

    /// `(r/s)·𝟙ᵀB(α)·f`, the step's approximation of `∫ f dt` over
    /// `[t_n, t_n + τ]`.
    pub fn segment_quadrature(&self, samples: &[Complex64]) -> Result<Complex64> {
        let s = self.cfg.s;
        if samples.len() != s {
            return Err(Error::DimensionMismatch { expected: s, got: samples.len() });
        }
        let b = &self.stepper.b_alpha;
        let mut acc = Complex64::new(0.0, 0.0);
        for m in 0..s {
            let col: Complex64 = b.column(m).sum();
            acc += col * samples[m];
        }
        Ok(acc * self.cfg.r / s as f64)
    }

    /// Initializes and takes `steps` propagator steps; returns the final
    /// state and the reconstructed value at every level.
    pub fn run<S: OdeSystem + ?Sized>(
        &self,
        system: &S,
        u0: &[Complex64],
        steps: usize,
        newton_tol: f64,
    ) -> Result<(SolutionVector, Vec<Vec<Complex64>>)> {
        let mut state = self.init_vector(system, u0, newton_tol, 50)?;
        let mut history = Vec::with_capacity(steps + 1);
        history.push(self.reconstruct(&state));
        for _ in 0..steps {
            state = self.propagate(&state, system)?;
            history.push(self.reconstruct(&state));
        }
        Ok((state, history))
    }
}
