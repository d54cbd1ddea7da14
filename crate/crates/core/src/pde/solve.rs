use std::io::Write;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{amplification_radius, AmplificationMethod, SpatialOperator};
use crate::error::{Error, Result};
use crate::integrator::{Integrator, IntegratorConfig, OdeSystem};
use crate::numerics::DenseMatrix;

type Forcing<'a> = &'a (dyn Fn(Complex64, f64) -> Complex64 + Sync);

/// Semi-discrete heat equation `u' = K·u + f(t, x)` (identity mass).
pub struct HeatSystem<'a> {
    spatial: &'a SpatialOperator,
    k: DenseMatrix,
    forcing: Option<Forcing<'a>>,
}

impl<'a> HeatSystem<'a> {
    pub fn new(spatial: &'a SpatialOperator, forcing: Option<Forcing<'a>>) -> Self {
        let k = spatial.k.map(|v| Complex64::new(v, 0.0));
        Self { spatial, k, forcing }
    }
}

impl OdeSystem for HeatSystem<'_> {
    fn dim(&self) -> usize {
        self.spatial.n_h
    }

    fn rhs(&self, t: Complex64, u: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        let n = self.spatial.n_h;
        for i in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..n {
                let kij = self.spatial.k[(i, j)];
                if kij != 0.0 {
                    acc += u[j] * kij;
                }
            }
            if let Some(f) = self.forcing {
                acc += f(t, self.spatial.x[i]);
            }
            out[i] = acc;
        }
        Ok(())
    }

    fn jacobian(&self, _t: Complex64, _u: &[Complex64]) -> Option<DenseMatrix> {
        Some(self.k.clone())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatOptions {
    /// Blow-up is declared once `‖u‖ > cap_factor·‖u⁰‖`.
    pub cap_factor: f64,
    pub newton_tol: f64,
    /// Keep stepping after blow-up (until the norm overflows).
    pub continue_after_blowup: bool,
}

impl Default for HeatOptions {
    fn default() -> Self {
        Self { cap_factor: 1e3, newton_tol: 1e-12, continue_after_blowup: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub x: Vec<f64>,
    /// Real part of the reconstruction at each level.
    pub states: Vec<Vec<f64>>,
    /// Largest imaginary part dropped from the reconstructions.
    pub max_imag: f64,
    /// h-weighted L² norms of `states`.
    pub norms: Vec<f64>,
    /// `‖f(t_n, ·)‖` at each level.
    pub forcing_norms: Vec<f64>,
    pub initial_norm: f64,
    pub tau: f64,
    /// First level whose norm exceeds the cap.
    pub blew_up: Option<usize>,
    /// Amplification radius `ρ(G)` for the run.
    pub rho: Option<f64>,
}

impl Trajectory {
    pub fn steps(&self) -> usize {
        self.times.len() - 1
    }

    /// Long-format CSV `t,x,u`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["t", "x", "u"])?;
        for (t, state) in self.times.iter().zip(&self.states) {
            for (x, u) in self.x.iter().zip(state) {
                w.write_record([t.to_string(), x.to_string(), u.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// Norms, blow-up index and `ρ(G)` without the states.
    pub fn summary(&self) -> serde_json::Value {
        serde_json::json!({
            "tau": self.tau,
            "steps": self.steps(),
            "final_time": self.times.last(),
            "initial_norm": self.initial_norm,
            "norms": self.norms,
            "blew_up": self.blew_up,
            "rho": self.rho,
            "max_imag": self.max_imag,
        })
    }
}

/// Runs the scheme on `u' = K·u + f` from `u⁰` to `t_final`, which must be
/// a whole number of steps.
pub fn heat_solve(
    cfg: &IntegratorConfig,
    spatial: &SpatialOperator,
    forcing: Option<Forcing<'_>>,
    u0: &dyn Fn(f64) -> f64,
    t_final: f64,
    opts: &HeatOptions,
) -> Result<Trajectory> {
    let steps_f = t_final / cfg.tau;
    let steps = steps_f.round();
    if steps < 1.0 || (steps_f - steps).abs() > 1e-9 * steps.max(1.0) {
        return Err(Error::InvalidArgument(format!("tau = {} does not divide T = {t_final}", cfg.tau)));
    }
    let steps = steps as usize;
    let system = HeatSystem::new(spatial, forcing);
    let integrator = Integrator::try_new(*cfg)?;
    let data: Vec<f64> = spatial.x.iter().map(|&x| u0(x)).collect();
    let initial_norm = spatial.l2_norm(&data);
    let cap = opts.cap_factor * initial_norm;
    let forcing_norm = |t: f64| -> f64 {
        match forcing {
            None => 0.0,
            Some(f) => {
                let v: Vec<f64> = spatial.x.iter().map(|&x| f(Complex64::new(t, 0.0), x).re).collect();
                spatial.l2_norm(&v)
            }
        }
    };
    let u0c: Vec<Complex64> = data.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut state = integrator.init_vector(&system, &u0c, opts.newton_tol * initial_norm.max(1.0), 20)?;

    let mut traj = Trajectory {
        times: Vec::with_capacity(steps + 1),
        x: spatial.x.clone(),
        states: Vec::with_capacity(steps + 1),
        max_imag: 0.0,
        norms: Vec::with_capacity(steps + 1),
        forcing_norms: Vec::with_capacity(steps + 1),
        initial_norm,
        tau: cfg.tau,
        blew_up: None,
        rho: if spatial.mass_is_identity() {
            amplification_radius(cfg, spatial, AmplificationMethod::Reduced)?.reduced_radius
        } else {
            None
        },
    };
    let record = |traj: &mut Trajectory, n: usize, values: Vec<Complex64>| {
        let t = integrator.time_at(n);
        let re: Vec<f64> = values.iter().map(|v| v.re).collect();
        let imag = values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
        let norm = spatial.l2_norm(&re);
        traj.max_imag = traj.max_imag.max(imag);
        traj.times.push(t);
        traj.norms.push(norm);
        traj.forcing_norms.push(forcing_norm(t));
        traj.states.push(re);
        if traj.blew_up.is_none() && !(norm <= cap) {
            traj.blew_up = Some(n);
        }
    };
    record(&mut traj, 0, integrator.reconstruct(&state));
    for n in 1..=steps {
        state = integrator.propagate(&state, &system)?;
        record(&mut traj, n, integrator.reconstruct(&state));
        if traj.blew_up.is_some() && !opts.continue_after_blowup {
            break;
        }
        if !traj.norms[n].is_finite() {
            break;
        }
    }
    Ok(traj)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L2Check {
    pub holds: bool,
    /// `min_n (‖u⁰‖ + τ·Σ_{ν<n} ‖f^ν‖ - ‖uⁿ‖)`.
    pub worst_margin: f64,
    pub first_violation: Option<usize>,
}

/// Checks `‖uⁿ‖ <= ‖u⁰‖ + τ·Σ_{ν<n} ‖f^ν‖` at every level of the run.
pub fn l2_stability_check(traj: &Trajectory) -> L2Check {
    let u0 = traj.norms[0];
    let mut budget = u0;
    let mut worst = f64::INFINITY;
    let mut first_violation = None;
    for n in 1..traj.norms.len() {
        budget += traj.tau * traj.forcing_norms[n - 1];
        let margin = budget - traj.norms[n];
        if !(margin >= 0.0) && first_violation.is_none() {
            first_violation = Some(n);
        }
        worst = worst.min(margin);
    }
    L2Check { holds: first_violation.is_none(), worst_margin: worst, first_violation }
}
