use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, Table};
use crate::error::Result;
use crate::integrator::IntegratorConfig;
use crate::pde::{
    amplification_radius, cfl_max_step, heat_solve, l2_stability_check, AmplificationMethod, BoundaryCondition,
    HeatOptions, L2Check, SpatialOperator, Trajectory, FULL_ASSEMBLY_LIMIT,
};

/// Reference `ρ(G)` for `h = π/32`, `q = 2`, `s = 3` by CFL factor.
pub const REFERENCE_RHO: [(f64, f64); 3] = [(0.9, 0.9996), (1.0, 0.9995), (1.1, 1.1161)];

/// Steps of the forced run used for the L² inequality.
pub const FORCED_STEPS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeatRun {
    pub factor: f64,
    pub tau: f64,
    pub steps: usize,
    pub rho_reduced: f64,
    pub rho_full: Option<f64>,
    /// Unforced `u0 = cos x` run over `[0, steps·τ]`.
    pub free: Trajectory,
    /// `f = sin(x)e^{-t}` run over `FORCED_STEPS` steps.
    pub forced_l2: L2Check,
}

/// Dirichlet heat problem on `[-π, π]` with `τ = factor·r·h²/4`, one run
/// per factor (concurrently).
pub fn heat_runs(h: f64, q: usize, s: usize, factors: &[f64], t_final: f64) -> Result<Vec<HeatRun>> {
    let spatial = SpatialOperator::with_width(-PI, PI, h, BoundaryCondition::Dirichlet)?;
    let tau_cfl = cfl_max_step(q, s, h)?;
    factors
        .par_iter()
        .map(|&factor| {
            let tau = tau_cfl * factor;
            let cfg = IntegratorConfig::unit_alpha(q, s, tau)?;
            let method = if s * spatial.n_h <= FULL_ASSEMBLY_LIMIT {
                AmplificationMethod::Both
            } else {
                AmplificationMethod::Reduced
            };
            let amp = amplification_radius(&cfg, &spatial, method)?;
            let steps = (t_final / tau).ceil().max(1.0) as usize;
            let opts = HeatOptions::default();
            let free = heat_solve(&cfg, &spatial, None, &|x: f64| x.cos(), steps as f64 * tau, &opts)?;
            let forcing = |t: Complex64, x: f64| (-t).exp() * x.sin();
            let forced =
                heat_solve(&cfg, &spatial, Some(&forcing), &|x: f64| x.cos(), FORCED_STEPS as f64 * tau, &opts)?;
            Ok(HeatRun {
                factor,
                tau,
                steps,
                rho_reduced: amp.reduced_radius.unwrap_or(f64::NAN),
                rho_full: amp.full_radius,
                free,
                forced_l2: l2_stability_check(&forced),
            })
        })
        .collect()
}

pub fn run_heat_blowup(h: f64, q: usize, s: usize, factors: &[f64], t_final: f64) -> Result<ExperimentReport> {
    let runs = heat_runs(h, q, s, factors, t_final)?;
    let reference = (h - PI / 32.0).abs() < 1e-12 && q == 2 && s == 3;
    let mut table = Table::new([
        "factor",
        "tau",
        "steps",
        "rho",
        "rho_full",
        "blew_up_at",
        "final_norm",
        "l2_holds",
        "l2_worst_margin",
    ]);
    let mut checks = Vec::new();
    for run in &runs {
        let f = run.factor;
        table.push([
            f.to_string(),
            format!("{:.6e}", run.tau),
            run.steps.to_string(),
            format!("{:.6}", run.rho_reduced),
            run.rho_full.map_or(String::new(), |r| format!("{r:.6}")),
            run.free.blew_up.map_or(String::new(), |n| n.to_string()),
            format!("{:.6e}", run.free.norms.last().copied().unwrap_or(f64::NAN)),
            run.forced_l2.holds.to_string(),
            format!("{:.4e}", run.forced_l2.worst_margin),
        ]);
        if reference {
            if let Some(&(_, target)) = REFERENCE_RHO.iter().find(|(g, _)| (g - f).abs() < 1e-12) {
                checks.push(Check::absolute(format!("rho(G) at factor {f}"), target, run.rho_reduced, 1e-3));
            }
        }
        if let Some(full) = run.rho_full {
            checks.push(Check::absolute(format!("reduced vs full rho at factor {f}"), run.rho_reduced, full, 1e-9));
        }
        let unstable = run.rho_reduced > 1.0;
        checks.push(Check::flag(format!("blow-up iff rho > 1 at factor {f}"), unstable, run.free.blew_up.is_some()));
        if !unstable {
            let monotone = run.free.norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-12));
            checks.push(Check::flag(format!("free norm non-increasing at factor {f}"), true, monotone));
        }
        // outside the CFL bound the inequality is expected to fail
        checks.push(Check::flag(format!("L2 inequality iff rho < 1 at factor {f}"), !unstable, run.forced_l2.holds));
    }
    let outputs: Vec<serde_json::Value> = runs
        .iter()
        .map(|r| {
            serde_json::json!({
                "factor": r.factor,
                "rho_reduced": r.rho_reduced,
                "rho_full": r.rho_full,
                "free": r.free.summary(),
                "forced_l2": r.forced_l2,
            })
        })
        .collect();
    Ok(ExperimentReport {
        name: "heat".into(),
        parameters: serde_json::json!({ "h": h, "q": q, "s": s, "factors": factors, "T": t_final }),
        table,
        outputs: serde_json::Value::Array(outputs),
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coarse_mesh_runs() {
        let r = run_heat_blowup(PI / 8.0, 2, 3, &[0.9, 1.2], 20.0).unwrap();
        assert_eq!(r.table.rows.len(), 2);
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
    }
}
