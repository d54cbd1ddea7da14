//! One line per acceptance criterion. Criteria listed in `EXPECTED_FAILURES`
//! are computed and reported like the others but do not fail the run.

use std::f64::consts::PI;
use std::io::Write;

use abti::appendix::witness_suite;
use abti::experiments::{
    char_poly_equivalence, convergence_report, heat_runs, quadrature_order_law, run_decay_witness, run_max_order_table,
    DecayParameters, REFERENCE_MAX_ORDERS, REFERENCE_RADII, REFERENCE_RHO, REFERENCE_STEPS,
};
use abti::integrator::IntegratorConfig;
use abti::pde::{amplification_radius, cfl_max_step, AmplificationMethod, BoundaryCondition, SpatialOperator};
use abti::stability::{parabolic_radius, MaxOrderOptions};

/// `N·|p̃_N|` is exactly `2N` at ζ = 0, so no factor-3 band over N = 8..48
/// exists, and `p̃_N` stays positive on the interval up to N = 48.
const EXPECTED_FAILURES: &[usize] = &[10];

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn parabolic_radii() -> Outcome {
    let mut worst = 0.0f64;
    for &(n, target) in &REFERENCE_RADII {
        worst = worst.max((parabolic_radius(n, 0).unwrap().radius - target).abs());
    }
    let r2 = parabolic_radius(2, 0).unwrap().radius;
    let exact = (r2 - (3.0 - 5f64.sqrt())).abs();
    Outcome {
        passed: worst <= 1e-3 && exact <= 1e-9,
        detail: format!("max |r_n - table| = {worst:.2e}, |r_2 - (3 - sqrt 5)| = {exact:.2e}"),
    }
}

fn max_orders() -> Outcome {
    let radii: Vec<f64> = REFERENCE_MAX_ORDERS.iter().map(|p| p.0).collect();
    let report = run_max_order_table(&radii, &MaxOrderOptions { cross_check: true, ..Default::default() }).unwrap();
    let orders: Vec<&str> = report.table.rows.iter().map(|r| r[1].as_str()).collect();
    let diff = report.table.rows.iter().map(|r| r[7].parse::<f64>().unwrap()).fold(0.0, f64::max);
    Outcome { passed: report.passed(), detail: format!("N = {orders:?}, max |fourier - direct| = {diff:.2e}") }
}

fn char_poly_roots() -> Outcome {
    let cases = char_poly_equivalence(1..=6, 20, 1.0, 2024, 1e-8).unwrap();
    let worst = cases.iter().map(|c| c.worst_match).fold(0.0, f64::max);
    let surplus_ok = cases.iter().all(|c| c.stray == 0 && c.surplus_zero.iter().all(|&z| z == c.s - c.q));
    Outcome {
        passed: worst <= 1e-8 && surplus_ok,
        detail: format!("worst root/eigenvalue gap {worst:.2e}, surplus zeros = s - q: {surplus_ok}"),
    }
}

fn witnesses() -> Outcome {
    let report = witness_suite(20240601, 100, 1e-10);
    let detail = report.checks.iter().map(|c| format!("{} {:.1e}", c.name, c.worst)).collect::<Vec<_>>().join(", ");
    Outcome { passed: report.passed() && report.checks.len() == 5, detail }
}

fn order_recovery() -> Outcome {
    let mut passed = true;
    let mut parts = Vec::new();
    for (q, s) in [(1, 2), (2, 3), (3, 4), (2, 2), (3, 3)] {
        let r = convergence_report(q, s, &REFERENCE_STEPS, 0.5, 0.01, 1.0).unwrap();
        passed &= r.passed();
        let last = r.table.rows.last().unwrap();
        parts.push(format!("({q},{s}) E={} p={}", last[1], last[2]));
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn quadrature_law() -> Outcome {
    let taus: Vec<f64> = (3..7).map(|k| 0.5f64.powi(k)).collect();
    let mut passed = true;
    let mut parts = Vec::new();
    for q in 2..=4 {
        for s in [q, q + 1] {
            let law = quadrature_order_law(q, s, &taus).unwrap();
            let expected = if s == q { q } else { q + 1 } as f64;
            passed &= (law.slope - expected).abs() <= 0.15;
            parts.push(format!("({q},{s}) {:.3}", law.slope));
        }
    }
    Outcome { passed, detail: format!("slopes {}", parts.join(", ")) }
}

fn heat_amplification() -> Outcome {
    let factors: Vec<f64> = REFERENCE_RHO.iter().map(|p| p.0).collect();
    let runs = heat_runs(PI / 32.0, 2, 3, &factors, 1.0).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for (run, &(_, target)) in runs.iter().zip(&REFERENCE_RHO) {
        passed &= (run.rho_reduced - target).abs() <= 1e-3;
        passed &= run.free.blew_up.is_some() == (run.rho_reduced > 1.0);
        parts.push(format!("x{} rho={:.4} blow-up={:?}", run.factor, run.rho_reduced, run.free.blew_up));
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn tensor_identity() -> Outcome {
    let mut worst = 0.0f64;
    let mut instances = 0;
    for q in 1..=3 {
        for s in [q, q + 1] {
            for cells in [8, 16, 32, 64, 128] {
                for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Periodic] {
                    let h = 2.0 * PI / cells as f64;
                    let spatial = SpatialOperator::with_width(-PI, PI, h, bc).unwrap();
                    if s * spatial.n_h > 512 {
                        continue;
                    }
                    for factor in [0.5, 1.0, 1.1] {
                        let tau = cfl_max_step(q, s, h).unwrap() * factor;
                        let cfg = IntegratorConfig::unit_alpha(q, s, tau).unwrap();
                        let reduced =
                            amplification_radius(&cfg, &spatial, AmplificationMethod::Reduced).unwrap().radius();
                        let full = amplification_radius(&cfg, &spatial, AmplificationMethod::Full).unwrap().radius();
                        worst = worst.max((reduced - full).abs());
                        instances += 1;
                    }
                }
            }
        }
    }
    Outcome { passed: worst <= 1e-9, detail: format!("{instances} instances, max |reduced - full| = {worst:.2e}") }
}

fn l2_stability() -> Outcome {
    let runs = heat_runs(PI / 32.0, 2, 3, &[0.9, 1.0, 1.1], 1.0).unwrap();
    let mut passed = true;
    let mut parts = Vec::new();
    for run in &runs {
        let l2 = &run.forced_l2;
        if run.rho_reduced < 1.0 {
            passed &= l2.holds;
        } else {
            passed &= l2.first_violation.is_some_and(|n| n <= 200);
        }
        parts.push(format!("x{} margin={:.3e} violation={:?}", run.factor, l2.worst_margin, l2.first_violation));
    }
    Outcome { passed, detail: parts.join(", ") }
}

fn decay_band() -> Outcome {
    let report = run_decay_witness(&DecayParameters::default());
    let ratio = &report.outputs["band_ratio"];
    let first_negative = &report.outputs["first_negative"];
    Outcome {
        passed: report.passed(),
        detail: format!("band ratio {ratio} (limit 3), first negative N = {first_negative}"),
    }
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("parabolic radius table", parabolic_radii),
        ("max-order table", max_orders),
        ("characteristic polynomial vs eigenvalues", char_poly_roots),
        ("algebraic witness suite", witnesses),
        ("order recovery on Allen-Cahn", order_recovery),
        ("segment quadrature order law", quadrature_law),
        ("heat amplification radii and blow-up", heat_amplification),
        ("tensor identity", tensor_identity),
        ("L2 stability inequality", l2_stability),
        ("decay band and sign change", decay_band),
    ];
    let mut unexpected = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        let out = run();
        let tag = if out.passed { "PASS" } else { "FAIL" };
        let note = if !out.passed && EXPECTED_FAILURES.contains(&id) { " (expected)" } else { "" };
        // written to the raw handle so the lines survive output capture
        writeln!(std::io::stderr(), "{tag} {id:>2} {name}{note}: {}", out.detail).unwrap();
        if !out.passed && !EXPECTED_FAILURES.contains(&id) {
            unexpected.push(id);
        }
    }
    assert!(unexpected.is_empty(), "criteria failed: {unexpected:?}");
}
