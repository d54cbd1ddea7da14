use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, Table};
use crate::appendix::witness_suite;
use crate::error::Result;
use crate::integrator::StepperMatrices;
use crate::numerics::{dense_eigvals, poly_roots};
use crate::stability::char_poly;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceCase {
    pub q: usize,
    pub s: usize,
    pub samples: usize,
    /// Largest distance from a polynomial root to its matched eigenvalue.
    pub worst_match: f64,
    /// Eigenvalues left over after matching that lie below `zero_tol`, per
    /// sample; all equal to `s - q` when the case is consistent.
    pub surplus_zero: Vec<usize>,
    /// Left-over eigenvalues above `zero_tol`.
    pub stray: usize,
}

/// Compares the roots of the degree-`q` characteristic polynomial with the
/// eigenvalues of `A + z·B(α)/α` for random `z` with `|z| <= 2`.
pub fn char_poly_equivalence(
    qs: std::ops::RangeInclusive<usize>,
    samples: usize,
    alpha: f64,
    seed: u64,
    zero_tol: f64,
) -> Result<Vec<EquivalenceCase>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for q in qs {
        for s in [q, q + 1] {
            let stepper = StepperMatrices::new(q, s, alpha)?;
            let delta = u8::from(s == q);
            let mut case = EquivalenceCase { q, s, samples, worst_match: 0.0, surplus_zero: Vec::new(), stray: 0 };
            for _ in 0..samples {
                let z = Complex64::from_polar(
                    2.0 * rng.gen::<f64>().sqrt(),
                    rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
                );
                let mut eig = dense_eigvals(&stepper.stability_matrix(z, alpha))?;
                let roots = poly_roots(&char_poly(q, z, alpha, delta))?;
                for r in roots {
                    let (k, d) = eig
                        .iter()
                        .enumerate()
                        .map(|(k, e)| (k, (e - r).norm()))
                        .min_by(|a, b| a.1.total_cmp(&b.1))
                        .expect("s >= q eigenvalues");
                    case.worst_match = case.worst_match.max(d);
                    eig.swap_remove(k);
                }
                let zeros = eig.iter().filter(|e| e.norm() <= zero_tol).count();
                case.stray += eig.len() - zeros;
                case.surplus_zero.push(zeros);
            }
            out.push(case);
        }
    }
    Ok(out)
}

/// Polynomial/eigenvalue equivalence for `q = 1..=6` and the five algebraic
/// witnesses, as one report.
pub fn run_appendix_report(seed: u64, draws: usize, tol: f64) -> Result<ExperimentReport> {
    let witness = witness_suite(seed, draws, tol);
    let equivalence = char_poly_equivalence(1..=6, 20, 1.0, seed, 1e-8)?;
    let mut table = Table::new(["check", "worst", "passed"]);
    let mut checks = Vec::new();
    for c in &witness.checks {
        table.push([c.name.clone(), format!("{:.3e}", c.worst), c.passed.to_string()]);
        checks.push(Check::absolute(c.name.clone(), 0.0, c.worst, tol));
    }
    for case in &equivalence {
        let name = format!("roots-vs-eigenvalues q={} s={}", case.q, case.s);
        let consistent = case.stray == 0 && case.surplus_zero.iter().all(|&z| z == case.s - case.q);
        table.push([
            name.clone(),
            format!("{:.3e}", case.worst_match),
            (case.worst_match <= 1e-8 && consistent).to_string(),
        ]);
        checks.push(Check::absolute(name.clone(), 0.0, case.worst_match, 1e-8));
        checks.push(Check::flag(format!("{name} surplus zero eigenvalues = s - q"), true, consistent));
    }
    Ok(ExperimentReport {
        name: "verify-appendix".into(),
        parameters: serde_json::json!({ "seed": seed, "draws": draws, "tolerance": tol }),
        table,
        outputs: serde_json::json!({ "witness": witness, "equivalence": equivalence }),
        checks,
    })
}
