use serde::{Deserialize, Serialize};

use super::report::{Check, ExperimentReport, Table};
use crate::error::Result;
use crate::stability::{decay_witness, max_permissible_order, parabolic_radius, MaxOrderOptions};

/// Reference parabolic radii (`s = q + 1`).
pub const REFERENCE_RADII: [(usize, f64); 5] = [(2, 0.7639), (4, 0.4658), (6, 0.4124), (8, 0.3934), (10, 0.3845)];

/// Reference maximum orders; `1/e` is spelled out as a radius.
pub const REFERENCE_MAX_ORDERS: [(f64, usize); 5] =
    [(0.6, 2), (0.5, 3), (0.4, 7), (0.367_879_441_171_442_33, 31), (0.3, 57)];

/// Parabolic radii for `orders` under `delta_q`, with the `δ = 0` and
/// `δ = 1` values side by side in the table.
pub fn run_radius_table(orders: &[usize], delta_q: u8) -> Result<ExperimentReport> {
    let mut table = Table::new(["n", "radius", "radius_delta0", "radius_delta1"]);
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &n in orders {
        let r0 = parabolic_radius(n, 0)?;
        let r1 = parabolic_radius(n, 1)?;
        let chosen = if delta_q == 1 { &r1 } else { &r0 };
        table.push([
            n.to_string(),
            format!("{:.10}", chosen.radius),
            format!("{:.10}", r0.radius),
            format!("{:.10}", r1.radius),
        ]);
        if delta_q == 0 {
            if let Some(&(_, target)) = REFERENCE_RADII.iter().find(|(m, _)| *m == n) {
                checks.push(Check::absolute(format!("r_{n}"), target, r0.radius, 1e-3));
            }
            if n == 1 {
                checks.push(Check::absolute("r_1", 2.0, r0.radius, 1e-12));
            }
            if n == 2 {
                checks.push(Check::absolute("r_2 = 3 - sqrt(5)", 3.0 - 5f64.sqrt(), r0.radius, 1e-9));
            }
        }
        checks.push(Check::flag(
            format!("n={n}: δ=0 and δ=1 radii differ"),
            true,
            (r0.radius - r1.radius).abs() > 1e-6,
        ));
        details.push(serde_json::json!({ "n": n, "delta0": r0, "delta1": r1 }));
    }
    Ok(ExperimentReport {
        name: "radius".into(),
        parameters: serde_json::json!({ "orders": orders, "delta_q": delta_q }),
        table,
        outputs: serde_json::Value::Array(details),
        checks,
    })
}

/// Maximum permissible order per radius, cross-checked against the
/// Fourier path when `opts.cross_check` is set.
pub fn run_max_order_table(radii: &[f64], opts: &MaxOrderOptions) -> Result<ExperimentReport> {
    let mut table = Table::new([
        "radius",
        "max_order",
        "capped",
        "grid_points",
        "fail_n",
        "fail_zeta",
        "fail_value",
        "cross_check",
    ]);
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &radius in radii {
        let res = max_permissible_order(radius, opts)?;
        let (fn_, fz, fv) = res.first_failure.map_or((String::new(), String::new(), String::new()), |(n, z, v)| {
            (n.to_string(), format!("{z:.6}"), format!("{v:.4e}"))
        });
        table.push([
            format!("{radius:.10}"),
            res.order.to_string(),
            res.capped.to_string(),
            res.grid_points.to_string(),
            fn_,
            fz,
            fv,
            res.cross_check_max_diff.map_or(String::new(), |d| format!("{d:.3e}")),
        ]);
        if opts.delta_q == 0 {
            if let Some(&(_, target)) = REFERENCE_MAX_ORDERS.iter().find(|(r, _)| (r - radius).abs() < 1e-12) {
                checks.push(Check::exact(format!("N({radius:.6})"), target as f64, res.order as f64));
            }
        }
        if let Some(d) = res.cross_check_max_diff {
            checks.push(Check::absolute(format!("fourier vs direct at r={radius:.6}"), 0.0, d, 1e-10));
        }
        details.push(res);
    }
    Ok(ExperimentReport {
        name: "max-order".into(),
        parameters: serde_json::json!({ "radii": radii, "options": opts }),
        table,
        outputs: serde_json::to_value(details)?,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayParameters {
    pub n_min: usize,
    pub n_max: usize,
    pub radius: f64,
    pub grid_points: usize,
    pub delta_q: u8,
}

impl Default for DecayParameters {
    fn default() -> Self {
        Self { n_min: 8, n_max: 48, radius: (-1.0f64).exp(), grid_points: 2048, delta_q: 0 }
    }
}

/// `N·|p̃_N|` band and sign change on `[-radius, 0]`.
pub fn run_decay_witness(p: &DecayParameters) -> ExperimentReport {
    let w = decay_witness(p.n_min..=p.n_max, p.radius, p.grid_points, p.delta_q);
    let mut table = Table::new(["n", "max_scaled", "argmax", "min_value", "argmin"]);
    for r in &w.rows {
        table.push([
            r.n.to_string(),
            format!("{:.6e}", r.max_scaled),
            format!("{:.6}", r.argmax),
            format!("{:.6e}", r.min_value),
            format!("{:.6}", r.argmin),
        ]);
    }
    let checks = vec![
        Check::absolute("band ratio of N·|p_N|", 1.0, w.band_ratio, w.band_limit - 1.0),
        Check::flag(format!("p_N negative for some N <= {}", w.negative_by), true, w.sign_change_holds()),
    ];
    ExperimentReport {
        name: "decay-witness".into(),
        parameters: serde_json::to_value(p).unwrap_or_default(),
        table,
        outputs: serde_json::json!({ "band_ratio": w.band_ratio, "first_negative": w.first_negative }),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radius_report() {
        let r = run_radius_table(&[1, 2, 4, 6, 8, 10], 0).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        assert_eq!(r.table.rows.len(), 6);
    }

    #[test]
    fn max_order_small_radii_and_cap() {
        let opts = MaxOrderOptions { cap: 10, ..Default::default() };
        let r = run_max_order_table(&[0.6, 0.77, 0.01], &opts).unwrap();
        assert!(r.passed());
        let orders: Vec<&str> = r.table.rows.iter().map(|row| row[1].as_str()).collect();
        assert_eq!(orders, ["2", "1", "10"]);
        assert_eq!(r.table.rows[2][2], "true");
    }

    #[test]
    fn decay_report_shape() {
        let p = DecayParameters { n_min: 8, n_max: 12, grid_points: 64, ..Default::default() };
        let r = run_decay_witness(&p);
        assert_eq!(r.table.rows.len(), 5);
        assert_eq!(r.checks.len(), 2);
    }
}
