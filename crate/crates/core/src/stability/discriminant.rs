use std::f64::consts::{E, PI};
use std::ops::RangeInclusive;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{horner_dd, DoubleDouble, PeriodicQuadrature};

/// `P̃(t; ζ) = (1+t)/(e^{-ζt} - t) - δ·e^{-ζt}`, whose Taylor coefficients
/// in `t` are `p̃_n(ζ; π)` (with `α = 1`).
pub fn generating_eval(t: Complex64, zeta: Complex64, delta_q: u8) -> Result<Complex64> {
    let ez = (-zeta * t).exp();
    let den = ez - t;
    if den.norm() < 1e-14 {
        return Err(Error::Pole { t, denominator: den.norm() });
    }
    let mut v = (1.0 + t) / den;
    if delta_q == 1 {
        v -= ez;
    }
    Ok(v)
}

/// Coefficients of `p̃_n(ζ; π)` (`α = 1`) in double-double, ascending.
#[derive(Debug, Clone)]
pub struct VariantValues {
    n: usize,
    coeffs: Vec<DoubleDouble>,
}

// k^m / m! as a running product.
fn power_over_factorial(k: f64, m: usize) -> DoubleDouble {
    let k = DoubleDouble::from_f64(k);
    (1..=m).fold(DoubleDouble::ONE, |acc, i| acc * k / DoubleDouble::from_f64(i as f64))
}

impl VariantValues {
    pub fn new(n: usize, delta_q: u8) -> Self {
        let mut coeffs: Vec<DoubleDouble> = (0..=n)
            .map(|m| {
                let mut c = power_over_factorial((n - m + 1) as f64, m);
                if m < n {
                    c = c + power_over_factorial((n - m) as f64, m);
                }
                c
            })
            .collect();
        if delta_q == 1 {
            coeffs[n] = coeffs[n] - power_over_factorial(-1.0, n);
        }
        Self { n, coeffs }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn eval(&self, zeta: f64) -> f64 {
        horner_dd(&self.coeffs, zeta).to_f64()
    }
}

/// `p̃_N(ζ; π)` with double-double coefficients and Horner, accurate to a
/// few ulps of the result for `N <= 60` on `ζ ∈ (-1, 0]`.
pub fn poly_value_direct(n: usize, zeta: f64, delta_q: u8) -> f64 {
    VariantValues::new(n, delta_q).eval(zeta)
}

/// The real pole `t₀ = W₀(ζ)/ζ ∈ [1, e)` of `P̃` and its residue, for
/// `ζ ∈ (-1/e, 0]`.
pub fn principal_pole(zeta: f64) -> Option<(f64, f64)> {
    if !(zeta > -1.0 / E && zeta <= 0.0) {
        return None;
    }
    // ln t + ζt is increasing on [1, e] and changes sign there.
    let g = |t: f64| t.ln() + zeta * t;
    let (mut lo, mut hi) = (1.0f64, E);
    let mut t = 1.0;
    if zeta < 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let newton = t - g(t) / (1.0 / t + zeta);
            t = if newton > lo && newton < hi { newton } else { mid };
            let gt = g(t);
            if gt == 0.0 {
                break;
            }
            if gt < 0.0 {
                lo = t;
            } else {
                hi = t;
            }
            if hi - lo < 1e-16 * hi || (gt.abs() < 1e-17) {
                break;
            }
        }
    }
    let residue = (1.0 + t) / (-zeta * t - 1.0);
    Some((t, residue))
}

// Pole subtraction pays off only when the pole hugs the unit circle; near
// ζ = -1/e the two real poles merge at t = e and the residue blows up.
const SUBTRACT_BELOW: f64 = 1.5;

fn subtracted_pole(zeta: f64) -> Option<(f64, f64)> {
    principal_pole(zeta).filter(|(t0, _)| *t0 < SUBTRACT_BELOW)
}

fn smooth_part(t: Complex64, zeta: f64, delta_q: u8, pole: Option<(f64, f64)>) -> Result<Complex64> {
    let mut v = generating_eval(t, Complex64::new(zeta, 0.0), delta_q)?;
    if let Some((t0, res)) = pole {
        v -= res / (t - t0);
    }
    Ok(v)
}

fn check_zeta(zeta: f64) -> Result<()> {
    if !(zeta > -1.0 && zeta <= 0.0) {
        return Err(Error::InvalidArgument(format!("zeta must lie in (-1, 0], got {zeta}")));
    }
    Ok(())
}

/// Taylor coefficients `0..=n_max` of `P̃(·; ζ)` by the trapezoidal rule on
/// `|t| = 1` (half-shifted nodes), all from one sample set per level.
pub fn fourier_coefficients(zeta: f64, delta_q: u8, n_max: usize, tol: f64) -> Result<Vec<f64>> {
    check_zeta(zeta)?;
    let pole = subtracted_pole(zeta);
    let max_nodes = 1usize << 20;
    let mut m = (4 * n_max).next_power_of_two().max(64);
    let mut prev: Option<Vec<f64>> = None;
    let mut difference = f64::INFINITY;
    while m <= max_nodes {
        let mut acc = vec![Complex64::new(0.0, 0.0); n_max + 1];
        for k in 0..m {
            let phi = 2.0 * PI * (k as f64 + 0.5) / m as f64;
            let t = Complex64::from_polar(1.0, phi);
            let g = smooth_part(t, zeta, delta_q, pole)?;
            let step = t.conj();
            let mut w = g;
            for a in acc.iter_mut() {
                *a += w;
                w *= step;
            }
        }
        let mut coeffs: Vec<f64> = acc.iter().map(|a| a.re / m as f64).collect();
        if let Some((t0, res)) = pole {
            for (n, c) in coeffs.iter_mut().enumerate() {
                *c -= res * t0.powi(-(n as i32) - 1);
            }
        }
        if let Some(p) = &prev {
            let last = difference;
            difference = p.iter().zip(&coeffs).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            // Close to ζ = 0 the pole subtraction cancels large terms and the
            // estimates settle on a round-off floor slightly above `tol`.
            let at_floor = difference < 1e3 * tol && difference >= 0.5 * last;
            if difference < tol || at_floor {
                return Ok(coeffs);
            }
        }
        prev = Some(coeffs);
        m *= 2;
    }
    Err(Error::QuadratureStagnation { nodes: max_nodes, difference })
}

/// `(1/2π)∫ P̃(e^{iφ}; ζ)·e^{-iNφ} dφ`, checked against [`poly_value_direct`].
pub fn fourier_discriminant(n: usize, zeta: f64, delta_q: u8, tol: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("order must be at least 1".into()));
    }
    check_zeta(zeta)?;
    let pole = subtracted_pole(zeta);
    let q = PeriodicQuadrature::shifted().integrate(
        |phi| {
            let t = Complex64::from_polar(1.0, phi);
            Ok(smooth_part(t, zeta, delta_q, pole)? * Complex64::from_polar(1.0, -(n as f64) * phi))
        },
        tol,
    )?;
    let mut value = q.value.re / (2.0 * PI);
    if let Some((t0, res)) = pole {
        value -= res * t0.powi(-(n as i32) - 1);
    }
    let direct = poly_value_direct(n, zeta, delta_q);
    if (value - direct).abs() > 100.0 * tol {
        return Err(Error::CrossCheck { n, zeta, quadrature: value, direct });
    }
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MaxOrderOptions {
    pub delta_q: u8,
    /// Accepted drift of the failing minimiser between grid refinements.
    pub grid_tol: f64,
    /// `p̃_n` counts as positive only above this value.
    pub positivity_floor: f64,
    pub cap: usize,
    pub start_points: usize,
    pub max_points: usize,
    /// Compare every direct value on the final grid with the Fourier path.
    pub cross_check: bool,
}

impl Default for MaxOrderOptions {
    fn default() -> Self {
        Self {
            delta_q: 0,
            grid_tol: 1e-3,
            positivity_floor: 2e-12,
            cap: 60,
            start_points: 256,
            max_points: 1 << 14,
            cross_check: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxOrderResult {
    pub radius: f64,
    pub order: usize,
    /// No failure found up to `cap`.
    pub capped: bool,
    pub grid_points: usize,
    /// `(n, ζ, p̃_n(ζ))` at the first failing order.
    pub first_failure: Option<(usize, f64, f64)>,
    /// Smallest value of each `p̃_n`, `n = 1..=order` (plus the failing one).
    pub minima: Vec<(usize, f64, f64)>,
    /// Largest `|direct - Fourier|` over the final grid.
    pub cross_check_max_diff: Option<f64>,
}

fn lobatto_grid(radius: f64, m: usize) -> Vec<f64> {
    (0..m)
        .map(|i| if i == m - 1 { 0.0 } else { -0.5 * radius * (1.0 + (PI * i as f64 / (m - 1) as f64).cos()) })
        .collect()
}

struct Scan {
    order: usize,
    failure: Option<(usize, f64, f64)>,
    minima: Vec<(usize, f64, f64)>,
}

fn scan(grid: &[f64], polys: &[VariantValues], floor: f64) -> Scan {
    let mut minima = Vec::new();
    for p in polys {
        let (zeta, value) = grid
            .par_iter()
            .map(|&z| (z, p.eval(z)))
            .reduce(|| (f64::NAN, f64::INFINITY), |a, b| if b.1 < a.1 { b } else { a });
        minima.push((p.order(), zeta, value));
        if value <= floor {
            return Scan { order: p.order() - 1, failure: Some((p.order(), zeta, value)), minima };
        }
    }
    Scan { order: polys.len(), failure: None, minima }
}

/// Largest `N` with `p̃_n > floor` on `[-radius, 0]` for every `n <= N`.
///
/// The grid is Chebyshev–Lobatto, doubled until the order and the failing
/// minimiser agree between two successive levels.
pub fn max_permissible_order(radius: f64, opts: &MaxOrderOptions) -> Result<MaxOrderResult> {
    if !(radius > 0.0 && radius < 2.0) {
        return Err(Error::InvalidArgument(format!("radius must lie in (0, 2), got {radius}")));
    }
    if opts.cap == 0 || opts.start_points < 2 {
        return Err(Error::InvalidArgument("cap and start_points must be positive".into()));
    }
    let polys: Vec<VariantValues> = (1..=opts.cap).map(|n| VariantValues::new(n, opts.delta_q)).collect();
    let mut m = opts.start_points;
    let mut grid = lobatto_grid(radius, m);
    let mut current = scan(&grid, &polys, opts.positivity_floor);
    while 2 * m <= opts.max_points {
        let finer_grid = lobatto_grid(radius, 2 * m);
        let finer = scan(&finer_grid, &polys, opts.positivity_floor);
        let stable = finer.order == current.order
            && match (current.failure, finer.failure) {
                (Some(a), Some(b)) => (a.1 - b.1).abs() <= opts.grid_tol,
                (None, None) => true,
                _ => false,
            };
        m *= 2;
        grid = finer_grid;
        current = finer;
        if stable {
            break;
        }
    }
    let cross_check_max_diff = if opts.cross_check {
        let n_max = current.failure.map_or(opts.cap, |f| f.0);
        let diffs = grid
            .par_iter()
            .map(|&z| {
                let fourier = fourier_coefficients(z, opts.delta_q, n_max, 1e-14)?;
                Ok(polys[..n_max].iter().map(|p| (p.eval(z) - fourier[p.order()]).abs()).fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?;
        Some(diffs.into_iter().fold(0.0, f64::max))
    } else {
        None
    };
    Ok(MaxOrderResult {
        radius,
        order: current.order,
        capped: current.failure.is_none(),
        grid_points: m,
        first_failure: current.failure,
        minima: current.minima,
        cross_check_max_diff,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayRow {
    pub n: usize,
    /// `max N·|p̃_N(ζ)|` over the grid.
    pub max_scaled: f64,
    pub argmax: f64,
    pub min_value: f64,
    pub argmin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayWitness {
    pub radius: f64,
    pub rows: Vec<DecayRow>,
    /// Largest over smallest `max_scaled`.
    pub band_ratio: f64,
    pub band_limit: f64,
    /// Smallest `N` whose minimum on the grid is negative.
    pub first_negative: Option<usize>,
    pub negative_by: usize,
}

impl DecayWitness {
    pub fn band_holds(&self) -> bool {
        self.band_ratio <= self.band_limit
    }

    pub fn sign_change_holds(&self) -> bool {
        self.first_negative.is_some_and(|n| n <= self.negative_by)
    }

    pub fn holds(&self) -> bool {
        self.band_holds() && self.sign_change_holds()
    }
}

/// Tabulates `N·|p̃_N|` and `min p̃_N` on a Lobatto grid of `[-radius, 0]`.
pub fn decay_witness(orders: RangeInclusive<usize>, radius: f64, grid_points: usize, delta_q: u8) -> DecayWitness {
    let grid = lobatto_grid(radius, grid_points.max(2));
    let rows: Vec<DecayRow> = orders
        .into_par_iter()
        .map(|n| {
            let p = VariantValues::new(n, delta_q);
            let mut row = DecayRow { n, max_scaled: 0.0, argmax: 0.0, min_value: f64::INFINITY, argmin: 0.0 };
            for &z in &grid {
                let v = p.eval(z);
                let scaled = n as f64 * v.abs();
                if scaled > row.max_scaled {
                    row.max_scaled = scaled;
                    row.argmax = z;
                }
                if v < row.min_value {
                    row.min_value = v;
                    row.argmin = z;
                }
            }
            row
        })
        .collect();
    let hi = rows.iter().map(|r| r.max_scaled).fold(0.0, f64::max);
    let lo = rows.iter().map(|r| r.max_scaled).fold(f64::INFINITY, f64::min);
    let first_negative = rows.iter().find(|r| r.min_value < 0.0).map(|r| r.n);
    DecayWitness { radius, rows, band_ratio: hi / lo, band_limit: 3.0, first_negative, negative_by: 35 }
}
