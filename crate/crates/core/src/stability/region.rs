use std::io::Write;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::polys::char_poly;
use crate::error::{Error, Result};
use crate::integrator::{IntegratorConfig, StepperMatrices};
use crate::numerics::{poly_roots, spectral_radius};

/// Both evaluations of `ρ(R(z))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorPaths {
    pub polynomial: f64,
    pub matrix: f64,
}

/// `ρ(A + z·B(α)/α)` from the degree-`q` characteristic polynomial.
pub fn stability_indicator_fast(z: Complex64, q: usize, alpha: f64, delta_q: u8) -> Result<f64> {
    let p = char_poly(q, z, alpha, delta_q);
    Ok(poly_roots(&p)?.iter().map(|r| r.norm()).fold(0.0, f64::max))
}

/// `ρ(R(z))` from the `s×s` matrix and from the polynomial; fails when the
/// two differ by more than `1e-6` (relative to `max(1, ρ)`).
pub fn stability_indicator(z: Complex64, cfg: &IntegratorConfig) -> Result<IndicatorPaths> {
    let m = StepperMatrices::new(cfg.q, cfg.s, cfg.alpha)?;
    let matrix = spectral_radius(&m.stability_matrix(z, cfg.alpha))?;
    let polynomial = stability_indicator_fast(z, cfg.q, cfg.alpha, cfg.delta_q)?;
    if (matrix - polynomial).abs() > 1e-6 * matrix.max(1.0) {
        return Err(Error::PolyMatrixMismatch { poly: polynomial, matrix });
    }
    Ok(IndicatorPaths { polynomial, matrix })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityGrid {
    pub q: usize,
    pub s: usize,
    pub alpha: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// `rho[i][k]` at `re[k] + i·im[i]`.
    pub rho: Vec<Vec<f64>>,
}

impl StabilityGrid {
    pub fn get(&self, re_index: usize, im_index: usize) -> f64 {
        self.rho[im_index][re_index]
    }

    /// Fraction of grid points with `ρ < 1`.
    pub fn stable_fraction(&self) -> f64 {
        let total = self.re.len() * self.im.len();
        let stable = self.rho.iter().flatten().filter(|&&r| r < 1.0).count();
        stable as f64 / total as f64
    }

    /// Long-format CSV with columns `re,im,rho`.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["re", "im", "rho"])?;
        for (i, y) in self.im.iter().enumerate() {
            for (k, x) in self.re.iter().enumerate() {
                w.write_record([x.to_string(), y.to_string(), self.rho[i][k].to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_json<W: Write>(&self, out: W) -> Result<()> {
        serde_json::to_writer_pretty(out, self)?;
        Ok(())
    }
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

/// `ρ(R(z))` on a rectangular grid (polynomial path, parallel over rows).
pub fn stability_region(
    cfg: &IntegratorConfig,
    re_range: (f64, f64),
    im_range: (f64, f64),
    resolution: (usize, usize),
) -> Result<StabilityGrid> {
    if resolution.0 < 2 || resolution.1 < 2 {
        return Err(Error::InvalidArgument("grid resolution must be at least 2 per axis".into()));
    }
    let re = linspace(re_range.0, re_range.1, resolution.0);
    let im = linspace(im_range.0, im_range.1, resolution.1);
    let rho = im
        .par_iter()
        .map(|&y| {
            re.iter()
                .map(|&x| stability_indicator_fast(Complex64::new(x, y), cfg.q, cfg.alpha, cfg.delta_q))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(StabilityGrid { q: cfg.q, s: cfg.s, alpha: cfg.alpha, re, im, rho })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(q: usize, s: usize) -> IntegratorConfig {
        IntegratorConfig::unit_alpha(q, s, 1.0).unwrap()
    }

    #[test]
    fn origin_is_marginal() {
        for (q, s) in [(1, 2), (2, 2), (2, 3), (4, 5)] {
            let p = stability_indicator(Complex64::new(0.0, 0.0), &cfg(q, s)).unwrap();
            assert!((p.polynomial - 1.0).abs() < 1e-12 && (p.matrix - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn euler_root_at_minus_one() {
        let p = stability_indicator(Complex64::new(-1.0, 0.0), &cfg(1, 2)).unwrap();
        assert!(p.polynomial < 1e-12 && p.matrix < 1e-7);
    }

    #[test]
    fn parabolic_boundary_is_bracketed() {
        let r2 = 3.0 - 5f64.sqrt();
        let out = stability_indicator(Complex64::new(-r2 * (1.0 + 1e-3), 0.0), &cfg(2, 3)).unwrap();
        let inside = stability_indicator(Complex64::new(-r2 * (1.0 - 1e-3), 0.0), &cfg(2, 3)).unwrap();
        assert!(out.matrix > 1.0 && out.polynomial > 1.0);
        assert!(inside.matrix < 1.0 && inside.polynomial < 1.0);
    }

    #[test]
    fn euler_region_is_the_unit_disk() {
        let g = stability_region(&cfg(1, 2), (-2.2, 0.2), (-1.2, 1.2), (25, 25)).unwrap();
        for (i, y) in g.im.iter().enumerate() {
            for (k, x) in g.re.iter().enumerate() {
                let want = Complex64::new(1.0 + x, *y).norm();
                assert!((g.get(k, i) - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn right_half_plane_is_unstable() {
        for q in 1..=8 {
            for s in [q, q + 1] {
                let g = stability_region(&cfg(q, s), (0.1, 0.1), (-1.0, 1.0), (2, 9)).unwrap();
                assert!(g.rho.iter().flatten().all(|&r| r > 1.0), "q = {q}, s = {s}");
            }
        }
    }

    #[test]
    fn csv_export() {
        let g = stability_region(&cfg(1, 2), (-1.0, 0.0), (0.0, 1.0), (2, 2)).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().next(), Some("re,im,rho"));
        assert_eq!(text.lines().count(), 5);
    }
}
