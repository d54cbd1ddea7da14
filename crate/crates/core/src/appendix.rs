//! Executable checks of the algebra behind the closed-form characteristic
//! polynomial: the `q×q` equivalent matrix, the two triangular Toeplitz
//! inverses, the double-sum identity, the Hessenberg determinant recursion
//! and the closed form of the entries of `F·S(α)`.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::integrator::StepperMatrices;
use crate::numerics::{determinant, DenseMatrix};
use crate::stability::{char_poly, gelfand_shilov};

fn c0() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(1.0)
}

fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `e₁e₁ᵀ + z·F·S(α)`, the `q×q` matrix sharing the nonzero spectrum of
/// `A + z·S(α)·F`.
pub fn equivalent_matrix(q: usize, s: usize, z: Complex64, alpha: f64) -> Result<DenseMatrix> {
    let m = StepperMatrices::new(q, s, alpha)?;
    let mut out = (&m.f * &m.s_alpha) * z;
    out[(0, 0)] += 1.0;
    Ok(out)
}

/// `⟨F·S(α)⟩_{j,k}` (1-based) in closed form.
pub fn fs_entry_closed(j: usize, k: usize, q: usize, s: usize, alpha: f64) -> Complex64 {
    if j == 0 || k == 0 || j > k + 1 {
        return c0();
    }
    let mut v = binomial(k, j - 1) * alpha.powi((k + 1 - j) as i32) / k as f64;
    if s == q && j == 1 && k == q {
        v += 1.0 / q as f64;
    }
    Complex64::new(v, 0.0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToeplitzTriple {
    /// `β_j = γ_j(-αz)`.
    pub beta: Vec<Complex64>,
    /// `β_j^{(-1)} = γ_j(αz)`.
    pub beta_inv: Vec<Complex64>,
    /// `η_j = Σ_{k<j} γ_k((j-k)αz)(-λ)^{j-k}`, `η₀ = 1`.
    pub eta: Vec<Complex64>,
    /// `‖T(β)·T(β⁻¹) - I‖_max`.
    pub residual_beta: f64,
    /// `‖L·T(η) - I‖_max`, `L` unit lower triangular with first column
    /// `(1, λβ₀⁻¹, …, λβ_{q-1}⁻¹)`.
    pub residual_eta: f64,
}

/// Lower-triangular Toeplitz matrix with first column `col`.
pub fn lower_toeplitz(col: &[Complex64]) -> DenseMatrix {
    let n = col.len();
    DenseMatrix::from_fn(n, n, |i, j| if i >= j { col[i - j] } else { c0() })
}

fn identity_residual(m: &DenseMatrix) -> f64 {
    let n = m.nrows();
    (m - DenseMatrix::identity(n, n)).iter().map(|v| v.norm()).fold(0.0, f64::max)
}

pub fn eta_sequence(q: usize, alpha_z: Complex64, lambda: Complex64) -> Vec<Complex64> {
    (0..=q)
        .map(|j| {
            if j == 0 {
                return Complex64::new(1.0, 0.0);
            }
            (0..j).map(|k| gelfand_shilov(k, alpha_z * (j - k) as f64) * (-lambda).powu((j - k) as u32)).sum()
        })
        .collect()
}

/// Both triangular Toeplitz inverse pairs, checked to `1e-12`.
pub fn toeplitz_pair(q: usize, alpha_z: Complex64, lambda: Complex64) -> Result<ToeplitzTriple> {
    let beta: Vec<Complex64> = (0..=q).map(|j| gelfand_shilov(j, -alpha_z)).collect();
    let beta_inv: Vec<Complex64> = (0..=q).map(|j| gelfand_shilov(j, alpha_z)).collect();
    let eta = eta_sequence(q, alpha_z, lambda);
    let residual_beta = identity_residual(&(lower_toeplitz(&beta) * lower_toeplitz(&beta_inv)));
    let shifted: Vec<Complex64> =
        std::iter::once(Complex64::new(1.0, 0.0)).chain(beta_inv[..q].iter().map(|b| lambda * b)).collect();
    let residual_eta = identity_residual(&(lower_toeplitz(&shifted) * lower_toeplitz(&eta)));
    let scale = (1.0 + alpha_z.norm()).powi(q as i32) * (1.0 + lambda.norm()).powi(q as i32);
    for (name, r) in [("toeplitz-beta", residual_beta), ("toeplitz-eta", residual_eta)] {
        if r > 1e-12 * scale {
            return Err(Error::Witness { name, detail: format!("identity residual {r:e} for q = {q}") });
        }
    }
    Ok(ToeplitzTriple { beta, beta_inv, eta, residual_beta, residual_eta })
}

/// Both sides of
/// `Σ_j γ_{q-j}(αz)·Σ_{k<j} γ_k((j-k)αz)(-λ)^{j-k} = Σ_j γ_{q-j}((j+1)αz)(-λ)^j`,
/// with the empty inner sum at `j = 0` read as 1.
pub fn summation_identity(q: usize, alpha_z: Complex64, lambda: Complex64) -> (Complex64, Complex64) {
    let eta = eta_sequence(q, alpha_z, lambda);
    let lhs = (0..=q).map(|j| gelfand_shilov(q - j, alpha_z) * eta[j]).sum();
    (lhs, closed_form_d(q, alpha_z, lambda))
}

fn closed_form_d(q: usize, alpha_z: Complex64, lambda: Complex64) -> Complex64 {
    (0..=q).map(|j| gelfand_shilov(q - j, alpha_z * (j + 1) as f64) * (-lambda).powu(j as u32)).sum()
}

fn closed_form_d_tilde(q: usize, alpha_z: Complex64, lambda: Complex64) -> Complex64 {
    if q == 0 {
        return Complex64::new(1.0, 0.0);
    }
    (0..q).map(|j| gelfand_shilov(q - 1 - j, alpha_z * (j + 1) as f64) * (-lambda).powu(j as u32)).sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeterminantSequence {
    /// `D₀..D_q` from the recursion.
    pub d: Vec<Complex64>,
    /// `D̃₁..D̃_q`: the same minors with the first row and column removed
    /// (`D̃₁ = 1`).
    pub d_tilde: Vec<Complex64>,
    /// Leading minors by LU, for `q <= 8`.
    pub direct: Option<Vec<Complex64>>,
    pub closed: Vec<Complex64>,
}

const DIRECT_LIMIT: usize = 8;

/// `z·μ - λI` with `μ_{j,k}` the closed-form `F·S(α)` entries without the
/// `1/q` corner term.
pub fn hessenberg_matrix(q: usize, z: Complex64, alpha: f64, lambda: Complex64) -> DenseMatrix {
    DenseMatrix::from_fn(q, q, |j, k| {
        let mu = fs_entry_closed(j + 1, k + 1, q, q + 1, alpha);
        let mut v = z * mu;
        if j == k {
            v -= lambda;
        }
        v
    })
}

/// `D_k` by direct determinants, by
/// `D_k = -λD_{k-1} - Σ_{j=1}^{k} γ_j(-αz)D_{k-j}` and by the closed form
/// `Σ_j γ_{k-j}((j+1)αz)(-λ)^j`; fails unless all agree to `1e-10`.
pub fn hessenberg_dets(q: usize, z: Complex64, alpha: f64, lambda: Complex64) -> Result<DeterminantSequence> {
    if q == 0 {
        return Err(Error::InvalidArgument("q must be at least 1".into()));
    }
    let az = z * alpha;
    let beta: Vec<Complex64> = (0..=q).map(|j| gelfand_shilov(j, -az)).collect();
    let mut d = vec![Complex64::new(1.0, 0.0)];
    for k in 1..=q {
        let mut v = -lambda * d[k - 1];
        for j in 1..=k {
            v -= beta[j] * d[k - j];
        }
        d.push(v);
    }
    let closed: Vec<Complex64> = (0..=q).map(|k| closed_form_d(k, az, lambda)).collect();
    let m = hessenberg_matrix(q, z, alpha, lambda);
    let direct = if q <= DIRECT_LIMIT {
        let mut v = vec![Complex64::new(1.0, 0.0)];
        for k in 1..=q {
            v.push(determinant(&m.view((0, 0), (k, k)).into_owned())?);
        }
        Some(v)
    } else {
        None
    };
    let mut d_tilde = vec![Complex64::new(1.0, 0.0)];
    for k in 2..=q {
        let direct_minor = determinant(&m.view((1, 1), (k - 1, k - 1)).into_owned())?;
        let closed_minor = closed_form_d_tilde(k, az, lambda);
        if rel_diff(direct_minor, closed_minor) > 1e-10 {
            return Err(Error::Witness {
                name: "hessenberg",
                detail: format!("shifted minor k = {k}: direct {direct_minor}, closed {closed_minor}"),
            });
        }
        d_tilde.push(closed_minor);
    }
    for k in 0..=q {
        let a = d[k];
        let b = closed[k];
        let c = direct.as_ref().map(|v| v[k]);
        let bad = rel_diff(a, b) > 1e-10 || c.is_some_and(|c| rel_diff(a, c) > 1e-10);
        if bad {
            return Err(Error::Witness {
                name: "hessenberg",
                detail: format!("D_{k}: recursion {a}, closed {b}, direct {c:?}"),
            });
        }
    }
    Ok(DeterminantSequence { d, d_tilde, direct, closed })
}

/// `D_q + D̃_q - δ·γ_q(-z)`, the determinant of `e₁e₁ᵀ + z·F·S(α) - λI`.
pub fn assembled_char_poly(q: usize, z: Complex64, alpha: f64, delta_q: u8, lambda: Complex64) -> Complex64 {
    let az = z * alpha;
    let mut v = closed_form_d(q, az, lambda) + closed_form_d_tilde(q, az, lambda);
    if delta_q == 1 {
        v -= gelfand_shilov(q, -z);
    }
    v
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCheck {
    pub name: String,
    pub passed: bool,
    /// Largest relative discrepancy seen.
    pub worst: f64,
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub seed: u64,
    pub draws: usize,
    pub tolerance: f64,
    pub checks: Vec<WitnessCheck>,
}

impl WitnessReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

struct Tally {
    name: &'static str,
    worst: f64,
    failures: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, worst: 0.0, failures: Vec::new() }
    }

    fn record(&mut self, diff: f64, tol: f64, context: impl FnOnce() -> String) {
        self.worst = self.worst.max(diff);
        if !(diff <= tol) {
            self.failures.push(context());
        }
    }

    fn fail(&mut self, context: String) {
        self.worst = f64::INFINITY;
        self.failures.push(context);
    }

    fn finish(self) -> WitnessCheck {
        WitnessCheck {
            name: self.name.into(),
            passed: self.failures.is_empty(),
            worst: self.worst,
            failures: self.failures,
        }
    }
}

fn unit_disk(rng: &mut ChaCha8Rng) -> Complex64 {
    let r = rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Runs all five checks on `draws` seeded random parameter sets:
/// `z, λ` in the unit disk, `α ∈ [0.5, 1.5]`, `q ∈ 1..=6`, `s ∈ {q, q+1}`.
pub fn witness_suite(seed: u64, draws: usize, tol: f64) -> WitnessReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut equiv = Tally::new("same-characteristic-polynomial");
    let mut toeplitz = Tally::new("toeplitz-inverses");
    let mut summation = Tally::new("summation-identity");
    let mut hessenberg = Tally::new("hessenberg-determinants");
    let mut fs = Tally::new("fs-closed-form");
    for draw in 0..draws {
        let q = rng.gen_range(1..=6usize);
        let s = q + rng.gen_range(0..=1usize);
        let alpha = rng.gen_range(0.5..=1.5);
        let z = unit_disk(&mut rng);
        let lambda = unit_disk(&mut rng);
        let ctx = format!("draw {draw}: q = {q}, s = {s}, alpha = {alpha}, z = {z}, lambda = {lambda}");

        // det(A + zS(α)F - λI) = (-λ)^{s-q}·det(e₁e₁ᵀ + zF·S(α) - λI)
        match (StepperMatrices::new(q, s, alpha), equivalent_matrix(q, s, z, alpha)) {
            (Ok(m), Ok(small)) => {
                let big = &m.a + &m.b_alpha * z - DenseMatrix::identity(s, s) * lambda;
                let small = small - DenseMatrix::identity(q, q) * lambda;
                match (determinant(&big), determinant(&small)) {
                    (Ok(b), Ok(sm)) => {
                        let rhs = (-lambda).powu((s - q) as u32) * sm;
                        equiv.record(rel_diff(b, rhs), tol, || ctx.clone());
                        let closed = assembled_char_poly(q, z, alpha, u8::from(s == q), lambda);
                        equiv.record(rel_diff(sm, closed), tol, || format!("{ctx} (assembled)"));
                        let reduced = char_poly(q, z * alpha, alpha, u8::from(s == q)).eval(lambda);
                        equiv.record(rel_diff(closed, reduced), tol, || format!("{ctx} (reduced form)"));
                    }
                    _ => equiv.fail(ctx.clone()),
                }
                let fs_direct = &m.f * &m.s_alpha;
                for j in 1..=q {
                    for k in 1..=q {
                        let diff = rel_diff(fs_direct[(j - 1, k - 1)], fs_entry_closed(j, k, q, s, alpha));
                        fs.record(diff, tol, || format!("{ctx} entry ({j}, {k})"));
                    }
                }
            }
            _ => {
                equiv.fail(ctx.clone());
                fs.fail(ctx.clone());
            }
        }

        match toeplitz_pair(q, z * alpha, lambda) {
            Ok(t) => toeplitz.record(t.residual_beta.max(t.residual_eta), tol, || ctx.clone()),
            Err(e) => toeplitz.fail(format!("{ctx}: {e}")),
        }

        let (lhs, rhs) = summation_identity(q, z * alpha, lambda);
        summation.record(rel_diff(lhs, rhs), tol, || ctx.clone());

        match hessenberg_dets(q, z, alpha, lambda) {
            Ok(seq) => {
                let worst = (0..=q)
                    .map(|k| {
                        let direct = seq.direct.as_ref().map_or(0.0, |v| rel_diff(v[k], seq.d[k]));
                        direct.max(rel_diff(seq.closed[k], seq.d[k]))
                    })
                    .fold(0.0, f64::max);
                hessenberg.record(worst, tol, || ctx.clone());
            }
            Err(e) => hessenberg.fail(format!("{ctx}: {e}")),
        }
    }
    WitnessReport {
        seed,
        draws,
        tolerance: tol,
        checks: vec![equiv.finish(), toeplitz.finish(), summation.finish(), hessenberg.finish(), fs.finish()],
    }
}
