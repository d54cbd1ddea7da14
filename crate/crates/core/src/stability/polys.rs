use num_complex::Complex64;

use crate::numerics::DensePolynomial;

/// `γ_n(z) = zⁿ/n!`, evaluated as the product `Π (z/k)` so large `n`
/// neither overflows nor loses the small factorial.
pub fn gelfand_shilov(n: usize, z: Complex64) -> Complex64 {
    (1..=n).fold(Complex64::new(1.0, 0.0), |acc, k| acc * (z / k as f64))
}

fn gamma_real(n: usize, x: f64) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * (x / k as f64))
}

/// Characteristic polynomial of `A + z·B(α)/α` in `λ`, reduced to degree `q`.
///
/// The coefficient of `(-λ)^j` is `γ_{q-j}((j+1)z) + γ_{q-1-j}((j+1)z)`
/// (second term for `j < q`); the constant term also carries
/// `-δ·γ_q(-z/α)`.
pub fn char_poly(q: usize, z: Complex64, alpha: f64, delta_q: u8) -> DensePolynomial {
    let mut coeffs = Vec::with_capacity(q + 1);
    for j in 0..=q {
        let w = z * (j + 1) as f64;
        let mut c = gelfand_shilov(q - j, w);
        if j < q {
            c += gelfand_shilov(q - 1 - j, w);
        }
        if j % 2 == 1 {
            c = -c;
        }
        coeffs.push(c);
    }
    if delta_q == 1 {
        coeffs[0] -= gelfand_shilov(q, -z / alpha);
    }
    DensePolynomial::new(coeffs)
}

/// The same polynomial read as a polynomial in `z` at fixed `λ`.
///
/// When `δ = 1`, `α = 1` and `q` is even the `z^q` terms cancel and the
/// degree drops to `q - 1`.
pub fn char_poly_in_z(q: usize, lambda: Complex64, alpha: f64, delta_q: u8) -> DensePolynomial {
    let ml = -lambda;
    let mut coeffs = Vec::with_capacity(q + 1);
    for m in 0..=q {
        let mut c = ml.powu((q - m) as u32) * gamma_real(m, (q - m + 1) as f64);
        if m < q {
            c += ml.powu((q - 1 - m) as u32) * gamma_real(m, (q - m) as f64);
        }
        coeffs.push(c);
    }
    if delta_q == 1 {
        coeffs[q] -= Complex64::new(gamma_real(q, -1.0 / alpha), 0.0);
    }
    DensePolynomial::new(coeffs)
}

/// `p̃_q(ζ; θ) = Σ γ_{q-j}((j+1)ζ) - e^{-iθ}·Σ γ_{q-1-j}((j+1)ζ) - δ·γ_q(-ζ/α)`.
///
/// Its zeros are `ζ = -e^{-iθ}·z` for the zeros `z` of the locus polynomial.
pub fn variant_poly(q: usize, theta: f64, delta_q: u8, alpha: f64) -> DensePolynomial {
    let rot = Complex64::from_polar(1.0, -theta);
    let mut coeffs = Vec::with_capacity(q + 1);
    for m in 0..=q {
        let mut c = Complex64::new(gamma_real(m, (q - m + 1) as f64), 0.0);
        if m < q {
            c -= rot * gamma_real(m, (q - m) as f64);
        }
        coeffs.push(c);
    }
    if delta_q == 1 {
        coeffs[q] -= Complex64::new(gamma_real(q, -1.0 / alpha), 0.0);
    }
    DensePolynomial::new(coeffs)
}

/// Real coefficients of `p̃_q(ζ; π)`, ascending.
pub fn variant_poly_real(q: usize, delta_q: u8, alpha: f64) -> Vec<f64> {
    let mut coeffs: Vec<f64> = (0..=q)
        .map(|m| {
            let mut c = gamma_real(m, (q - m + 1) as f64);
            if m < q {
                c += gamma_real(m, (q - m) as f64);
            }
            c
        })
        .collect();
    if delta_q == 1 {
        coeffs[q] -= gamma_real(q, -1.0 / alpha);
    }
    while coeffs.len() > 1 && coeffs.last() == Some(&0.0) {
        coeffs.pop();
    }
    coeffs
}
