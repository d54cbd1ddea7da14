use abti::appendix::{assembled_char_poly, equivalent_matrix, hessenberg_dets, witness_suite};
use abti::integrator::StepperMatrices;
use abti::numerics::{determinant, DenseMatrix};
use abti::stability::char_poly;
use abti::Complex64;
use proptest::prelude::*;

#[test]
fn suite_passes_for_several_seeds() {
    for seed in [0, 1, 42, 31337] {
        let report = witness_suite(seed, 100, 1e-10);
        assert!(report.passed(), "seed {seed}: {:?}", report.checks);
    }
}

#[test]
fn suite_is_reproducible() {
    assert_eq!(witness_suite(9, 20, 1e-10), witness_suite(9, 20, 1e-10));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn three_characteristic_polynomials_coincide(
        q in 1usize..7, extra in 0usize..2, alpha in 0.5f64..1.5,
        zr in -1.0f64..1.0, zi in -1.0f64..1.0, lr in -1.0f64..1.0, li in -1.0f64..1.0,
    ) {
        let s = q + extra;
        let delta = u8::from(s == q);
        let (z, lambda) = (Complex64::new(zr, zi), Complex64::new(lr, li));
        let assembled = assembled_char_poly(q, z, alpha, delta, lambda);
        let reduced = char_poly(q, z * alpha, alpha, delta).eval(lambda);
        let m = equivalent_matrix(q, s, z, alpha).unwrap() - DenseMatrix::identity(q, q) * lambda;
        let det = determinant(&m).unwrap();
        let scale = 1.0 + assembled.norm();
        prop_assert!((assembled - reduced).norm() <= 1e-10 * scale);
        prop_assert!((assembled - det).norm() <= 1e-10 * scale);

        // the full s×s determinant carries (-λ)^{s-q} on top
        let stepper = StepperMatrices::new(q, s, alpha).unwrap();
        let full = determinant(&(stepper.stability_matrix(z * alpha, alpha) - DenseMatrix::identity(s, s) * lambda)).unwrap();
        let factor = (-lambda).powu((s - q) as u32);
        prop_assert!((full - factor * det).norm() <= 1e-10 * (1.0 + full.norm()));
    }

    #[test]
    fn hessenberg_recurrence_matches_closed_form(q in 1usize..9, zr in -1.0f64..1.0, lr in -1.0f64..1.0) {
        let seq = hessenberg_dets(q, Complex64::new(zr, 0.3), 1.0, Complex64::new(lr, -0.2)).unwrap();
        for (a, b) in seq.d.iter().zip(&seq.closed) {
            prop_assert!((a - b).norm() <= 1e-10 * (1.0 + a.norm()));
        }
    }
}
