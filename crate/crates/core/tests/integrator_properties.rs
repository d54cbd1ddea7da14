use abti::integrator::{Integrator, IntegratorConfig, OdeSystem, ScalarRhs, SolutionVector, StepperMatrices};
use abti::numerics::DenseMatrix;
use abti::{Complex64, Result};
use proptest::prelude::*;

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// `u' = M·u` for a fixed real matrix.
struct Linear(DenseMatrix);

impl OdeSystem for Linear {
    fn dim(&self) -> usize {
        self.0.nrows()
    }

    fn rhs(&self, _t: Complex64, u: &[Complex64], out: &mut [Complex64]) -> Result<()> {
        for (i, o) in out.iter_mut().enumerate() {
            *o = (0..u.len()).map(|j| self.0[(i, j)] * u[j]).sum();
        }
        Ok(())
    }

    fn jacobian(&self, _t: Complex64, _u: &[Complex64]) -> Option<DenseMatrix> {
        Some(self.0.clone())
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn averaging_matrix_is_a_projection(q in 1usize..8, extra in 0usize..3, alpha in 0.2f64..2.0) {
        let m = StepperMatrices::new(q, q + extra, alpha).unwrap();
        let s = m.s();
        let aa = &m.a * &m.a;
        prop_assert!((aa - &m.a).camax() <= 1e-15);
        for k in 0..s {
            let col: Complex64 = (0..s).map(|j| m.a[(j, k)]).sum();
            prop_assert!((col - c(1.0)).norm() <= 1e-15);
        }
    }

    #[test]
    fn fourier_matrix_maps_ones_to_first_unit_vector(s in 1usize..=64, q_frac in 0.0f64..1.0) {
        let q = 1 + ((s - 1) as f64 * q_frac) as usize;
        let m = StepperMatrices::new(q, s, 1.0).unwrap();
        for nu in 0..q {
            let row: Complex64 = (0..s).map(|j| m.f[(nu, j)]).sum();
            let target = if nu == 0 { 1.0 } else { 0.0 };
            prop_assert!((row - c(target)).norm() <= 1e-14, "nu = {nu}: {row}");
        }
    }

    #[test]
    fn mean_of_a_step_is_the_segment_quadrature(
        q in 1usize..5, extra in 0usize..2, tau in 0.01f64..0.3, lam in -3.0f64..1.0, u0 in 0.1f64..2.0, steps in 1usize..6,
    ) {
        let cfg = IntegratorConfig::unit_alpha(q, q + extra, tau).unwrap();
        let it = Integrator::new(cfg);
        let rhs = ScalarRhs::new(move |t: Complex64, u: Complex64| u * lam + t.sin());
        let mut state = it.init_vector(&rhs, &[c(u0)], 1e-14, 30).unwrap();
        for _ in 0..steps {
            let samples = it.sample_rhs(&rhs, &state).unwrap();
            let column: Vec<Complex64> = samples.column(0).iter().copied().collect();
            let quad = it.segment_quadrature(&column).unwrap();
            let next = it.propagate(&state, &rhs).unwrap();
            let lhs = it.reconstruct(&next)[0];
            let rhs_val = it.reconstruct(&state)[0] + quad;
            prop_assert!((lhs - rhs_val).norm() <= 1e-13 * (1.0 + lhs.norm()));
            state = next;
        }
    }

    #[test]
    fn propagator_is_linear_for_linear_problems(
        q in 1usize..4, seed in proptest::collection::vec(-1.0f64..1.0, 4 + 2 * 4 * 3), a in -2.0f64..2.0, b in -2.0f64..2.0,
    ) {
        let s = q + 1;
        let it = Integrator::new(IntegratorConfig::unit_alpha(q, s, 0.05).unwrap());
        let m = DenseMatrix::from_fn(2, 2, |i, j| c(seed[2 * i + j]));
        let sys = Linear(m);
        let mk = |off: usize| SolutionVector {
            values: DenseMatrix::from_fn(s, 2, |j, d| Complex64::new(seed[4 + off + 2 * j + d], seed[4 + off + 2 * j + d + 1])),
            time_index: 0,
            base_time: 0.0,
        };
        let (u, v) = (mk(0), mk(8));
        let combo = SolutionVector { values: &u.values * c(a) + &v.values * c(b), ..u.clone() };
        let left = it.propagate(&combo, &sys).unwrap().values;
        let right = it.propagate(&u, &sys).unwrap().values * c(a) + it.propagate(&v, &sys).unwrap().values * c(b);
        prop_assert!((left - right).camax() <= 1e-12);
    }
}

#[test]
fn real_problems_keep_real_reconstructions_over_many_steps() {
    for (q, s) in [(1, 2), (2, 2), (2, 3), (3, 3), (3, 4)] {
        let it = Integrator::new(IntegratorConfig::unit_alpha(q, s, 1e-3).unwrap());
        let rhs = ScalarRhs::new(|t: Complex64, u: Complex64| -(u * u * u - u) * 4.0 + t.cos());
        let (state, hist) = it.run(&rhs, &[c(0.3)], 1000, 1e-14).unwrap();
        let worst = hist.iter().map(|h| h[0].im.abs()).fold(0.0, f64::max);
        assert!(worst <= 1e-10, "q={q} s={s}: {worst}");
        assert!(state.conjugate_asymmetry() <= 1e-10);
    }
}

#[test]
fn reference_second_order_row() {
    use abti::experiments::run_ode_convergence;
    let t = run_ode_convergence(2, 3, &[256, 512], 0.5, 0.01, 1.0).unwrap();
    assert!((t.rows[0].error.unwrap() / 4.115e-5 - 1.0).abs() < 0.05);
    assert!((t.rows[1].order.unwrap() - 2.018).abs() < 0.1);
}

#[test]
fn equal_node_count_loses_one_order() {
    use abti::experiments::run_ode_convergence;
    let t = run_ode_convergence(2, 2, &[128, 256, 512], 0.5, 0.01, 1.0).unwrap();
    let o = t.orders();
    assert!((o[1] - 1.0).abs() < 0.1, "{o:?}");
    assert!(t.settled(0.1));
}
