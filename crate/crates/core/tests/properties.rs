use fracdiff::verification::suites::windowed_p_sum_defect;
use fracdiff::*;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn params() -> impl Strategy<Value = Params> {
    (any::<bool>(), 0.0..1.0f64, -1.0..1.0f64).prop_map(|(above, u, v)| {
        let alpha = if above {
            1.01 + 0.99 * u
        } else {
            0.01 + 0.98 * u
        };
        Params::new(alpha, v * alpha.min(2.0 - alpha)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sign_structure(p in params()) {
        prop_assert!(weight(0, &p) < 0.0);
        for k in (-100..=100).filter(|k| *k != 0) {
            prop_assert!(weight(k, &p) >= -1e-14, "w_{} = {}", k, weight(k, &p));
        }
    }

    #[test]
    fn symmetric_without_skew(alpha in prop_oneof![0.01..0.99f64, 1.01..2.0f64]) {
        let p = Params::new(alpha, 0.0).unwrap();
        for k in 1..=100 {
            prop_assert!((weight(k, &p) - weight(-k, &p)).abs() <= 1e-14);
        }
        prop_assert_eq!(tail_sum_left(7, &p).unwrap(), tail_sum_right(7, &p).unwrap());
    }

    #[test]
    fn total_sum_vanishes(p in params()) {
        for m in [1usize, 10, 50] {
            let mut s = weight(0, &p);
            for k in 1..=m as i64 {
                s += weight(k, &p) + weight(-k, &p);
            }
            s += tail_sum_left(m, &p).unwrap() + tail_sum_right(m, &p).unwrap();
            prop_assert!(s.abs() <= 1e-10, "M = {}: {}", m, s);
        }
    }

    #[test]
    fn p_coefficients_sum_to_one(p in params(), h in 0.005..0.5f64, k_alpha in 0.1..5.0f64) {
        let dt = 0.5 * max_stable_dt(&p, k_alpha, h);
        let cfg = Scheme::explicit(p, k_alpha, dt).unwrap();
        for m in [1, 10, 50] {
            prop_assert!(windowed_p_sum_defect(&cfg, h, m).abs() <= 1e-12);
        }
    }

    #[test]
    fn maximum_principle(p in params(), seed in any::<u64>(), gl in -1.0..1.0f64, gr in -1.0..1.0f64) {
        let mut rng = StdRng::seed_from_u64(seed);
        let grid = build_grid(0.0, 1.0, 40).unwrap();
        let dt = 0.99 * max_stable_dt(&p, 1.0, grid.h());
        let mut cfg = Scheme::explicit(p, 1.0, dt).unwrap();
        cfg.bc_left = Boundary::Constant(gl);
        cfg.bc_right = Boundary::Constant(gr);
        let values: Vec<f64> = (0..41).map(|_| rng.random_range(-1.0..1.0)).collect();
        let lo = values.iter().copied().fold(gl.min(gr), f64::min);
        let hi = values.iter().copied().fold(gl.max(gr), f64::max);
        let state = Field::from_values(grid, values).unwrap();
        let next = explicit_step(&state, &cfg, &Discretization::for_grid(&p, &grid)).unwrap();
        for v in next.values {
            prop_assert!(v >= lo - 1e-12 && v <= hi + 1e-12);
        }
    }

    #[test]
    fn decay_of_nonnegative_data(p in params(), from in 0.1..0.5f64, width in 0.05..0.4f64) {
        let grid = build_grid(0.0, 1.0, 60).unwrap();
        let mut cfg = Simulation::explicit_free_space(
            grid, p, 1.0, Initial::Box { value: 1.0, from, to: from + width }, 0.02,
        );
        cfg.snapshot_times = (1..=10).map(|i| 0.002 * i as f64).collect();
        let series = run(&cfg).unwrap();
        let maxima: Vec<f64> = series.snapshots[1..].iter().map(|s| s.state.max_abs()).collect();
        prop_assert!(maxima.windows(2).all(|w| w[1] <= w[0] + 1e-14), "{:?}", maxima);
    }

    #[test]
    fn auto_step_is_strictly_stable(p in params(), n in 4usize..200, t_end in 0.01..3.0f64) {
        let grid = build_grid(-1.0, 1.0, 2 * n).unwrap();
        let cfg = Simulation::explicit_free_space(grid, p, 0.7, Initial::Delta, t_end);
        let dt = cfg.resolve_dt();
        prop_assert!(dt < max_stable_dt(&p, 0.7, grid.h()));
        let steps = t_end / dt;
        prop_assert!((steps - steps.round()).abs() < 1e-9 * steps);
    }

    #[test]
    fn grid_ends_are_exact(l in -100.0..100.0f64, w in 1e-3..100.0f64, n in 1usize..5000) {
        let g = build_grid(l, l + w, n).unwrap();
        prop_assert_eq!(g.node(0), l);
        prop_assert_eq!(g.node(n), l + w);
        prop_assert_eq!(g.nodes().count(), n + 1);
    }
}

#[test]
fn branch_interface_stays_finite() {
    for alpha in [1.0 - 1e-4, 1.0 + 1e-4] {
        let p = Params::new(alpha, 0.0).unwrap();
        assert!(weight(0, &p).abs() <= 2.0);
        assert!((-10..=10).all(|k| weight(k, &p).is_finite()));
    }
}

#[test]
fn sampling_is_deterministic() {
    let grid = build_grid(0.0, 1.0, 50).unwrap();
    let ic = Initial::Tabulated(vec![(0.0, 1.0), (0.3, 2.0), (1.0, -1.0)]);
    assert_eq!(
        sample_initial(&ic, &grid).unwrap(),
        sample_initial(&ic, &grid).unwrap()
    );
    let spec = Boundary::Constant(2.5);
    assert!((0..50).all(|f| boundary_at_half_step(&spec, 0.013 * f as f64 + 1e-3, f) == 2.5));
}

#[test]
fn lu_residuals_on_dominant_systems() {
    let mut rng = StdRng::seed_from_u64(17);
    for trial in 0..100 {
        let n = 2 + (trial * 198) / 99;
        let mut a = Matrix::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        for i in 0..n {
            let off: f64 = (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum();
            a[(i, i)] = off + 1.0;
        }
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-5.0..5.0)).collect();
        let b = a.mul_vec(&x).unwrap();
        let lu = lu_factor(&a).unwrap();
        let y = lu_solve(&lu, &b).unwrap();
        let err = x
            .iter()
            .zip(&y)
            .fold(0.0f64, |m, (p, q)| m.max((p - q).abs()));
        assert!(err <= 1e-10, "n = {n}: {err}");
        assert_eq!(y, lu_solve(&lu_factor(&a).unwrap(), &b).unwrap());
    }
}

#[test]
fn runs_are_bit_identical() {
    let grid = build_grid(-2.0, 2.0, 80).unwrap();
    let p = Params::new(1.4, -0.3).unwrap();
    let mut cfg = Simulation::explicit_free_space(grid, p, 1.0, Initial::Delta, 0.1);
    cfg.sigma = 0.5;
    cfg.dt_policy = DtPolicy::Fixed(0.004);
    cfg.snapshot_times = vec![0.0, 0.05];
    let a = run(&cfg).unwrap();
    let b = run(&cfg).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        a.snapshots[0].state,
        sample_initial(&cfg.initial, &cfg.grid).unwrap()
    );
}
