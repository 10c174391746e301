use gme_core::quadrature::integrate_1d_with_breaks;
use gme_core::{integrate_1d, integrate_2d, KinkCurve, QuadResult, QuadSettings, Rect};
use proptest::prelude::*;
use std::f64::consts::PI;

fn settings(rel_tol: f64) -> QuadSettings {
    QuadSettings::default().with_rel_tol(rel_tol)
}

type Case1 = (fn(f64) -> f64, f64, f64, f64);

fn suite_1d() -> [Case1; 3] {
    [
        (|_| 1.0, 0.0, 1.0, 1.0),
        (f64::ln, 0.0, 1.0, -1.0),
        (f64::sin, 0.0, PI, 2.0),
    ]
}

fn unit_square_2d(rel_tol: f64) -> [(QuadResult, f64); 3] {
    let s = settings(rel_tol);
    let diag = [KinkCurve::graph(0.0, 1.0, |t| t)];
    [
        (integrate_2d(|_, _| 1.0, Rect::new(0.0, 2.0, 0.0, 3.0), &s, &[]).unwrap(), 6.0),
        (integrate_2d(|z, t| z * t, Rect::new(0.0, 1.0, 0.0, 1.0), &s, &[]).unwrap(), 0.25),
        (
            integrate_2d(
                |z, t| if t >= z { 1.0 } else { 0.0 },
                Rect::new(0.0, 1.0, 0.0, 1.0),
                &s,
                &diag,
            )
            .unwrap(),
            0.5,
        ),
    ]
}

#[test]
fn analytic_suite_within_tolerance() {
    for (f, lo, hi, exact) in suite_1d() {
        let r = integrate_1d(f, lo, hi, &settings(1e-6)).unwrap();
        assert!(r.converged);
        assert!((r.value - exact).abs() <= 1e-6 * exact.abs(), "{} vs {exact}", r.value);
    }
    for (r, exact) in unit_square_2d(1e-6) {
        assert!(r.converged);
        assert!((r.value - exact).abs() <= 1e-6 * exact, "{} vs {exact}", r.value);
    }
}

#[test]
fn tighter_tolerance_never_hurts() {
    for (f, lo, hi, exact) in suite_1d() {
        let mut last = f64::INFINITY;
        for tol in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8] {
            let err = (integrate_1d(f, lo, hi, &settings(tol)).unwrap().value - exact).abs();
            assert!(err <= last, "tol {tol}: {err:e} > {last:e}");
            last = err;
        }
    }
    let mut last = [f64::INFINITY; 3];
    for tol in [1e-3, 1e-4, 1e-5, 1e-6, 1e-7] {
        for (i, (r, exact)) in unit_square_2d(tol).into_iter().enumerate() {
            let err = (r.value - exact).abs();
            assert!(err <= last[i], "case {i}, tol {tol}: {err:e} > {:e}", last[i]);
            last[i] = err;
        }
    }
}

fn kinked_2d() -> QuadResult {
    let hints = [
        KinkCurve::graph(0.0, 2.0, |t| 0.5 * t),
        KinkCurve::Vertical(0.3),
        KinkCurve::Horizontal(1.1),
    ];
    let f = |z: f64, t: f64| {
        let base = (z - 0.5 * t).abs().sqrt() + (3.0 * z * t).cos();
        if t > 1.1 {
            base + (z - 0.3).abs().ln_1p()
        } else {
            base
        }
    };
    integrate_2d(f, Rect::new(-1.0, 2.0, 0.0, 2.0), &QuadSettings::default(), &hints).unwrap()
}

#[test]
fn bit_identical_across_thread_counts() {
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            let a = kinked_2d();
            let b = integrate_1d_with_breaks(
                |x: f64| (x - 0.25).abs().sqrt() * (5.0 * x).sin(),
                0.0,
                4.0,
                &[0.25],
                &QuadSettings::default(),
            )
            .unwrap();
            (a, b)
        })
    };
    let reference = run(1);
    for threads in [1, 2, 3, 8] {
        let (a, b) = run(threads);
        assert_eq!(a.value.to_bits(), reference.0.value.to_bits());
        assert_eq!(a.n_evals, reference.0.n_evals);
        assert_eq!(a.error_estimate.to_bits(), reference.0.error_estimate.to_bits());
        assert_eq!(b.value.to_bits(), reference.1.value.to_bits());
        assert_eq!(b.n_evals, reference.1.n_evals);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn linear_in_the_integrand(alpha in -3.0..3.0f64, beta in -3.0..3.0f64, k in 0.5..6.0f64) {
        let s = QuadSettings::default();
        let f = move |x: f64| (k * x).sin();
        let g = |x: f64| x.sqrt();
        let rf = integrate_1d(f, 0.0, 2.0, &s).unwrap();
        let rg = integrate_1d(g, 0.0, 2.0, &s).unwrap();
        let rh = integrate_1d(move |x| alpha * f(x) + beta * g(x), 0.0, 2.0, &s).unwrap();
        let combined = alpha * rf.value + beta * rg.value;
        let budget = alpha.abs() * rf.error_estimate + beta.abs() * rg.error_estimate
            + rh.error_estimate + 1e-14;
        prop_assert!((rh.value - combined).abs() <= budget, "{} vs {combined}", rh.value);
    }

    #[test]
    fn linear_in_two_dimensions(alpha in -3.0..3.0f64, beta in -3.0..3.0f64) {
        let s = QuadSettings::default();
        let rect = Rect::new(0.0, 1.0, 0.0, 2.0);
        let f = |z: f64, t: f64| (z * t).exp();
        let g = |z: f64, t: f64| (z - 0.5 * t).abs();
        let hint = [KinkCurve::graph(0.0, 2.0, |t| 0.5 * t)];
        let rf = integrate_2d(f, rect, &s, &hint).unwrap();
        let rg = integrate_2d(g, rect, &s, &hint).unwrap();
        let rh = integrate_2d(|z, t| alpha * f(z, t) + beta * g(z, t), rect, &s, &hint).unwrap();
        let combined = alpha * rf.value + beta * rg.value;
        let budget = alpha.abs() * rf.error_estimate + beta.abs() * rg.error_estimate
            + rh.error_estimate + 1e-13;
        prop_assert!((rh.value - combined).abs() <= budget);
    }

    #[test]
    fn converged_results_meet_their_target(k in 0.1..30.0f64, tol in 1e-9..1e-3f64) {
        let s = settings(tol);
        let r = integrate_1d(move |x: f64| (k * x).cos() + x.abs().sqrt(), -1.0, 2.0, &s).unwrap();
        prop_assert!(r.error_estimate >= 0.0);
        prop_assert!(r.error_estimate <= s.abs_tol.max(s.rel_tol * r.value.abs()));
    }
}
