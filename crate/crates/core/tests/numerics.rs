use proptest::prelude::*;
use tregress::distributions::{t_cdf, StudentTParams};
use tregress::numerics::{
    integrate, invert_monotone, log_gamma, minimize, regularized_incomplete_beta, Interval,
};

#[test]
fn log_gamma_matches_statrs() {
    for i in 1..400 {
        let x = 0.05 * i as f64;
        let ours = log_gamma(x).unwrap();
        let theirs = statrs::function::gamma::ln_gamma(x);
        assert!((ours - theirs).abs() < 1e-12 * theirs.abs().max(1.0), "x={x}: {ours} vs {theirs}");
    }
}

#[test]
fn log_gamma_recurrence() {
    for i in 0..=50 {
        let x = 0.5 + i as f64;
        let gap = log_gamma(x + 1.0).unwrap() - log_gamma(x).unwrap() - x.ln();
        assert!(gap.abs() < 1e-12, "x={x}: {gap}");
    }
}

#[test]
fn incomplete_beta_matches_statrs() {
    for &(a, b) in &[(0.5, 0.5), (1.5, 0.5), (4.0, 0.5), (2.0, 7.0), (30.0, 2.5)] {
        for i in 1..20 {
            let x = i as f64 / 20.0;
            let ours = regularized_incomplete_beta(a, b, x).unwrap();
            let theirs = statrs::function::beta::beta_reg(a, b, x);
            assert!((ours - theirs).abs() < 1e-12, "({a}, {b}, {x}): {ours} vs {theirs}");
        }
    }
}

#[test]
fn invert_monotone_on_t2_cdf() {
    let p = StudentTParams::standard(2.0).unwrap();
    let g = |x: f64| t_cdf(&p, x);
    let bracket = Interval::new(-1.0, 1.0).unwrap();
    for i in 1..100 {
        let y = i as f64 / 100.0;
        let x = invert_monotone(g, y, bracket, 1e-14).unwrap();
        assert!((g(x) - y).abs() <= 1e-14, "y={y}");
    }
}

#[test]
fn minimize_two_dimensional_quadratic() {
    let p = minimize(|v| (v[0] - 1.0).powi(2) + (v[1] + 1.0).powi(2), &[0.0, 0.0], 1e-12).unwrap();
    assert!((p[0] - 1.0).abs() < 1e-8 && (p[1] + 1.0).abs() < 1e-8, "{p:?}");
}

proptest! {
    #[test]
    fn integration_is_additive(
        amp in 0.1f64..3.0,
        freq in 0.1f64..4.0,
        shift in -2.0f64..2.0,
        a in -3.0f64..0.0,
        width1 in 0.1f64..3.0,
        width2 in 0.1f64..3.0,
    ) {
        let f = |t: f64| amp * (freq * t + shift).sin() + (-(t - shift).powi(2)).exp();
        let b = a + width1;
        let c = b + width2;
        let whole = integrate(f, Interval::new(a, c).unwrap(), 1e-10, 1e-12).unwrap();
        let left = integrate(f, Interval::new(a, b).unwrap(), 1e-10, 1e-12).unwrap();
        let right = integrate(f, Interval::new(b, c).unwrap(), 1e-10, 1e-12).unwrap();
        let gap = (whole.value - left.value - right.value).abs();
        let allowed = 2.0 * (whole.error_estimate + left.error_estimate + right.error_estimate) + 1e-14;
        prop_assert!(gap <= allowed, "gap {gap} > {allowed}");
    }

    #[test]
    fn incomplete_beta_reflection(a in 0.05f64..40.0, b in 0.05f64..40.0, x in 0.0f64..=1.0) {
        let sum = regularized_incomplete_beta(a, b, x).unwrap()
            + regularized_incomplete_beta(b, a, 1.0 - x).unwrap();
        prop_assert!((sum - 1.0).abs() < 1e-12, "sum {sum}");
    }

    #[test]
    fn inversion_roundtrip(target in -50.0f64..50.0) {
        let g = |x: f64| x.powi(3) + x;
        let x = invert_monotone(g, target, Interval::new(-1.0, 1.0).unwrap(), 1e-12).unwrap();
        prop_assert!((g(x) - target).abs() <= 1e-12);
    }
}
