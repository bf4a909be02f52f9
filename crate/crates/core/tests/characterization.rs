use tregress::characterization::{
    default_grid, lemma1_report, star_residual_for, theorem1_report, theorem1_residual,
    theorem2_report, theorem2_residual, theorem2_residual_about,
};
use tregress::distributions::{
    DistributionModel, Normal, QFamily, QFamilyParams, ShiftedExponential, StudentT, StudentTParams,
    Uniform,
};
use tregress::order_stats::OrderStatContext;
use tregress::Error;

fn ctx(n: usize, k: usize) -> OrderStatContext {
    OrderStatContext::new(n, k, 1).unwrap()
}

#[test]
fn residuals_do_not_depend_on_ranks() {
    let t = StudentT::standard(4.0).unwrap();
    let q = QFamily::new(QFamilyParams::new(0.25, 2.0, -1.0).unwrap()).unwrap();
    let n = Normal::standard();
    for x in [-1.7, 0.2, 2.5] {
        let base1 = theorem1_residual(&n, 0.5, &ctx(3, 2), x).unwrap();
        let base1q = theorem1_residual(&q, 0.4, &ctx(3, 2), x).unwrap();
        let base2 = theorem2_residual(&t, 5, &ctx(3, 2), x).unwrap();
        for (nn, k) in OrderStatContext::interior_pairs(3..=6) {
            assert_eq!(theorem1_residual(&n, 0.5, &ctx(nn, k), x).unwrap(), base1);
            assert_eq!(theorem1_residual(&q, 0.4, &ctx(nn, k), x).unwrap(), base1q);
            assert_eq!(theorem2_residual(&t, 5, &ctx(nn, k), x).unwrap(), base2);
        }
    }
}

#[test]
fn qfamily_examples() {
    let q = QFamily::new(QFamilyParams::new(0.3, 1.0, 0.0).unwrap()).unwrap();
    for (n, k) in [(3, 2), (6, 4)] {
        for x in [-3.0, -1.0, 0.5, 2.0] {
            assert!(theorem1_residual(&q, 0.3, &ctx(n, k), x).unwrap().abs() <= 1e-6);
        }
    }
    // Wrong weight is a control.
    assert!(theorem1_residual(&q, 0.5, &ctx(3, 2), 2.0).unwrap().abs() > 0.05);
}

#[test]
fn t2_first_moment_example() {
    let t = StudentT::standard(2.0).unwrap();
    assert!(theorem1_residual(&t, 0.5, &ctx(3, 2), 0.0).unwrap().abs() < 1e-14);
}

#[test]
fn second_moment_examples() {
    for nu in 3..=8u32 {
        let t = StudentT::standard(nu as f64).unwrap();
        for (n, k) in OrderStatContext::interior_pairs(3..=6) {
            for x in [-2.0, -0.5, 1.0, 3.0] {
                let r = theorem2_residual(&t, nu, &ctx(n, k), x).unwrap();
                assert!(r.abs() <= 1e-6, "nu={nu} x={x}: {r}");
            }
        }
    }
    let r = theorem2_residual(&Normal::standard(), 3, &ctx(3, 2), 1.0).unwrap();
    assert!(r.abs() > 0.01, "{r}");
    // The t2 member has no second moment.
    let t2 = StudentT::standard(2.0).unwrap();
    assert!(matches!(
        theorem2_residual(&t2, 3, &ctx(3, 2), 1.0),
        Err(Error::MomentNotFinite { order: 2, .. })
    ));
}

#[test]
fn second_moment_identity_is_location_scale_covariant() {
    let (mu, sigma) = (1.7, 2.3);
    for nu in [3u32, 5, 8] {
        let t = StudentT::new(StudentTParams::new(nu as f64, mu, sigma).unwrap()).unwrap();
        let grid = default_grid(&t).unwrap();
        let report = theorem2_report(&t, nu, &ctx(3, 2), &grid, mu, 1e-6).unwrap();
        assert!(report.passed, "nu={nu}: {}", report.max_abs_delta);
        assert_eq!(report.normalized_delta.as_ref().unwrap().len(), grid.len());
        // Uncentered, the shift shows up unless nu = 3.
        let raw = theorem2_residual_about(&t, nu, &ctx(3, 2), grid[30], 0.0).unwrap();
        if nu == 3 {
            assert!(raw.abs() < 1e-6);
        } else {
            assert!(raw.abs() > 1e-3, "nu={nu}: {raw}");
        }
    }
}

#[test]
fn negative_controls_per_rank() {
    let controls: Vec<Box<dyn DistributionModel>> = vec![
        Box::new(Normal::standard()),
        Box::new(ShiftedExponential),
        Box::new(Uniform::unit()),
    ];
    for d in &controls {
        let grid = default_grid(d.as_ref()).unwrap();
        for (n, k) in OrderStatContext::interior_pairs(3..=6) {
            let report = theorem1_report(d.as_ref(), 0.5, &ctx(n, k), &grid, 1e-6).unwrap();
            assert!(!report.passed);
            assert!(report.max_abs_delta >= 0.05, "{} n={n} k={k}: {}", d.label(), report.max_abs_delta);
        }
    }
}

#[test]
fn star_relation_fails_for_normal() {
    let r = star_residual_for(&Normal::standard(), 3, 1.0).unwrap();
    // Both truncated integrals are elementary: -2 * (-phi(1)) - (Phi(1) - (Phi(1) - phi(1))) = phi(1).
    let phi = (-0.5f64).exp() / (2.0 * std::f64::consts::PI).sqrt();
    assert!((r - phi).abs() < 1e-10, "{r} vs {phi}");
}

#[test]
fn lemma1_report_for_member_and_non_member() {
    let p = QFamilyParams::new(0.75, 0.5, 3.0).unwrap();
    let q = QFamily::new(p).unwrap();
    let grid = default_grid(&q).unwrap();
    assert!(lemma1_report(&q, 0.75, 0.5, &grid, 1e-9).unwrap().passed);
    assert!(!lemma1_report(&q, 0.5, 0.5, &grid, 1e-9).unwrap().passed);
}
