use proptest::prelude::*;
use statrs::distribution::{ContinuousCDF, StudentsT};
use tregress::distributions::{
    fit_qfamily, qfam_cdf_pdf, qfam_quantile, sample, t_cdf, t_pdf, DistributionModel, Normal,
    QFamily, QFamilyParams, ShiftedExponential, StandardizedT, StudentT, StudentTParams, Uniform,
};
use tregress::numerics::{integrate_with, Interval, QuadratureOptions, TailMap};

fn models() -> Vec<Box<dyn DistributionModel>> {
    let mut out: Vec<Box<dyn DistributionModel>> = vec![
        Box::new(Normal::new(-0.4, 0.7).unwrap()),
        Box::new(ShiftedExponential),
        Box::new(Uniform::new(-1.0, 3.0).unwrap()),
    ];
    for nu in 1..=8 {
        out.push(Box::new(StudentT::new(StudentTParams::new(nu as f64, 0.5, 1.3).unwrap()).unwrap()));
        if nu >= 3 {
            out.push(Box::new(StandardizedT::new(nu as f64).unwrap()));
        }
    }
    out
}

/// 20 fixed pseudo-random Q-family parameter sets.
fn qfamily_sets() -> Vec<QFamilyParams> {
    (0..20)
        .map(|i| {
            let f = i as f64;
            let lambda = 0.05 + 0.9 * ((f * 0.618_034) % 1.0);
            let c = 0.3 + 2.0 * ((f * 0.414_214) % 1.0);
            let d = -2.0 + 4.0 * ((f * 0.732_051) % 1.0);
            QFamilyParams::new(lambda, c, d).unwrap()
        })
        .collect()
}

fn total_mass(d: &dyn DistributionModel) -> f64 {
    let support = d.support();
    let opts = QuadratureOptions::with_tolerances(1e-12, 1e-14)
        .tail_map(TailMap::Exponential)
        .scale(d.scale_hint());
    integrate_with(|x| d.pdf(x), support, &opts).unwrap().value
}

#[test]
fn densities_are_normalized() {
    for d in models() {
        let mass = total_mass(d.as_ref());
        assert!((mass - 1.0).abs() < 1e-9, "{}: {mass}", d.label());
    }
    for p in qfamily_sets() {
        let q = QFamily::new(p).unwrap();
        // Integrate in probability space: int f(Q(u)) Q'(u) du = 1.
        let opts = QuadratureOptions::with_tolerances(1e-12, 1e-14);
        let mass = integrate_with(
            |u| {
                let x = q.quantile(u).unwrap();
                q.pdf(x) * p.quantile_derivative(u)
            },
            Interval::new(1e-12, 1.0 - 1e-12).unwrap(),
            &opts,
        )
        .unwrap()
        .value;
        assert!((mass - 1.0).abs() < 1e-9, "{p:?}: {mass}");
    }
}

#[test]
fn cdf_derivative_is_pdf() {
    let h = 1e-5;
    let mut all = models();
    for p in qfamily_sets().into_iter().take(5) {
        all.push(Box::new(QFamily::new(p).unwrap()));
    }
    for d in all {
        for i in 1..=50 {
            let u = 0.02 + 0.96 * (i - 1) as f64 / 49.0;
            let x = d.quantile(u).unwrap();
            let fd = (d.cdf(x + h) - d.cdf(x - h)) / (2.0 * h);
            assert!((fd - d.pdf(x)).abs() < 1e-6, "{} at {x}: {fd} vs {}", d.label(), d.pdf(x));
        }
    }
}

#[test]
fn quantile_roundtrip_wide_levels() {
    let levels: Vec<f64> = [1e-6, 1e-5, 1e-3, 0.1, 0.5, 0.9, 1.0 - 1e-3, 1.0 - 1e-5, 1.0 - 1e-6].to_vec();
    let mut all = models();
    for p in qfamily_sets() {
        all.push(Box::new(QFamily::new(p).unwrap()));
    }
    for d in all {
        for &u in &levels {
            let x = d.quantile(u).unwrap();
            assert!((d.cdf(x) - u).abs() <= 1e-9, "{} at {u}", d.label());
        }
    }
}

#[test]
fn t_cdf_matches_statrs() {
    for nu in [1.0, 2.0, 3.0, 4.5, 7.0, 30.0] {
        let p = StudentTParams::new(nu, 0.3, 1.7).unwrap();
        let oracle = StudentsT::new(0.3, 1.7, nu).unwrap();
        for i in -40..=40 {
            let x = 0.25 * i as f64;
            assert!((t_cdf(&p, x) - oracle.cdf(x)).abs() < 1e-12, "nu={nu} x={x}");
        }
    }
}

#[test]
fn t2_is_the_half_member() {
    let p = QFamilyParams::t2();
    let t2 = StudentTParams::standard(2.0).unwrap();
    for i in 1..1000 {
        let u = i as f64 / 1000.0;
        let x = qfam_quantile(&p, u).unwrap();
        let (f_cdf, f_pdf) = qfam_cdf_pdf(&p, x).unwrap();
        assert!((f_cdf - u).abs() < 1e-12);
        assert!((f_pdf - t_pdf(&t2, x)).abs() < 1e-12);
    }
}

#[test]
fn t2_cdf_is_consistent_with_its_quantile() {
    // F(x) = (1 + x / sqrt(2 + x^2)) / 2 inverts Q(u) = sqrt(2)(u - 1/2)/sqrt(u(1 - u)).
    let t2 = StudentTParams::standard(2.0).unwrap();
    for i in -100..=100 {
        let x = 0.1 * i as f64;
        let closed = 0.5 * (1.0 + x / (2.0 + x * x).sqrt());
        assert!((t_cdf(&t2, x) - closed).abs() < 1e-15);
        let back = qfam_quantile(&QFamilyParams::t2(), closed).unwrap();
        assert!((back - x).abs() < 1e-9, "{x}: {back}");
    }
}

#[test]
fn qfamily_first_moment_is_finite() {
    for lambda in [0.05, 0.5, 0.95] {
        let p = QFamilyParams::new(lambda, 1.0, 0.0).unwrap();
        let q = QFamily::new(p).unwrap();
        assert!(q.has_first_moment());
        // int_0^1 |Q(u)| du in log-odds form.
        let opts = QuadratureOptions::with_tolerances(1e-10, 1e-12).scale(20.0);
        let abs_mean = integrate_with(
            |s| {
                let weight = 1.0 / ((1.0 + (-s).exp()) * (1.0 + s.exp()));
                if weight == 0.0 {
                    return 0.0;
                }
                q.quantile_at_log_odds(s).abs() * weight
            },
            Interval::real_line(),
            &opts,
        )
        .unwrap()
        .value;
        assert!(abs_mean.is_finite() && abs_mean > 0.0, "{lambda}: {abs_mean}");
    }
    let q = QFamily::new(QFamilyParams::new(0.3, 1.0, 0.0).unwrap()).unwrap();
    assert!(!q.has_second_moment());
    assert!(!q.tail_indices().lower_allows(2));
    assert!(q.tail_indices().upper_allows(2));
}

#[test]
fn t2_sample_matches_cdf() {
    let t2 = StudentT::standard(2.0).unwrap();
    let mut xs = sample(&t2, 100_000, 11).unwrap();
    xs.sort_by(f64::total_cmp);
    let m = xs.len() as f64;
    let sup = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = t2.cdf(x);
            (f - i as f64 / m).abs().max((f - (i + 1) as f64 / m).abs())
        })
        .fold(0.0, f64::max);
    assert!(sup <= 0.01, "{sup}");
}

#[test]
fn fit_examples() {
    let levels: Vec<f64> = (1..100).map(|i| i as f64 / 100.0).collect();
    let truth = QFamilyParams::new(0.3, 1.0, 0.0).unwrap();
    let fit = fit_qfamily(&QFamily::new(truth).unwrap(), &levels, QFamilyParams::new(0.5, 0.5, 1.0).unwrap()).unwrap();
    assert!((fit.params.lambda - 0.3).abs() < 1e-6);
    assert!((fit.params.c - 1.0).abs() < 1e-6);
    assert!(fit.params.d.abs() < 1e-6);

    let cauchy = fit_qfamily(&StudentT::standard(1.0).unwrap(), &levels, QFamilyParams::t2()).unwrap();
    assert!(cauchy.objective.is_finite() && cauchy.objective > 0.0);
    assert!(cauchy.objective <= cauchy.initial_objective);

    assert!(fit_qfamily(&StudentT::standard(1.0).unwrap(), &[0.2, 0.5], QFamilyParams::t2()).is_err());
}

proptest! {
    #[test]
    fn qfamily_quantile_is_increasing(
        lambda in 0.01f64..0.99,
        c in 0.1f64..5.0,
        d in -5.0f64..5.0,
        u1 in 1e-6f64..0.999_999,
        u2 in 1e-6f64..0.999_999,
    ) {
        prop_assume!(u1 < u2);
        let p = QFamilyParams::new(lambda, c, d).unwrap();
        prop_assert!(qfam_quantile(&p, u1).unwrap() < qfam_quantile(&p, u2).unwrap());
    }

    #[test]
    fn qfamily_density_inverts_derivative(lambda in 0.02f64..0.98, c in 0.1f64..5.0, u in 0.001f64..0.999) {
        let p = QFamilyParams::new(lambda, c, 0.0).unwrap();
        let x = qfam_quantile(&p, u).unwrap();
        let (level, f) = qfam_cdf_pdf(&p, x).unwrap();
        prop_assert!((level - u).abs() < 1e-12);
        prop_assert!((f * p.quantile_derivative(level) - 1.0).abs() < 1e-9);
    }
}
