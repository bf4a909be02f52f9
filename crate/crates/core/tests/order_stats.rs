use tregress::distributions::{DistributionModel, QFamily, QFamilyParams, StudentT};
use tregress::order_stats::{
    avg_cond_moment, cdf_integral_below, cond_density_average, sf_integral_above, truncated_moment,
    OrderStatContext, Side,
};
use tregress::Error;

/// `int_0^F Q(u) du` for the Q-family in closed form.
fn qfamily_partial_mean(p: &QFamilyParams, level: f64) -> f64 {
    let l = p.lambda;
    -p.c / (l * (1.0 - l)) * level.powf(l) * (1.0 - level).powf(1.0 - l) + p.d * level
}

#[test]
fn qfamily_truncated_mean_matches_closed_form() {
    for (lambda, c, d) in [(0.1, 2.0, 3.0), (0.3, 1.0, 0.0), (0.5, 0.5, -1.0), (0.9, 1.0, 0.0)] {
        let p = QFamilyParams::new(lambda, c, d).unwrap();
        let q = QFamily::new(p).unwrap();
        for u in [1e-4, 0.01, 0.2, 0.5, 0.8, 0.99, 1.0 - 1e-4] {
            let x = q.quantile(u).unwrap();
            let level = q.cdf(x);
            let expected = qfamily_partial_mean(&p, level);
            let got = truncated_moment(&q, 1, x, Side::Below).unwrap();
            let scale = expected.abs().max(1.0);
            assert!((got - expected).abs() < 1e-11 * scale, "{p:?} u={u}: {got} vs {expected}");
            let above = truncated_moment(&q, 1, x, Side::Above).unwrap();
            let total = qfamily_partial_mean(&p, 1.0);
            assert!((above - (total - expected)).abs() < 1e-11 * scale, "{p:?} u={u}");
        }
    }
}

#[test]
fn symmetric_total_mean_is_zero() {
    for nu in [2.0, 3.0, 6.0] {
        let t = StudentT::standard(nu).unwrap();
        assert!(truncated_moment(&t, 1, f64::INFINITY, Side::Below).unwrap().abs() < 1e-12);
        assert!(truncated_moment(&t, 1, 1e12, Side::Below).unwrap().abs() < 1e-6);
    }
}

#[test]
fn averages_bracket_the_conditioning_value() {
    let dists: Vec<Box<dyn DistributionModel>> = vec![
        Box::new(StudentT::standard(2.0).unwrap()),
        Box::new(StudentT::standard(5.0).unwrap()),
        Box::new(QFamily::new(QFamilyParams::new(0.7, 1.5, 2.0).unwrap()).unwrap()),
    ];
    let ctx = OrderStatContext::new(5, 3, 1).unwrap();
    for d in &dists {
        for u in [1e-5, 0.01, 0.3, 0.5, 0.7, 0.99, 1.0 - 1e-5] {
            let x = d.quantile(u).unwrap();
            assert!(avg_cond_moment(d.as_ref(), &ctx, x, Side::Below).unwrap() < x);
            assert!(avg_cond_moment(d.as_ref(), &ctx, x, Side::Above).unwrap() > x);
        }
    }
}

#[test]
fn integration_by_parts_identity() {
    let t = StudentT::standard(2.0).unwrap();
    let ctx = OrderStatContext::new(3, 2, 1).unwrap();
    for lambda in [0.3, 0.5] {
        for i in 0..10 {
            let x = -4.0 + 0.9 * i as f64;
            let f = t.cdf(x);
            let lhs = lambda * avg_cond_moment(&t, &ctx, x, Side::Below).unwrap()
                + (1.0 - lambda) * avg_cond_moment(&t, &ctx, x, Side::Above).unwrap();
            let rhs = x - lambda / f * cdf_integral_below(&t, x).unwrap()
                + (1.0 - lambda) / (1.0 - f) * sf_integral_above(&t, x).unwrap();
            assert!((lhs - rhs).abs() < 1e-8, "x={x}: {lhs} vs {rhs}");
        }
    }
}

#[test]
fn per_side_rank_ranges() {
    let t = StudentT::standard(3.0).unwrap();
    // k = n is valid below, k = 1 above.
    let top = OrderStatContext::new(4, 4, 1).unwrap();
    let bottom = OrderStatContext::new(4, 1, 1).unwrap();
    assert!(avg_cond_moment(&t, &top, 0.3, Side::Below).is_ok());
    assert!(avg_cond_moment(&t, &bottom, 0.3, Side::Above).is_ok());
    let a = cond_density_average(&t, &top, 0.3, Side::Below).unwrap();
    let b = avg_cond_moment(&t, &top, 0.3, Side::Below).unwrap();
    assert!((a - b).abs() < 1e-8);
    assert!(matches!(avg_cond_moment(&t, &top, 0.3, Side::Above), Err(Error::Rank(_))));
}

#[test]
fn one_sided_second_moment_of_qfamily() {
    // lambda = 0.3: lower tail index 1/0.7 < 2, upper tail index 1/0.3 > 2.
    let q = QFamily::new(QFamilyParams::new(0.3, 1.0, 0.0).unwrap()).unwrap();
    let ctx = OrderStatContext::new(3, 2, 2).unwrap();
    assert_eq!(
        avg_cond_moment(&q, &ctx, 0.0, Side::Below),
        Err(Error::MomentNotFinite { order: 2, side: "below" })
    );
    let above = avg_cond_moment(&q, &ctx, 0.0, Side::Above).unwrap();
    let oracle = cond_density_average(&q, &ctx, 0.0, Side::Above).unwrap();
    assert!((above - oracle).abs() < 1e-8, "{above} vs {oracle}");
}
