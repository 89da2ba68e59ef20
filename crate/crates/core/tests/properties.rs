//! Property tests for the spec'd invariants: normalization, symmetry,
//! quantile bracketing, the CDF/incomplete-beta duality, mode agreement,
//! interval monotonicity, fit-report consistency, and unit round-trips.

use greenbayes::bayesrule::{self, Convention};
use greenbayes::exactprob::reg_inc_beta;
use greenbayes::gof;
use greenbayes::greensim::{read_offsets_csv, records_to_csv};
use greenbayes::units::{convert, Quantity, Unit};
use greenbayes::{BinomialModel, CountData, Verdict};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

#[test]
fn exact_normalization_is_exact() {
    for n in [1u64, 2, 3, 7, 57, 156, 300, 1024] {
        let model = BinomialModel::fair(n).unwrap();
        let total: BigRational = model
            .pmf_table()
            .iter()
            .map(|p| p.as_rational().unwrap().clone())
            .sum();
        assert!(total.is_one(), "exact pmf sum != 1 at n = {n}");
    }
    // a non-dyadic rational theta as well
    let model = BinomialModel::from_ratio(200, 3, 7).unwrap();
    let total: BigRational = model
        .pmf_table()
        .iter()
        .map(|p| p.as_rational().unwrap().clone())
        .sum();
    assert!(total.is_one());
}

#[test]
fn float_normalization_within_1e12_up_to_2000() {
    let mut n = 1u64;
    while n <= 2000 {
        for theta in [0.5, 0.123456789, 0.9] {
            let model = BinomialModel::from_theta(n, theta).unwrap();
            let mut sum = 0.0;
            let mut comp = 0.0;
            for p in model.pmf_table() {
                let y = p.to_f64() - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            assert!((sum - 1.0).abs() < 1e-12, "float pmf sum {sum} at n = {n}, theta = {theta}");
        }
        n = if n < 64 { n + 1 } else { n + 97 };
    }
}

#[test]
fn symmetry_at_half_both_modes() {
    for n in [9u64, 156, 511] {
        let exact = BinomialModel::fair(n).unwrap();
        let float = exact.in_float_mode();
        for k in 0..=n {
            // pmf(k) = pmf(n-k): exact as rationals, float bitwise
            assert_eq!(
                exact.pmf(k).unwrap().as_rational(),
                exact.pmf(n - k).unwrap().as_rational()
            );
            let a = float.pmf(k).unwrap().to_f64();
            let b = float.pmf(n - k).unwrap().to_f64();
            assert_eq!(a.to_bits(), b.to_bits(), "float pmf asymmetry at n={n}, k={k}");
        }
        for k in 0..n {
            // CDF(k) + CDF(n-k-1) = 1: exact equality of rationals; a couple
            // of ulps in float mode (the odd-n middle term pairs with itself)
            let sum = exact.cdf(k).unwrap().as_rational().unwrap()
                + exact.cdf(n - k - 1).unwrap().as_rational().unwrap();
            assert!(sum.is_one(), "exact cdf symmetry fails at n={n}, k={k}");
            let fsum = float.cdf(k).unwrap().to_f64() + float.cdf(n - k - 1).unwrap().to_f64();
            assert!(
                (fsum - 1.0).abs() <= 4.0 * f64::EPSILON,
                "float cdf symmetry at n={n}, k={k}: {fsum}"
            );
        }
    }
}

#[test]
fn quantile_bracket_on_fine_grid() {
    let models = [
        BinomialModel::fair(156).unwrap(),
        BinomialModel::fair(156).unwrap().in_float_mode(),
        BinomialModel::from_theta(77, 0.34).unwrap(),
    ];
    for model in &models {
        for i in 0..1000 {
            let p = (i as f64 + 0.5) / 1000.0;
            let q = model.quantile(p).unwrap();
            let at_q = model.cdf(q).unwrap().to_f64();
            assert!(at_q >= p, "cdf(q) < p for p={p}");
            if q > 0 {
                let below = model.cdf(q - 1).unwrap().to_f64();
                assert!(below < p, "cdf(q-1) = {below} >= p = {p}");
            }
        }
    }
}

proptest! {
    #[test]
    fn quantile_bracket_fuzz(n in 1u64..400, theta in 0.01f64..0.99, p in 0.0001f64..0.9999) {
        let model = BinomialModel::from_theta(n, theta).unwrap();
        let q = model.quantile(p).unwrap();
        prop_assert!(model.cdf(q).unwrap().to_f64() >= p);
        if q > 0 {
            prop_assert!(model.cdf(q - 1).unwrap().to_f64() < p);
        }
    }

    #[test]
    fn cdf_incomplete_beta_duality(n in 1u64..300, theta in 0.02f64..0.98, k_frac in 0.0f64..1.0) {
        // P(X <= k) = I_{1-theta}(n-k, k+1)
        let k = ((n as f64) * k_frac).floor() as u64;
        let model = BinomialModel::from_theta(n, theta).unwrap();
        let cdf = model.cdf(k).unwrap().to_f64();
        if k < n {
            let dual = reg_inc_beta(1.0 - theta, (n - k) as f64, k as f64 + 1.0).unwrap();
            prop_assert!((cdf - dual).abs() < 1e-10, "cdf {cdf} vs dual {dual}");
        }
    }

    #[test]
    fn exact_and_float_modes_agree(n in 1u64..300, num in 1u64..100, den_extra in 1u64..100, k_frac in 0.0f64..1.0) {
        let den = num + den_extra;
        let k = ((n as f64) * k_frac).floor() as u64;
        let exact = BinomialModel::from_ratio(n, num, den).unwrap();
        let float = exact.in_float_mode();
        let pe = exact.pmf(k).unwrap().to_f64();
        let pf = float.pmf(k).unwrap().to_f64();
        if pe > 0.0 {
            prop_assert!(((pe - pf) / pe).abs() < 1e-12, "pmf modes differ: {pe} vs {pf}");
        }
        let ce = exact.cdf(k).unwrap().to_f64();
        let cf = float.cdf(k).unwrap().to_f64();
        prop_assert!(((ce - cf) / ce.max(1e-300)).abs() < 1e-12, "cdf modes differ: {ce} vs {cf}");
    }

    #[test]
    fn interval_narrows_as_alpha_grows(n in 2u64..500, a_lo in 0.01f64..0.4, extra in 0.01f64..0.5) {
        let model = BinomialModel::fair(n).unwrap();
        let narrow_alpha = a_lo + extra; // larger tail budget
        let wide = bayesrule::central_interval(&model, a_lo, Convention::NonstrictBoth).unwrap();
        let narrow = bayesrule::central_interval(&model, narrow_alpha, Convention::NonstrictBoth).unwrap();
        prop_assert!(narrow.k_lo() >= wide.k_lo());
        prop_assert!(narrow.k_hi() <= wide.k_hi());
        prop_assert!(wide.coverage().to_f64() >= 1.0 - a_lo - 1e-12);
    }

    #[test]
    fn interval_symmetry_at_half(n in 1u64..400, alpha in 0.005f64..0.6) {
        let model = BinomialModel::fair(n).unwrap();
        let iv = bayesrule::central_interval(&model, alpha, Convention::NonstrictBoth).unwrap();
        // the scans resolve symmetrically unless CDF(k_lo) ties alpha/2 exactly
        let tie = model.cdf(iv.k_lo()).unwrap().as_rational().unwrap()
            == &BigRational::from_float(alpha / 2.0).unwrap();
        if !tie {
            prop_assert_eq!(iv.k_lo() + iv.k_hi(), n, "asymmetric interval at n={}, alpha={}", n, alpha);
        }
    }

    #[test]
    fn likelihood_ratio_at_least_one(n in 1u64..500, k_frac in 0.0f64..1.0, theta0 in 0.01f64..0.99) {
        let k = ((n as f64) * k_frac).floor() as u64;
        let data = CountData::new(n, k).unwrap();
        let lr = gof::likelihood_ratio(&data, theta0).unwrap();
        prop_assert!(lr >= 1.0);
    }

    #[test]
    fn beta_reflection_symmetry(x in 0.001f64..0.999, a in 0.1f64..50.0, b in 0.1f64..50.0) {
        let lhs = reg_inc_beta(x, a, b).unwrap();
        let rhs = 1.0 - reg_inc_beta(1.0 - x, b, a).unwrap();
        prop_assert!((lhs - rhs).abs() < 1e-13, "reflection broken: {lhs} vs {rhs}");
    }

    #[test]
    fn unit_round_trip(value in 1e-6f64..1e6, from in 0usize..4, to in 0usize..4) {
        let units = [Unit::Perch, Unit::Yard, Unit::Foot, Unit::Metre];
        let q = Quantity::new(value, units[from]);
        let there = convert(&q, units[to]).unwrap();
        let back = convert(&there, units[from]).unwrap();
        prop_assert!((back.value - value).abs() <= 1e-12 * value.abs());
    }

    #[test]
    fn records_csv_round_trip(offsets in prop::collection::vec(-50f64..50.0, 1..80)) {
        prop_assume!(offsets.iter().all(|&x| x != 0.0));
        let records: Vec<_> = offsets
            .iter()
            .enumerate()
            .map(|(i, &offset_yd)| greenbayes::greensim::ThrowRecord {
                session: 1,
                trial: i as u64 + 1,
                offset_yd,
                side: if offset_yd > 0.0 {
                    greenbayes::greensim::Side::Right
                } else {
                    greenbayes::greensim::Side::Left
                },
                out_of_rink: false,
            })
            .collect();
        let parsed = read_offsets_csv(records_to_csv(&records).as_bytes()).unwrap();
        prop_assert_eq!(parsed, offsets);
    }
}

#[test]
fn p_value_decreases_away_from_the_null() {
    let n = 156u64;
    let theta0 = 0.5;
    let mut last_upper = f64::INFINITY;
    let mut last_lower = f64::INFINITY;
    for d in 0..=70u64 {
        let hi = gof::fit_counts(&CountData::new(n, 78 + d).unwrap(), theta0, 5.0).unwrap();
        assert!(hi.p_value <= last_upper + 1e-15);
        last_upper = hi.p_value;
        let lo = gof::fit_counts(&CountData::new(n, 78 - d).unwrap(), theta0, 5.0).unwrap();
        assert!(lo.p_value <= last_lower + 1e-15);
        last_lower = lo.p_value;
    }
}

#[test]
fn fit_report_internal_consistency_fuzzed() {
    // 10^4 deterministic pseudo-random inputs
    let mut state = 0x853c49e6748fea9bu64;
    let mut next = move || {
        state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        state
    };
    for _ in 0..10_000 {
        let n = next() % 2000 + 1;
        let k = next() % (n + 1);
        let theta0 = (next() % 997 + 1) as f64 / 999.0;
        let threshold = 1.0 + (next() % 1000 + 1) as f64 / 100.0;
        let data = CountData::new(n, k).unwrap();
        let r = gof::fit_counts(&data, theta0, threshold).unwrap();
        assert!(r.lr >= 1.0);
        assert!(r.g2 >= 0.0);
        if r.lr.is_finite() {
            assert!((r.g2 - 2.0 * r.lr.ln()).abs() <= 1e-12 * r.g2.max(1.0));
        } else {
            // lr saturates once g2/2 exceeds the f64 exponent range
            assert!(r.g2 / 2.0 > 709.0);
        }
        assert!((0.0..=1.0).contains(&r.p_value));
        assert_eq!(r.verdict == Verdict::Consistent, r.lr < r.threshold);
        assert_eq!(r.theta0, theta0);
    }
}

#[test]
fn discrete_posterior_sums_to_one() {
    let data = CountData::new(156, 73).unwrap();
    for m in [1usize, 2, 10, 1000, 10_000, 100_000] {
        let w = bayesrule::discrete_posterior(&data, m).unwrap();
        assert_eq!(w.len(), m);
        // compensated total of the normalized weights
        let mut sum = 0.0;
        let mut comp = 0.0;
        for &x in &w {
            let y = x - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
        assert!((sum - 1.0).abs() < 1e-12, "m = {m}: sum = {sum}");
        assert!(w.iter().all(|&x| x >= 0.0));
    }
}

#[test]
fn discrete_posterior_converges_like_one_over_m() {
    let data = CountData::new(156, 73).unwrap();
    let query = bayesrule::PosteriorQuery::new(0.4, 0.6).unwrap();
    let beta = bayesrule::beta_posterior_prob(&data, &query).unwrap();
    let mut errors = Vec::new();
    for m in [100usize, 1000, 10_000] {
        let w = bayesrule::discrete_posterior(&data, m).unwrap();
        let agg = bayesrule::aggregate_cells(&w, 0.4, 0.6);
        errors.push((agg - beta).abs());
    }
    // each tenfold refinement must shrink the error at least tenfold
    assert!(errors[1] < errors[0] / 10.0, "errors: {errors:?}");
    assert!(errors[2] < errors[1] / 10.0, "errors: {errors:?}");
    assert!(errors[2] < 2e-4);
}

#[test]
fn discrete_posterior_converges_on_an_interval_grid() {
    // cell-aligned intervals for m in {100, 1000}: twentieths of [0, 1]
    let data = CountData::new(156, 73).unwrap();
    for (lo, hi) in [(0.0, 0.5), (0.45, 0.5), (0.3, 0.7), (0.5, 1.0), (0.0, 1.0)] {
        let query = bayesrule::PosteriorQuery::new(lo, hi).unwrap();
        let beta = bayesrule::beta_posterior_prob(&data, &query).unwrap();
        let mut prev = f64::INFINITY;
        for m in [100usize, 1000] {
            let w = bayesrule::discrete_posterior(&data, m).unwrap();
            let err = (bayesrule::aggregate_cells(&w, lo, hi) - beta).abs();
            assert!(err < 1.0 / m as f64, "error {err} above O(1/m) at ({lo}, {hi}), m={m}");
            assert!(err < prev || err < 1e-12, "no improvement at ({lo}, {hi}), m={m}");
            prev = err;
        }
    }
}

#[test]
fn interval_distance_linear_in_span_and_unit_stable() {
    let model = BinomialModel::fair(156).unwrap();
    let iv = bayesrule::central_interval(&model, 0.05, Convention::NonstrictBoth).unwrap();
    let base = bayesrule::interval_to_distance(&iv, 156, &Quantity::new(1.0, Unit::Perch)).unwrap();
    for factor in [2.0, 5.5, 0.125] {
        let scaled =
            bayesrule::interval_to_distance(&iv, 156, &Quantity::new(factor, Unit::Perch)).unwrap();
        assert!(
            (scaled.value - factor * base.value).abs() <= 1e-12 * scaled.value.abs(),
            "not linear at factor {factor}"
        );
    }
    // perch -> metre -> perch round trip of the physical width
    let metres = convert(&base, Unit::Metre).unwrap();
    let back = convert(&metres, Unit::Perch).unwrap();
    assert!((back.value - base.value).abs() <= 1e-12 * base.value.abs());
}
