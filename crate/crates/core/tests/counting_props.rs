use std::f64::consts::{LN_2, PI};

use fermisea::counting::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn spectrum() -> impl Strategy<Value = OccupationSpectrum> {
    proptest::collection::vec(0.0f64..=1.0, 1..=30)
        .prop_map(|d| OccupationSpectrum::new(d).unwrap())
}

/// Inverse DFT of χ sampled at n+1 equally spaced angles.
fn invert_generating_function(spec: &OccupationSpectrum) -> Vec<f64> {
    let n = spec.len() + 1;
    let samples: Vec<Complex64> = (0..n)
        .map(|j| generating_function(spec, 2.0 * PI * j as f64 / n as f64))
        .collect();
    (0..n)
        .map(|k| {
            let sum: Complex64 = samples
                .iter()
                .enumerate()
                .map(|(j, chi)| {
                    chi * Complex64::from_polar(1.0, -2.0 * PI * (j * k) as f64 / n as f64)
                })
                .sum();
            sum.re / n as f64
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn inequality_chain_holds(spec in spectrum()) {
        let r = inequality_report(&spec);
        prop_assert!(r.entropy_nats - r.bound2 >= -CHAIN_SLACK);
        prop_assert!(r.bound2 - r.bound4 >= -CHAIN_SLACK);
        prop_assert_eq!(r.chain_holds, (true, true));
    }

    #[test]
    fn distribution_cumulants_match_closed_forms(spec in spectrum()) {
        let p = number_distribution(&spec).unwrap();
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        let [mean, var, k3, k4] = distribution_cumulants(&p);
        prop_assert!((mean - cumulant(&spec, 1).unwrap()).abs() < 1e-8);
        prop_assert!((var - cumulant(&spec, 2).unwrap()).abs() < 1e-8);
        prop_assert!((k3 - cumulant(&spec, 3).unwrap()).abs() < 1e-8);
        prop_assert!((k4 - cumulant(&spec, 4).unwrap()).abs() < 1e-8);
    }

    #[test]
    fn fourier_inversion_recovers_distribution(spec in spectrum()) {
        let p = number_distribution(&spec).unwrap();
        let q = invert_generating_function(&spec);
        for (a, b) in p.iter().zip(&q) {
            prop_assert!((a - b).abs() < 1e-8);
        }
    }

    #[test]
    fn entropy_is_additive(a in spectrum(), b in spectrum()) {
        let joint = entropy(&a.concat(&b));
        prop_assert!((joint - entropy(&a) - entropy(&b)).abs() < 1e-12);
    }

    #[test]
    fn generating_function_is_bounded(spec in spectrum(), lambda in -10.0f64..10.0) {
        prop_assert!(generating_function(&spec, lambda).norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn dilute_bosons_satisfy_the_bound(n in proptest::collection::vec(0.0f64..1.0, 1..20)) {
        let occ = BosonOccupations::new(n).unwrap();
        let v = boson_inequality_check(&occ);
        prop_assert!(v.applicable && v.holds);
    }
}

#[test]
fn pointwise_identity_between_bounds() {
    // f_2 - f_4 = 12 ln2 x(1-x)(1-2x)²
    let steps = 100_000;
    let mut worst = 0.0_f64;
    for i in 0..=steps {
        let x = i as f64 / steps as f64;
        let (s, f2, f4) = fig1_functions(x);
        let rhs = 12.0 * LN_2 * x * (1.0 - x) * (1.0 - 2.0 * x).powi(2);
        worst = worst.max((f2 - f4 - rhs).abs());
        assert!(s - f2 >= -1e-15 && f2 - f4 >= -1e-15, "x = {x}");
    }
    assert!(worst <= 1e-12, "{worst}");
}

#[test]
fn quartic_factor_roots() {
    // Bisection oracle for the roots of 1 - 6x + 6x²
    let g = |x: f64| 1.0 - 6.0 * x + 6.0 * x * x;
    let bisect = |mut lo: f64, mut hi: f64| {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if g(lo) * g(mid) <= 0.0 {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    };
    let r1 = bisect(0.0, 0.5);
    let r2 = bisect(0.5, 1.0);
    assert!((r1 - (0.5 - 0.5 / 3f64.sqrt())).abs() < 1e-14);
    assert!((r2 - (0.5 + 0.5 / 3f64.sqrt())).abs() < 1e-14);
    // f_4 changes sign at exactly those roots
    assert!(fig1_functions(r1 - 1e-6).2 < 0.0 && fig1_functions(r1 + 1e-6).2 > 0.0);
    assert!(fig1_functions(r2 - 1e-6).2 > 0.0 && fig1_functions(r2 + 1e-6).2 < 0.0);
}

#[test]
fn high_order_cumulants_match_distribution() {
    let spec = OccupationSpectrum::new(vec![0.13, 0.5, 0.77, 0.91, 0.02]).unwrap();
    let p = number_distribution(&spec).unwrap();
    // raw-moment route up to the 5th cumulant
    let moment = |r: i32| -> f64 {
        p.iter()
            .enumerate()
            .map(|(k, &pk)| pk * (k as f64).powi(r))
            .sum()
    };
    let m: Vec<f64> = (0..=5).map(moment).collect();
    let k1 = m[1];
    let k2 = m[2] - m[1].powi(2);
    let k3 = m[3] - 3.0 * m[2] * m[1] + 2.0 * m[1].powi(3);
    let k4 = m[4] - 4.0 * m[3] * m[1] - 3.0 * m[2].powi(2) + 12.0 * m[2] * m[1].powi(2)
        - 6.0 * m[1].powi(4);
    let k5 = m[5] - 5.0 * m[4] * m[1] - 10.0 * m[3] * m[2]
        + 20.0 * m[3] * m[1].powi(2)
        + 30.0 * m[2].powi(2) * m[1]
        - 60.0 * m[2] * m[1].powi(3)
        + 24.0 * m[1].powi(5);
    for (order, want) in [(1, k1), (2, k2), (3, k3), (4, k4), (5, k5)] {
        let got = cumulant(&spec, order).unwrap();
        assert!((got - want).abs() < 1e-10, "order {order}: {got} vs {want}");
    }
}

#[test]
fn ten_thousand_random_spectra() {
    use fermisea::random;
    use rand::Rng;
    let mut rng = random::rng(1);
    for _ in 0..10_000 {
        let len = rng.random_range(1..=50);
        let spec = OccupationSpectrum::new(random::occupations(&mut rng, len)).unwrap();
        assert!(inequality_report(&spec).chain_ok());
    }
}

#[test]
fn report_serializes_with_stable_keys() {
    let spec = OccupationSpectrum::new(vec![0.25, 0.5]).unwrap();
    let value = serde_json::to_value(inequality_report(&spec)).unwrap();
    let mut keys: Vec<&str> = value
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    keys.sort_unstable();
    assert_eq!(
        keys,
        [
            "bound2",
            "bound4",
            "chain_holds",
            "entropy_nats",
            "kappa4",
            "mean",
            "variance"
        ]
    );
    assert_eq!(value["chain_holds"], serde_json::json!([true, true]));
    let back: CountingReport = serde_json::from_value(value).unwrap();
    assert_eq!(back, inequality_report(&spec));
}
