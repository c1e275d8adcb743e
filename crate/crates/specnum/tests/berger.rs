use std::collections::BTreeMap;

use jetpoly::{rat, Rational};
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use specnum::berger::*;

fn params(a: f64) -> BergerParams {
    BergerParams::new(a).unwrap()
}

fn runner(cases: u32, seed: u8) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

#[test]
fn parameter_must_be_positive() {
    for a in [0.0, -1.0, f64::NAN, f64::INFINITY] {
        assert!(BergerParams::new(a).is_err(), "{a}");
    }
    assert!(curl_spectrum(params(1.0), 1).is_err());
}

#[test]
fn round_laplacian_multiplicities() {
    let t = laplacian_spectrum(params(1.0), 40);
    let mut by_n: BTreeMap<u64, u64> = BTreeMap::new();
    for e in t.entries() {
        assert_eq!(e.value, (e.n * (e.n + 2)) as f64);
        *by_n.entry(e.n).or_default() += e.multiplicity;
    }
    for (n, m) in by_n {
        assert_eq!(m, (n + 1) * (n + 1), "n = {n}");
    }
}

#[test]
fn squashed_laplacian_multiplicities_sum_per_level() {
    for a in [0.3, 0.5, 2.0, 3.7] {
        let mut by_n: BTreeMap<u64, u64> = BTreeMap::new();
        for e in laplacian_spectrum(params(a), 30).entries() {
            *by_n.entry(e.n).or_default() += e.multiplicity;
        }
        assert!(by_n.iter().all(|(n, m)| *m == (n + 1) * (n + 1)));
    }
}

#[test]
fn laplacian_spot_values() {
    for a in [0.5, 1.0, 2.0] {
        let e = laplacian_spectrum(params(a), 2).entries().find(|e| e.n == 2 && e.l == 1).unwrap();
        assert_eq!((e.value, e.multiplicity), (8.0, 3));
    }
    let e = laplacian_spectrum(params(2.0), 1).entries().find(|e| e.n == 1 && e.l == 0).unwrap();
    assert_eq!((e.value, e.multiplicity), (9.0 / 4.0, 4));
    let first = laplacian_spectrum(params(2.0), 0).entries().next().unwrap();
    assert_eq!((first.n, first.value, first.multiplicity), (0, 0.0, 1));
}

#[test]
fn round_curl_spectrum_is_plus_minus_n() {
    let t = curl_spectrum(params(1.0), 60).unwrap();
    let mut mult: BTreeMap<i64, u64> = BTreeMap::new();
    for e in t.entries() {
        assert_eq!(e.value.fract(), 0.0);
        *mult.entry(e.value as i64).or_default() += e.multiplicity;
    }
    for n in 2..=50i64 {
        let want = (n * n - 1) as u64;
        assert_eq!(mult[&n], want, "+{n}");
        assert_eq!(mult[&-n], want, "-{n}");
    }
    assert!(!mult.contains_key(&0) && !mult.contains_key(&1) && !mult.contains_key(&-1));
}

#[test]
fn curl_series_signs_and_spot_values() {
    for a in [0.2, 0.7, 1.0, 1.5, 4.0] {
        for e in curl_spectrum(params(a), 25).unwrap().entries() {
            assert!(e.value != 0.0);
            match e.series {
                Series::IV => assert!(e.value < 0.0),
                Series::Laplace => unreachable!(),
                _ => assert!(e.value > 0.0),
            }
        }
    }
    let ii2 = curl_spectrum(params(2.0), 2).unwrap().entries().find(|e| e.series == Series::II && e.n == 2).unwrap();
    assert_eq!((ii2.value, ii2.multiplicity), (4.0, 1));
}

#[test]
fn round_counting_values() {
    let t = curl_spectrum(params(1.0), 120).unwrap();
    assert_eq!(counting_function(&t, 100.0, Sign::Plus).unwrap(), 328_251);
    assert_eq!(counting_function(&t, 100.0, Sign::Minus).unwrap(), 328_251);
    assert_eq!(counting_function(&t, 0.0, Sign::Plus).unwrap(), 0);
    assert_eq!(counting_function(&t, -3.0, Sign::Minus).unwrap(), 0);
    let direct: u64 = (2..100u64).map(|n| n * n - 1).sum();
    assert_eq!(direct, 328_251);
    runner(100, 61)
        .run(&(0.0f64..110.0), |lam| {
            prop_assert_eq!(
                counting_function(&t, lam, Sign::Plus).unwrap(),
                counting_function(&t, lam, Sign::Minus).unwrap()
            );
            Ok(())
        })
        .unwrap();
}

#[test]
fn counting_refuses_queries_beyond_completeness() {
    for a in [0.5, 1.0, 2.0] {
        let t = curl_spectrum(params(a), 40).unwrap();
        let b = t.completeness_bound();
        assert!(counting_function(&t, b, Sign::Plus).is_ok());
        assert!(matches!(counting_function(&t, b * 1.01, Sign::Minus), Err(SpectralError::BeyondBound { .. })));
        // every eigenvalue beyond the table has modulus at least the bound
        let bigger = curl_spectrum(params(a), 120).unwrap();
        for e in bigger.entries().filter(|e| e.n > 40) {
            assert!(e.value.abs() >= b, "a = {a}: {e:?} below {b}");
        }
    }
}

#[test]
fn weyl_law_at_round_sphere() {
    let mut last = f64::INFINITY;
    for lam in [50.0, 100.0, 200.0, 400.0] {
        let w = weyl_check(params(1.0), lam).unwrap();
        assert_eq!(w.ratio_plus, w.ratio_minus);
        assert!(w.deviation <= w.bound, "{w:?}");
        assert!(w.deviation < last);
        last = w.deviation;
    }
    let w = weyl_check(params(1.0), 200.0).unwrap();
    assert_eq!(w.count_plus, 2_646_501);
    assert!((w.ratio_plus - 0.992_437_875).abs() < 1e-9);
}

#[test]
fn weyl_law_squashed() {
    for a in [0.5, 2.0] {
        let w = weyl_check(params(a), 200.0).unwrap();
        assert!((w.ratio_plus - 1.0).abs() < 0.1 && (w.ratio_minus - 1.0).abs() < 0.1, "{w:?}");
    }
}

#[test]
fn zeta_matches_known_constants() {
    assert!((zeta(3.0).unwrap() - 1.202_056_903_159_594_2).abs() < 1e-14);
    assert!((zeta(5.0).unwrap() - 1.036_927_755_143_37).abs() < 1e-14);
    assert!((zeta(2.0).unwrap() - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
    assert!(zeta(1.0).is_err());
}

#[test]
fn eta_requires_convergence() {
    let t = curl_spectrum(params(2.0), 10).unwrap();
    assert!(matches!(eta_partial(&t, 3.0), Err(SpectralError::Divergent { .. })));
    assert!(eta_decomposition_rhs(params(2.0), 2.0, 10).is_err());
}

#[test]
fn round_eta_vanishes() {
    let t = curl_spectrum(params(1.0), 500).unwrap();
    // series III runs two levels past series IV, leaving an O(n_max^-4) imbalance
    let eta = eta_partial(&t, 6.0).unwrap();
    assert!(eta.abs() < 2.0 * 500f64.powi(-4), "{eta}");
    let rhs = eta_decomposition_rhs(params(1.0), 6.0, 500).unwrap();
    assert!(rhs.abs() < 500f64.powi(-3), "{rhs}");
}

#[test]
fn eta_decomposition_identity() {
    for a in [0.5, 1.0, 2.0] {
        let n = 3000;
        let lhs = eta_partial(&curl_spectrum(params(a), n).unwrap(), 6.0).unwrap();
        let rhs = eta_decomposition_rhs(params(a), 6.0, n).unwrap();
        assert!((lhs - rhs).abs() <= 1e-6, "a = {a}: {lhs} vs {rhs}");
    }
}

#[test]
fn eta_truncation_tail_shrinks() {
    let eta = |n| eta_partial(&curl_spectrum(params(2.0), n).unwrap(), 6.0).unwrap();
    let (e1, e2, e3) = (eta(100), eta(200), eta(400));
    let (d1, d2) = ((e2 - e1).abs(), (e3 - e2).abs());
    assert!(d2 < d1 / 6.0, "{d1} {d2}");
}

#[test]
fn theta_brackets_are_negative() {
    for a in [0.5, 2.0] {
        assert!(theta_terms(params(a), 6.0, 50).all(|(_, b)| b < 0.0));
    }
}

#[test]
fn hitchin_remainder_is_bounded() {
    for a in [0.5, 1.0, 2.0] {
        let r = |n| hitchin_remainder(params(a), 6.0, n);
        let (r1, r2) = (r(50), r(200));
        assert!(r2 <= r1 * (1.0 + 1e-12) && r2.is_finite(), "a = {a}: {r1} {r2}");
    }
}

fn exact_closed(a: &Rational) -> EtaClosedForms {
    eta_closed_forms(a).unwrap()
}

#[test]
fn closed_form_values() {
    let one = exact_closed(&Rational::one());
    assert!(one.eta0.is_zero() && one.dirac_eta0.is_zero());
    assert_eq!(one.theta0, rat(-2, 3));
    assert_eq!(exact_closed(&rat(2, 1)).eta0, rat(6, 1));
    assert!(eta_closed_forms(&rat(0, 1)).is_err());
    assert!(eta_closed_forms(&rat(-1, 2)).is_err());
}

#[test]
fn closed_form_identities() {
    runner(50, 62)
        .run(&(1i64..=40, 1i64..=17), |(p, q)| {
            let c = exact_closed(&rat(p, q));
            prop_assert!(c.identities_hold());
            prop_assert_eq!(&c.eta0 + rat(4, 1) * &c.dirac_eta0, Rational::zero());
            prop_assert_eq!(&c.theta0 + rat(1, 1) + rat(4, 1) * zeta_minus_one(), c.eta0.clone());
            Ok(())
        })
        .unwrap();
}

#[test]
fn spectrum_csv() {
    let mut buf = Vec::new();
    curl_spectrum(params(1.0), 3).unwrap().write_csv(&mut buf).unwrap();
    let s = String::from_utf8(buf).unwrap();
    let mut lines = s.lines();
    assert_eq!(lines.next(), Some("series,n,l,value,multiplicity"));
    assert!(s.contains("II,2,0,2,1"));
    assert_eq!(lines.count(), curl_spectrum(params(1.0), 3).unwrap().entries().count());
}
