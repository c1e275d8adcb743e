#![allow(dead_code)]

use curlsym::{CurvatureConfig, Mat, SymbolJet};
use jetpoly::{rat, Gq, Rational, TruncatedPoly};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

pub fn runner(cases: u32, seed: u8) -> TestRunner {
    TestRunner::new_with_rng(
        Config { cases, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &[seed; 32]),
    )
}

pub fn small_rational() -> impl Strategy<Value = Rational> {
    (-3i64..=3, 1i64..=4).prop_map(|(p, q)| rat(p, q))
}

/// Random configuration with every constant independent.
pub fn config() -> impl Strategy<Value = CurvatureConfig> {
    prop::collection::vec(small_rational(), 24)
        .prop_map(|v| CurvatureConfig::from_constants(std::array::from_fn(|k| v[k].clone())))
}

/// Random configuration with `Ric(0) = 0`.
pub fn config_dric() -> impl Strategy<Value = CurvatureConfig> {
    config().prop_map(|c| {
        let mut k = c.constants().clone();
        for v in k.iter_mut().take(6) {
            *v = rat(0, 1);
        }
        CurvatureConfig::from_constants(k)
    })
}

pub fn coeff() -> impl Strategy<Value = Gq> {
    (-3i64..=3, 1i64..=3, -3i64..=3, 1i64..=3).prop_map(|(a, b, c, d)| Gq::new(rat(a, b), rat(c, d)))
}

pub fn poly(order: u32) -> impl Strategy<Value = TruncatedPoly> {
    // monomials above the order are dropped by `from_terms`
    let exp = prop::array::uniform6(0u8..=order.min(2) as u8);
    prop::collection::vec((exp, coeff()), 0..5).prop_map(move |t| TruncatedPoly::from_terms(t, order))
}

pub fn mat(rows: usize, cols: usize, order: u32) -> impl Strategy<Value = Mat> {
    prop::collection::vec(poly(order), rows * cols).prop_map(move |v| {
        let mut it = v.into_iter();
        Mat::from_fn(rows, cols, |_, _| it.next().expect("enough entries"))
    })
}

/// Random 3x3 jet with every component populated.
pub fn jet(top_degree: i32, accuracy: u32) -> impl Strategy<Value = SymbolJet> {
    let comps: Vec<_> = (0..=accuracy).map(|k| mat(3, 3, accuracy - k)).collect();
    comps.prop_map(move |cs| {
        let mut j = SymbolJet::zero(top_degree, accuracy, (3, 3));
        for (k, c) in cs.into_iter().enumerate() {
            j.set_component(k, c);
        }
        j
    })
}

pub fn all_units() -> Vec<(String, CurvatureConfig)> {
    (1..=24).map(|j| (format!("c{j}"), CurvatureConfig::unit(j))).collect()
}

pub fn q(p: i64, d: i64) -> Gq {
    Gq::ratio(p, d)
}

pub fn qi(p: i64, d: i64) -> Gq {
    Gq::imag(rat(p, d))
}

/// Polynomial in `x` from `(p, q, [e1, e2, e3])` terms.
pub fn x_poly(terms: &[(i64, i64, [u8; 3])], order: u32) -> TruncatedPoly {
    TruncatedPoly::from_terms(
        terms.iter().map(|&(p, d, e)| ([e[0], e[1], e[2], 0, 0, 0], Gq::ratio(p, d))),
        order,
    )
}

/// Polynomial in `x` with Gaussian-rational coefficients.
pub fn gx_poly(terms: &[(Gq, [u8; 3])], order: u32) -> TruncatedPoly {
    TruncatedPoly::from_terms(terms.iter().map(|(c, e)| ([e[0], e[1], e[2], 0, 0, 0], c.clone())), order)
}

/// Constant 3x3 matrix `scale * m`.
pub fn cmat(scale: Gq, m: [[Gq; 3]; 3], order: u32) -> Mat {
    Mat::constant(3, 3, order, |a, b| &scale * &m[a][b])
}
