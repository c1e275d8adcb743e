mod common;

use common::*;
use curlsym::matrix::{gq_matrix, Mat};
use curlsym::projections::*;
use curlsym::symbol::SymbolJet;
use curlsym::{build_metric_jet, CurvatureConfig};
use jetpoly::{rat, Gq, Rational, TruncatedPoly};
use num_traits::Zero;
use proptest::prelude::*;

fn z() -> Gq {
    Gq::zero()
}

fn anchor(m: &Mat) -> Vec<Vec<Gq>> {
    m.at_anchor()
}

fn family(cfg: &CurvatureConfig, n: u32, aleph: Aleph) -> (Workspace, ProjectionFamily) {
    let ws = Workspace::new(cfg, n).unwrap();
    let fam = run_algorithm(&ws, aleph).unwrap();
    (ws, fam)
}

fn sign_of(aleph: Aleph) -> i64 {
    if aleph == Aleph::Plus {
        1
    } else {
        -1
    }
}

#[test]
fn initial_symbols_flat_values() {
    let mj = build_metric_jet(&CurvatureConfig::flat());
    let [p0, pp, pm] = initial_symbols(&mj, 2);
    let one = Gq::one;
    let at_eta0 = |m: &Mat| m.at_eta_zero();
    assert_eq!(at_eta0(&p0), cmat(one(), [[z(), z(), z()], [z(), z(), z()], [z(), z(), one()]], 2));
    for (p, s) in [(pp, 1), (pm, -1)] {
        let expect = cmat(
            q(1, 2),
            [[one(), qi(-s, 1), z()], [qi(s, 1), one(), z()], [z(), z(), z()]],
            2,
        );
        assert_eq!(at_eta0(&p), expect);
    }
}

#[test]
fn initial_symbols_resolve_identity() {
    runner(20, 41)
        .run(&config(), |cfg| {
            let mj = build_metric_jet(&cfg);
            let [p0, pp, pm] = initial_symbols(&mj, 3);
            prop_assert_eq!(p0.add(&pp).add(&pm), Mat::identity(3, 3));
            Ok(())
        })
        .unwrap();
}

#[test]
fn initial_symbols_are_orthogonal_projections_when_flat() {
    let mj = build_metric_jet(&CurvatureConfig::flat());
    let ps = initial_symbols(&mj, 3);
    for (i, a) in ps.iter().enumerate() {
        for (j, b) in ps.iter().enumerate() {
            let prod = a.mul(b);
            if i == j {
                assert_eq!(&prod, a);
            } else {
                assert!(prod.is_zero(), "P{i} P{j} != 0");
            }
        }
    }
}

#[test]
fn accuracy_out_of_range_is_rejected() {
    for n in [0, 4] {
        assert!(matches!(Workspace::new(&CurvatureConfig::flat(), n), Err(ProjectionError::Accuracy(m)) if m == n));
    }
}

#[test]
fn flat_corrections_vanish() {
    for aleph in Aleph::ALL {
        let (ws, fam) = family(&CurvatureConfig::flat(), 3, aleph);
        assert!(fam.steps.iter().all(|s| s.x.is_zero() && s.r.is_zero() && s.t.is_zero()));
        assert!(verify_projection(&fam, &ws).is_ok());
        assert!(subprincipal_check(&fam, &ws.mj).unwrap().is_zero());
    }
}

#[test]
fn c1_step_two_goldens() {
    let cfg = CurvatureConfig::unit(1);
    let mut traces = Vec::new();
    for aleph in [Aleph::Plus, Aleph::Minus] {
        let s = sign_of(aleph);
        let (ws, fam) = family(&cfg, 2, aleph);
        let st = &fam.steps[1];
        assert_eq!(st.k, 2);
        let one = Gq::one;
        assert_eq!(
            anchor(&st.r),
            gq_matrix(q(-1, 12), [[one(), qi(-2 * s, 1), z()], [qi(2 * s, 1), one(), z()], [z(), z(), z()]])
        );
        assert_eq!(
            anchor(&st.s),
            gq_matrix(q(-1, 12), [[q(2, 1), qi(-s, 1), z()], [qi(s, 1), q(2, 1), z()], [z(), z(), z()]])
        );
        assert_eq!(
            anchor(&st.t),
            gq_matrix(q(s, 12), [[one(), z(), z()], [z(), q(-1, 1), z()], [z(), z(), z()]])
        );
        assert_eq!(
            anchor(&st.x),
            gq_matrix(q(-1, 24), [[q(4, 1), qi(-3 * s, 1), z()], [qi(s, 1), q(4, 1), z()], [z(), z(), z()]])
        );
        assert!(verify_projection(&fam, &ws).is_ok());
        traces.push(st.x.trace().constant_term());
    }
    assert_eq!(&traces[0] - &traces[1], Gq::zero());
}

/// Degree -1 part of `P_{+-,1}` for `c1`, at `eta = 0`.
fn c1_level_one(s: i64, printed: bool) -> Mat {
    let third = if printed { qi(-3, 1) } else { qi(3, 1) };
    let rows: [[Vec<(Gq, [u8; 3])>; 3]; 3] = [
        [vec![(qi(1, 1), [0, 0, 1])], vec![(q(s, 1), [0, 0, 1])], vec![]],
        [vec![(q(s, 1), [0, 0, 1])], vec![(qi(-1, 1), [0, 0, 1])], vec![]],
        [
            vec![(q(s, 1), [0, 1, 0]), (third, [1, 0, 0])],
            vec![(q(s, 1), [1, 0, 0]), (qi(1, 1), [0, 1, 0])],
            vec![],
        ],
    ];
    Mat::from_fn(3, 3, |a, b| gx_poly(&rows[a][b], 1).scale(&q(-1, 12)))
}

#[test]
fn c1_level_one_polynomials() {
    let cfg = CurvatureConfig::unit(1);
    for aleph in [Aleph::Plus, Aleph::Minus] {
        let s = sign_of(aleph);
        let (ws, fam) = family(&cfg, 2, aleph);
        let level1 = fam.jet.component(1);
        assert_eq!(level1.at_eta_zero(), c1_level_one(s, false));
        assert_ne!(level1.at_eta_zero(), c1_level_one(s, true));

        // the printed entry in row 3, column 1 has the opposite sign of i x^1 and is not idempotent
        let mut bad = fam.clone();
        let shift = c1_level_one(s, true).sub(&c1_level_one(s, false));
        bad.jet.set_component(1, level1.add(&shift));
        assert!(verify_projection(&fam, &ws).is_ok());
        assert!(matches!(verify_projection(&bad, &ws), Err(VerifyFailure::Idempotency { level: 1, .. })));
    }
}

#[test]
fn c11_goldens() {
    let cfg = CurvatureConfig::unit(11);
    let mut x3 = Vec::new();
    for aleph in [Aleph::Plus, Aleph::Minus] {
        let s = sign_of(aleph);
        let (ws, fam) = family(&cfg, 3, aleph);
        assert!(verify_projection(&fam, &ws).is_ok());

        let lvl1: [[Vec<(Gq, [u8; 3])>; 3]; 3] = [
            [vec![(q(-5 * s, 1), [2, 0, 0]), (qi(-4, 1), [1, 1, 0])], vec![(qi(6, 1), [2, 0, 0]), (q(-3 * s, 1), [1, 1, 0])], vec![]],
            [vec![(qi(-2, 1), [2, 0, 0]), (q(s, 1), [1, 1, 0])], vec![(q(-3 * s, 1), [2, 0, 0])], vec![]],
            [vec![(qi(2, 1), [0, 1, 1])], vec![(qi(-6, 1), [1, 0, 1])], vec![]],
        ];
        let expect1 = Mat::from_fn(3, 3, |a, b| gx_poly(&lvl1[a][b], 2).scale(&q(1, 24)));
        assert_eq!(fam.jet.component(1).at_eta_zero(), expect1);

        let lvl2: [[Vec<(Gq, [u8; 3])>; 3]; 3] = [
            [vec![(qi(s, 1), [0, 0, 1])], vec![(q(6, 1), [0, 0, 1])], vec![]],
            [vec![(q(-2, 1), [0, 0, 1])], vec![(qi(3 * s, 1), [0, 0, 1])], vec![]],
            [vec![(qi(9 * s, 1), [1, 0, 0]), (q(-2, 1), [0, 1, 0])], vec![(q(6, 1), [1, 0, 0]), (qi(3 * s, 1), [0, 1, 0])], vec![]],
        ];
        let expect2 = Mat::from_fn(3, 3, |a, b| gx_poly(&lvl2[a][b], 1).scale(&q(-1, 24)));
        assert_eq!(fam.jet.component(2).at_eta_zero(), expect2);

        let st = &fam.steps[2];
        let one = Gq::one;
        assert_eq!(anchor(&st.r), gq_matrix(qi(1, 8), [[z(), one(), z()], [q(-1, 1), z(), z()], [z(), z(), z()]]));
        assert_eq!(anchor(&st.s), gq_matrix(q(-s, 8), [[one(), z(), z()], [z(), one(), z()], [z(), z(), z()]]));
        assert_eq!(anchor(&st.t), gq_matrix(qi(-s, 4), [[z(), one(), z()], [one(), z(), z()], [z(), z(), z()]]));
        assert_eq!(anchor(&st.x), gq_matrix(q(-s, 4), [[one(), z(), z()], [z(), z(), z()], [z(), z(), z()]]));
        x3.push(st.x.trace().constant_term());
    }
    assert_eq!(&x3[0] - &x3[1], q(-1, 2));

    let report = asymmetry_report(&cfg).unwrap();
    assert_eq!(report.diag_traces, vec![z(), z(), z(), q(-1, 2)]);
    assert_eq!(report.a_prin, q(-1, 2));
    assert_eq!(report.closed_form, rat(-1, 2));
    assert!(report.pass());
}

#[test]
fn c7_has_no_principal_asymmetry() {
    let report = asymmetry_report(&CurvatureConfig::unit(7)).unwrap();
    assert!(report.a_prin.is_zero());
    assert!(report.pass());
}

/// Everything required of one configuration: projections, subprincipal symbols, traces, closed form.
fn check_config(cfg: &CurvatureConfig) -> Result<(), String> {
    let ws = Workspace::new(cfg, REPORT_ACCURACY).map_err(|e| e.to_string())?;
    let mut jets = Vec::new();
    for aleph in Aleph::ALL {
        let fam = run_algorithm(&ws, aleph).map_err(|e| e.to_string())?;
        verify_projection(&fam, &ws).map_err(|e| format!("{cfg} {aleph}: {e}"))?;
        let sub = subprincipal_check(&fam, &ws.mj).map_err(|e| e.to_string())?;
        if !sub.is_zero() {
            return Err(format!("{cfg} {aleph}: subprincipal symbol\n{sub}"));
        }
        jets.push(fam.jet);
    }
    if jets[0].add(&jets[1]).add(&jets[2]) != SymbolJet::identity(REPORT_ACCURACY) {
        return Err(format!("{cfg}: projections do not resolve the identity"));
    }
    let report = asymmetry_report_in(&ws).map_err(|e| e.to_string())?;
    if !report.pass() {
        return Err(format!("{cfg}: {}", report.to_json()));
    }
    if !report.a_prin.is_real() {
        return Err(format!("{cfg}: complex a_prin"));
    }
    let d1 = difference(&report.plus, &report.minus).component(1).at_x_origin();
    if !d1.is_zero() {
        return Err(format!("{cfg}: degree -1 part of p+ - p- at x = 0 is\n{d1}"));
    }
    Ok(())
}

#[test]
fn unit_config_sweep() {
    for (name, cfg) in all_units() {
        if let Err(e) = check_config(&cfg) {
            panic!("{name}: {e}");
        }
    }
}

#[test]
fn random_config_sweep() {
    runner(20, 42)
        .run(&config(), |cfg| {
            let r = check_config(&cfg);
            prop_assert!(r.is_ok(), "{}", r.unwrap_err());
            Ok(())
        })
        .unwrap();
}

#[test]
fn unit_sweep_values() {
    for (name, cfg) in all_units() {
        let a = asymmetry_report(&cfg).unwrap().a_prin;
        let expect = match name.as_str() {
            "c11" => q(-1, 2),
            "c15" => q(1, 2),
            _ => z(),
        };
        assert_eq!(a, expect, "{name}");
    }
}

#[test]
fn a_prin_is_linear() {
    runner(10, 43)
        .run(&(config_dric(), config_dric(), small_rational()), |(a, b, t)| {
            let lhs = asymmetry_report(&a.add_scaled(&b, &t)).unwrap().a_prin;
            let ra = asymmetry_report(&a).unwrap().a_prin;
            let rb = asymmetry_report(&b).unwrap().a_prin;
            prop_assert_eq!(lhs, &ra + &rb.scale(&t));
            Ok(())
        })
        .unwrap();
}

#[test]
fn corrupted_correction_breaks_idempotency() {
    let (ws, mut fam) = family(&CurvatureConfig::unit(11), 3, Aleph::Plus);
    let mut c1 = fam.jet.component(1).clone();
    c1.set(0, 0, c1.get(0, 0).add(&TruncatedPoly::one(c1.order())));
    fam.jet.set_component(1, c1);
    assert!(matches!(verify_projection(&fam, &ws), Err(VerifyFailure::Idempotency { level: 1, .. })));
}

#[test]
fn corrupted_christoffel_is_detected() {
    let (ws, fam) = family(&CurvatureConfig::unit(11), 3, Aleph::Plus);
    let mut mj = ws.mj.clone();
    mj.gamma[0][1][2] = mj.gamma[0][1][2].add(&TruncatedPoly::one(2));
    mj.gamma[0][2][1] = mj.gamma[0][2][1].add(&TruncatedPoly::one(2));
    assert!(subprincipal_check(&fam, &ws.mj).unwrap().is_zero());
    assert!(!subprincipal_check(&fam, &mj).unwrap().is_zero());
}

#[test]
fn closed_form_properties() {
    let xi0 = [rat(0, 1), rat(0, 1), rat(1, 1)];
    assert_eq!(aprin_closed_form(&CurvatureConfig::unit(11), &xi0).unwrap(), rat(-1, 2));
    assert!(aprin_closed_form(&CurvatureConfig::flat(), &[rat(3, 5), rat(4, 5), rat(0, 1)]).unwrap().is_zero());
    let zero = [Rational::zero(), Rational::zero(), Rational::zero()];
    assert!(matches!(aprin_closed_form(&CurvatureConfig::unit(11), &zero), Err(ProjectionError::ZeroCovector)));
    let irr = [rat(1, 1), rat(1, 1), rat(0, 1)];
    assert!(matches!(aprin_closed_form(&CurvatureConfig::unit(11), &irr), Err(ProjectionError::IrrationalNorm)));

    runner(100, 44)
        .run(&(config(), small_rational(), small_rational()), |(cfg, s, d)| {
            let xi = [rat(2, 7), rat(3, 7), rat(6, 7)];
            let base = aprin_closed_form(&cfg, &xi).unwrap();
            // homogeneous of degree -3
            let xi2 = xi.clone().map(|v| v * rat(2, 1));
            prop_assert_eq!(aprin_closed_form(&cfg, &xi2).unwrap(), &base / rat(8, 1));
            // pure-trace Ricci terms are invisible
            let traced = cfg.add_pure_trace(&s, &[d.clone(), -d.clone(), d * rat(2, 1)]);
            prop_assert_eq!(aprin_closed_form(&traced, &xi).unwrap(), base);
            Ok(())
        })
        .unwrap();
}

#[test]
fn report_json_shape() {
    let report = asymmetry_report(&CurvatureConfig::unit(11)).unwrap();
    let j = report.to_json();
    assert_eq!(j["a_prin"], "-1/2");
    assert_eq!(j["closed_form"], "-1/2");
    assert_eq!(j["pass"], true);
    assert_eq!(j["diag_traces"].as_array().unwrap().len(), 4);
    assert_eq!(j["pt_corrections"].as_array().unwrap().len(), 2);
    let cfg: CurvatureConfig = serde_json::from_value(j["config"].clone()).unwrap();
    assert_eq!(cfg, CurvatureConfig::unit(11));
}
