//! Independent route to the asymmetry trace through the symbol of `(-Delta)^{-1/2}`.
//!
//! The Hodge Laplacian symbol is assembled from closed-form tensors (valid when `Ric(0) = 0`),
//! then the symbols `r` of `(-Delta)^{1/2}` and `s` of `(-Delta)^{-1/2}` are obtained degree by
//! degree. The trace is read off from `s_{-3}` and `s_{-4}` at `(0, xi0)`.

use jetpoly::{rat, Gq, Rational, TruncatedPoly, Var};
use num_traits::Zero;
use thiserror::Error;

use crate::config::CurvatureConfig;
use crate::geometry::{
    build_metric_jet, curl_symbol, d_delta_symbols, euclidean_power_jet, levi_civita, norm_power_jet, MetricJet,
    Tensor3, Tensor5,
};
use crate::matrix::Mat;
use crate::symbol::{compose, SymbolError, SymbolJet};

/// Accuracy of every jet in this module.
pub const ALT_ACCURACY: u32 = 3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AltError {
    #[error("closed-form Laplacian symbol needs Ric(0) = 0")]
    NonzeroRicci,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

fn delta(a: usize, b: usize) -> Rational {
    if a == b {
        rat(1, 1)
    } else {
        Rational::zero()
    }
}

/// `a[alpha][beta][gamma][mu][nu]` of the degree-one part `i a xi_gamma x^mu x^nu`.
pub fn a_tensor(cfg: &CurvatureConfig) -> Tensor5<Rational> {
    let (_, dr) = crate::geometry::riemann_from_ricci(cfg);
    let half = rat(1, 2);
    let twelfth = rat(1, 12);
    let sixth = rat(1, 6);
    std::array::from_fn(|al| {
        std::array::from_fn(|be| {
            std::array::from_fn(|ga| {
                std::array::from_fn(|mu| {
                    std::array::from_fn(|nu| {
                        let scalar = &half * cfg.dric(mu, ga, nu) - &twelfth * cfg.dric(ga, mu, nu);
                        let bracket = &dr[al][ga][mu][be][nu] - rat(3, 1) * &dr[mu][ga][al][be][nu]
                            + rat(5, 1) * &dr[nu][ga][mu][be][al];
                        scalar * delta(al, be) - &sixth * bracket
                    })
                })
            })
        })
    })
}

/// `b[alpha][beta][nu]` of the degree-zero part `b x^nu`.
pub fn b_tensor(cfg: &CurvatureConfig) -> Tensor3<Rational> {
    std::array::from_fn(|al| {
        std::array::from_fn(|be| {
            std::array::from_fn(|nu| {
                rat(-1, 6) * cfg.dric(be, al, nu) + rat(1, 2) * cfg.dric(al, be, nu) + rat(1, 2) * cfg.dric(nu, al, be)
            })
        })
    })
}

fn x_monomial(vars: &[usize], c: Gq, order: u32) -> TruncatedPoly {
    let mut e = [0u8; 6];
    for &v in vars {
        e[v] += 1;
    }
    TruncatedPoly::monomial(e, c, order)
}

/// Symbol of `-Delta` on 1-forms from the closed-form tensors.
pub fn hodge_symbol(cfg: &CurvatureConfig) -> Result<SymbolJet, AltError> {
    if !cfg.has_zero_ricci() {
        return Err(AltError::NonzeroRicci);
    }
    let mj = build_metric_jet(cfg);
    let n = ALT_ACCURACY;
    let a = a_tensor(cfg);
    let b = b_tensor(cfg);
    let nsq = mj.norm_sqr(n);
    let q2 = Mat::from_fn(3, 3, |i, j| if i == j { nsq.clone() } else { TruncatedPoly::zero(n) });
    let q1 = Mat::from_fn(3, 3, |al, be| {
        let mut acc = TruncatedPoly::zero(n - 1);
        for ga in 0..3 {
            let xi = MetricJet::xi(ga, n - 1);
            for mu in 0..3 {
                for nu in 0..3 {
                    let c = &a[al][be][ga][mu][nu];
                    if !c.is_zero() {
                        acc = acc.add(&x_monomial(&[mu, nu], Gq::imag(c.clone()), n - 1).mul(&xi));
                    }
                }
            }
        }
        acc
    });
    let q0 = Mat::from_fn(3, 3, |al, be| {
        let mut acc = TruncatedPoly::zero(n - 2);
        for nu in 0..3 {
            let c = &b[al][be][nu];
            if !c.is_zero() {
                acc = acc.add(&x_monomial(&[nu], Gq::real(c.clone()), n - 2));
            }
        }
        acc
    });
    let mut q = SymbolJet::principal_only(2, n, q2);
    q.set_component(1, q1);
    q.set_component(2, q0);
    Ok(q)
}

/// Symbol of `-Delta = curl curl + d delta` from the calculus itself, valid for any configuration.
pub fn composed_hodge_symbol(mj: &MetricJet, n: u32) -> Result<SymbolJet, AltError> {
    let curl = curl_symbol(mj, n);
    let (d, del) = d_delta_symbols(mj, n);
    Ok(compose(&curl, &curl)?.add(&compose(&d, &del)?))
}

/// Laplacian symbol with the jets of `(-Delta)^{1/2}` and `(-Delta)^{-1/2}`.
#[derive(Clone, Debug)]
pub struct HodgeHierarchy {
    /// `||xi||^2 I + q_1 + q_0`.
    pub q: SymbolJet,
    /// `||xi|| I + r_0 + r_{-1} + r_{-2}`.
    pub r: SymbolJet,
    /// `||xi||^{-1} I + s_{-2} + s_{-3} + s_{-4}`.
    pub s: SymbolJet,
}

impl HodgeHierarchy {
    pub fn q1(&self) -> &Mat {
        self.q.component(1)
    }

    pub fn q0(&self) -> &Mat {
        self.q.component(2)
    }

    pub fn r0(&self) -> &Mat {
        self.r.component(1)
    }

    pub fn r_m1(&self) -> &Mat {
        self.r.component(2)
    }

    pub fn r_m2(&self) -> &Mat {
        self.r.component(3)
    }

    pub fn s_m2(&self) -> &Mat {
        self.s.component(1)
    }

    pub fn s_m3(&self) -> &Mat {
        self.s.component(2)
    }

    pub fn s_m4(&self) -> &Mat {
        self.s.component(3)
    }

    /// The three jets in symbol-jet JSON form.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "q": self.q, "r": self.r, "s": self.s })
    }
}

fn scalar_mat(p: &TruncatedPoly) -> Mat {
    Mat::from_fn(3, 3, |a, b| if a == b { p.clone() } else { TruncatedPoly::zero(p.order()) })
}

/// `sum_mu xi_mu d_{x^mu} m`, Euclidean index raising.
fn xi_dx(m: &Mat, order: u32) -> Mat {
    let mut acc = Mat::zeros(3, 3, order);
    for mu in 0..3 {
        acc = acc.add(&m.diff(Var::x(mu)).scale_poly(&MetricJet::xi(mu, order)).truncate(order));
    }
    acc
}

/// `sum d_eta^k e . d_x^k m` over ordered index tuples of length `k`.
fn contract(e: &TruncatedPoly, m: &Mat, k: usize, order: u32) -> Mat {
    let mut acc = Mat::zeros(3, 3, order);
    let total = 3usize.pow(k as u32);
    for t in 0..total {
        let mut de = e.clone();
        let mut dm = m.clone();
        let mut rest = t;
        for _ in 0..k {
            let i = rest % 3;
            rest /= 3;
            de = de.diff(Var::eta(i));
            dm = dm.diff(Var::x(i));
        }
        if !de.is_zero() && !dm.is_zero() {
            acc = acc.add(&dm.scale_poly(&de).truncate(order));
        }
    }
    acc
}

/// Degree-by-degree solution of `r r = q` and `r s = I`, with `q` a Laplacian symbol at accuracy 3.
pub fn sqrt_hierarchy(q: &SymbolJet, mj: &MetricJet) -> Result<HodgeHierarchy, AltError> {
    let n = ALT_ACCURACY;
    if q.accuracy != n {
        return Err(SymbolError::Accuracy(q.accuracy, n).into());
    }
    let pw = |r: i64| norm_power_jet(mj, &rat(r, 1), n).expect("integer power").jet;
    let ew = |r: i64| euclidean_power_jet(&rat(r, 1), n).expect("integer power").jet;
    let norm = scalar_mat(&pw(1));
    let norm_inv = scalar_mat(&pw(-1));
    let (e1, em1, em2) = (ew(1), ew(-1), ew(-2));
    let (q1, q0) = (q.component(1), q.component(2));

    // 1 / (2i) = -i/2, 1 / i = -i, 1 / (12 i) = -i/12, 1 / (6 i) = -i/6
    let r0 = q1
        .scale_poly(&em1)
        .scale(&Gq::ratio(1, 2))
        .add(&xi_dx(&norm, 2).scale_poly(&em2).scale(&Gq::imag(rat(1, 2))))
        .truncate(2);
    let r1 = q0
        .scale_poly(&em1)
        .scale(&Gq::ratio(1, 2))
        .add(&xi_dx(&r0, 1).scale_poly(&em2).scale(&Gq::imag(rat(1, 2))))
        .add(&contract(&e1, &norm, 2, 1).scale_poly(&em1).scale(&Gq::ratio(1, 4)))
        .truncate(1);
    let r2 = xi_dx(&r1, 0)
        .scale_poly(&em2)
        .scale(&Gq::imag(rat(1, 2)))
        .add(&contract(&e1, &r0, 2, 0).scale_poly(&em1).scale(&Gq::ratio(1, 4)))
        .add(&contract(&e1, &norm, 3, 0).scale_poly(&em1).scale(&Gq::imag(rat(-1, 12))))
        .truncate(0);

    let s2 = r0
        .scale_poly(&em2)
        .neg()
        .add(&xi_dx(&norm_inv, 2).scale_poly(&em2).scale(&Gq::i()))
        .truncate(2);
    let s3 = r1
        .scale_poly(&em2)
        .neg()
        .add(&xi_dx(&s2, 1).scale_poly(&em2).scale(&Gq::i()))
        .add(&contract(&e1, &norm_inv, 2, 1).scale_poly(&em1).scale(&Gq::ratio(1, 2)))
        .truncate(1);
    let s4 = r2
        .scale_poly(&em2)
        .neg()
        .add(&xi_dx(&s3, 0).scale_poly(&em2).scale(&Gq::i()))
        .add(&contract(&e1, &s2, 2, 0).scale_poly(&em1).scale(&Gq::ratio(1, 2)))
        .add(&contract(&e1, &norm_inv, 3, 0).scale_poly(&em1).scale(&Gq::imag(rat(-1, 6))))
        .truncate(0);

    let mut r = SymbolJet::principal_only(1, n, norm);
    r.set_component(1, r0);
    r.set_component(2, r1);
    r.set_component(3, r2);
    let mut s = SymbolJet::principal_only(-1, n, norm_inv);
    s.set_component(1, s2);
    s.set_component(2, s3);
    s.set_component(3, s4);
    Ok(HodgeHierarchy { q: q.clone(), r, s })
}

/// `-eps_{b a c} (d_{x^c} [s_{-3}]_a^b + i xi_c [s_{-4}]_a^b)` at `(0, xi0)`.
pub fn aprin_alternative(h: &HodgeHierarchy) -> Gq {
    let (s3, s4) = (h.s_m3(), h.s_m4());
    let mut acc = Gq::zero();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let e = levi_civita(b, a, c);
                if e == 0 {
                    continue;
                }
                let mut v = s3.get(a, b).diff(Var::x(c)).constant_term();
                if c == 2 {
                    v += &s4.get(a, b).constant_term().mul_i_pow(1);
                }
                acc -= &v.scale(&rat(e, 1));
            }
        }
    }
    acc
}

/// Hierarchy built on the closed-form Laplacian symbol.
pub fn hierarchy_for(cfg: &CurvatureConfig) -> Result<HodgeHierarchy, AltError> {
    let q = hodge_symbol(cfg)?;
    sqrt_hierarchy(&q, &build_metric_jet(cfg))
}

/// Asymmetry trace at `(0, xi0)` by the square-root route.
pub fn aprin_alternative_for(cfg: &CurvatureConfig) -> Result<Gq, AltError> {
    Ok(aprin_alternative(&hierarchy_for(cfg)?))
}
