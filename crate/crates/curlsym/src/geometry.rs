//! Jets of the metric and derived objects in normal coordinates centred at the origin.
//!
//! All polynomials live in the six jet variables; metric quantities only use `x`,
//! covector quantities are expanded at `xi = xi0 + eta` with `xi0 = (0, 0, 1)`.

use jetpoly::{rat, Gq, PolyError, Rational, TruncatedPoly, Var};
use num_traits::{One, Zero};
use thiserror::Error;

use crate::config::CurvatureConfig;
use crate::matrix::Mat;
use crate::symbol::SymbolJet;

/// Order to which the metric is known.
pub const METRIC_ORDER: u32 = 3;

pub type Tensor3<T> = [[[T; 3]; 3]; 3];
pub type Tensor4<T> = [[[[T; 3]; 3]; 3]; 3];
pub type Tensor5<T> = [[[[[T; 3]; 3]; 3]; 3]; 3];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GeometryError {
    #[error("norm power {0} must have denominator 1 or 2")]
    BadPower(String),
    #[error("working order {0} exceeds the metric order")]
    OrderTooHigh(u32),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Totally antisymmetric symbol with `eps(0,1,2) = 1`.
pub fn levi_civita(a: usize, b: usize, c: usize) -> i64 {
    if a == b || b == c || a == c {
        return 0;
    }
    // parity of the permutation (a, b, c) of (0, 1, 2)
    let inversions = (a > b) as i64 + (a > c) as i64 + (b > c) as i64;
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

fn delta(a: usize, b: usize) -> Rational {
    if a == b {
        Rational::one()
    } else {
        Rational::zero()
    }
}

/// Riemann tensor in dimension three from a symmetric Ricci-type matrix `r`.
///
/// `R_{abcd} = r_ac d_bd - r_ad d_bc + r_bd d_ac - r_bc d_ad + (tr r / 2)(d_ad d_bc - d_ac d_bd)`
/// with all indices flat (the metric is the identity at the origin).
fn riemann_of(r: impl Fn(usize, usize) -> Rational) -> Tensor4<Rational> {
    let sc = r(0, 0) + r(1, 1) + r(2, 2);
    let half = rat(1, 2);
    std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                std::array::from_fn(|d| {
                    r(a, c) * delta(b, d) - r(a, d) * delta(b, c) + r(b, d) * delta(a, c) - r(b, c) * delta(a, d)
                        + &half * &sc * (delta(a, d) * delta(b, c) - delta(a, c) * delta(b, d))
                })
            })
        })
    })
}

/// `Riem(0)` and `nabla Riem(0)` (derivative index first) from the configuration.
pub fn riemann_from_ricci(cfg: &CurvatureConfig) -> (Tensor4<Rational>, Tensor5<Rational>) {
    let riem = riemann_of(|a, b| cfg.ric(a, b).clone());
    let driem = std::array::from_fn(|s| riemann_of(|a, b| cfg.dric(s, a, b).clone()));
    (riem, driem)
}

/// Jets of every metric-derived quantity the calculus needs.
#[derive(Clone, Debug)]
pub struct MetricJet {
    pub config: CurvatureConfig,
    /// `g_{ab}(x)` to order 3.
    pub g: Mat,
    /// `g^{ab}(x)` to order 3.
    pub g_inv: Mat,
    /// Riemannian density `sqrt(det g)`.
    pub rho: TruncatedPoly,
    pub rho_inv: TruncatedPoly,
    /// `gamma[a][b][c] = Gamma^a_{bc}` to order 2.
    pub gamma: Tensor3<TruncatedPoly>,
    pub riem0: Tensor4<Rational>,
    pub driem0: Tensor5<Rational>,
    /// `E_{abc} = rho eps_{abc}` to order 3.
    pub e_lower: Tensor3<TruncatedPoly>,
    /// `E_a^{bc} = g^{bm} g^{cn} E_{amn}` to order 3.
    pub e_mixed: Tensor3<TruncatedPoly>,
}

fn poly_x(coeff: &Rational, vars: &[usize], order: u32) -> TruncatedPoly {
    let mut e = [0u8; 6];
    for &v in vars {
        e[v] += 1;
    }
    TruncatedPoly::monomial(e, Gq::real(coeff.clone()), order)
}

/// Metric, inverse, density, Christoffel symbols and orientation tensor from a configuration.
pub fn build_metric_jet(cfg: &CurvatureConfig) -> MetricJet {
    let n = METRIC_ORDER;
    let (riem0, driem0) = riemann_from_ricci(cfg);
    let third = rat(-1, 3);
    let sixth = rat(-1, 6);

    // g = delta - (1/3) Riem_{a m b n} x^m x^n - (1/6) nabla_s Riem_{a m b n} x^s x^m x^n
    let g = Mat::from_fn(3, 3, |a, b| {
        let mut p = if a == b { TruncatedPoly::one(n) } else { TruncatedPoly::zero(n) };
        for m in 0..3 {
            for k in 0..3 {
                let c2 = &third * &riem0[a][m][b][k];
                if !c2.is_zero() {
                    p = p.add(&poly_x(&c2, &[m, k], n));
                }
                for s in 0..3 {
                    let c3 = &sixth * &driem0[s][a][m][b][k];
                    if !c3.is_zero() {
                        p = p.add(&poly_x(&c3, &[s, m, k], n));
                    }
                }
            }
        }
        p
    });

    // Neumann series for (I + H)^{-1}
    let id = Mat::identity(3, n);
    let h = g.sub(&id);
    let mut g_inv = id.clone();
    let mut term = id.clone();
    loop {
        term = term.mul(&h).neg();
        if term.is_zero() {
            break;
        }
        g_inv = g_inv.add(&term);
    }

    let det = det3(&g);
    let u = det.sub(&TruncatedPoly::one(n));
    let rho = TruncatedPoly::binomial_power_jet(&u, &rat(1, 2)).expect("det g(0) = 1");
    let rho_inv = TruncatedPoly::binomial_power_jet(&u, &rat(-1, 2)).expect("det g(0) = 1");

    let dg: [Mat; 3] = std::array::from_fn(|c| g.diff(Var::x(c)));
    let half = Gq::ratio(1, 2);
    let gamma: Tensor3<TruncatedPoly> = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                let mut acc = TruncatedPoly::zero(n - 1);
                for d in 0..3 {
                    let bracket = dg[b].get(d, c).add(dg[c].get(d, b)).sub(dg[d].get(b, c));
                    if !bracket.is_zero() {
                        acc = acc.add(&g_inv.get(a, d).mul(&bracket));
                    }
                }
                acc.scale(&half)
            })
        })
    });

    let e_lower: Tensor3<TruncatedPoly> = std::array::from_fn(|a| {
        std::array::from_fn(|b| std::array::from_fn(|c| rho.scale(&Gq::int(levi_civita(a, b, c)))))
    });
    let e_mixed: Tensor3<TruncatedPoly> = std::array::from_fn(|a| {
        std::array::from_fn(|b| {
            std::array::from_fn(|c| {
                let mut acc = TruncatedPoly::zero(n);
                for m in 0..3 {
                    for k in 0..3 {
                        if levi_civita(a, m, k) == 0 {
                            continue;
                        }
                        acc = acc.add(&g_inv.get(b, m).mul(g_inv.get(c, k)).mul(&e_lower[a][m][k]));
                    }
                }
                acc
            })
        })
    });

    MetricJet { config: cfg.clone(), g, g_inv, rho, rho_inv, gamma, riem0, driem0, e_lower, e_mixed }
}

fn det3(m: &Mat) -> TruncatedPoly {
    let mut acc = TruncatedPoly::zero(m.order());
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let s = levi_civita(a, b, c);
                if s != 0 {
                    let t = m.get(0, a).mul(m.get(1, b)).mul(m.get(2, c));
                    acc = acc.add(&t.scale(&Gq::int(s)));
                }
            }
        }
    }
    acc
}

impl MetricJet {
    /// `xi_a = (xi0 + eta)_a` as a polynomial.
    pub fn xi(a: usize, order: u32) -> TruncatedPoly {
        let e = TruncatedPoly::var(Var::eta(a), order);
        if a == 2 {
            e.add(&TruncatedPoly::one(order))
        } else {
            e
        }
    }

    /// `g^{ab}(x) xi_a xi_b`.
    pub fn norm_sqr(&self, order: u32) -> TruncatedPoly {
        let mut acc = TruncatedPoly::zero(order);
        for a in 0..3 {
            for b in 0..3 {
                acc = acc.add(&self.g_inv.get(a, b).truncate(order).mul(&Self::xi(a, order)).mul(&Self::xi(b, order)));
            }
        }
        acc
    }

    /// `xi^a = g^{ab} xi_b`.
    pub fn xi_upper(&self, a: usize, order: u32) -> TruncatedPoly {
        let mut acc = TruncatedPoly::zero(order);
        for b in 0..3 {
            acc = acc.add(&self.g_inv.get(a, b).truncate(order).mul(&Self::xi(b, order)));
        }
        acc
    }

    /// `d^2 Gamma^a_{bc} / dx^m dx^n` at the origin.
    pub fn d2_gamma(&self, a: usize, b: usize, c: usize, m: usize, n: usize) -> Rational {
        let p = self.gamma[a][b][c].diff(Var::x(m)).diff(Var::x(n));
        p.constant_term().re
    }

    /// `d Gamma^a_{bc} / dx^m` at the origin.
    pub fn d_gamma(&self, a: usize, b: usize, c: usize, m: usize) -> Rational {
        self.gamma[a][b][c].diff(Var::x(m)).constant_term().re
    }

    /// Symmetrisation over `(s, m, n)` of `d_m d_n Gamma^a_{s k}(0)`.
    pub fn sym_d2_gamma(&self, a: usize, k: usize, s: usize, m: usize, n: usize) -> Rational {
        let idx = [s, m, n];
        let mut acc = Rational::zero();
        for p in PERMS {
            acc += self.d2_gamma(a, idx[p[0]], k, idx[p[1]], idx[p[2]]);
        }
        acc / Rational::from_integer(6.into())
    }

    /// Riemann tensor `R^k_{l m n}` at the origin recomputed from the Christoffel jet:
    /// `d_m Gamma^k_{n l} - d_n Gamma^k_{m l}` (products of `Gamma` vanish there).
    pub fn riemann_from_gamma(&self) -> Tensor4<Rational> {
        std::array::from_fn(|k| {
            std::array::from_fn(|l| {
                std::array::from_fn(|m| {
                    std::array::from_fn(|n| self.d_gamma(k, n, l, m) - self.d_gamma(k, m, l, n))
                })
            })
        })
    }

    /// Ricci tensor recomputed by contracting `riem0`: `Ric_{mn} = R^a_{m a n}`.
    pub fn ricci_from_riemann(&self) -> [[Rational; 3]; 3] {
        std::array::from_fn(|m| std::array::from_fn(|n| (0..3).map(|a| self.riem0[a][m][a][n].clone()).sum()))
    }
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Which power of which norm a jet expands.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormKind {
    /// `||xi|| = sqrt(g^{ab}(x) xi_a xi_b)`.
    Riemannian,
    /// `|xi| = sqrt(xi_1^2 + xi_2^2 + xi_3^2)`.
    Euclidean,
}

/// `||xi||^r` (or `|xi|^r`) expanded at `(0, xi0)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormPowerJet {
    pub kind: NormKind,
    pub power: Rational,
    pub jet: TruncatedPoly,
}

fn check_power(r: &Rational) -> Result<(), GeometryError> {
    let d = r.denom();
    if *d == 1.into() || *d == 2.into() {
        Ok(())
    } else {
        Err(GeometryError::BadPower(jetpoly::format_rational(r)))
    }
}

/// `||xi||^r` at working order `order`.
pub fn norm_power_jet(mj: &MetricJet, r: &Rational, order: u32) -> Result<NormPowerJet, GeometryError> {
    check_power(r)?;
    if order > METRIC_ORDER {
        return Err(GeometryError::OrderTooHigh(order));
    }
    let u = mj.norm_sqr(order).sub(&TruncatedPoly::one(order));
    let jet = TruncatedPoly::binomial_power_jet(&u, &(r / Rational::from_integer(2.into())))?;
    Ok(NormPowerJet { kind: NormKind::Riemannian, power: r.clone(), jet })
}

/// `|xi|^r`, Euclidean, at working order `order`.
pub fn euclidean_power_jet(r: &Rational, order: u32) -> Result<NormPowerJet, GeometryError> {
    check_power(r)?;
    let mut sq = TruncatedPoly::zero(order);
    for a in 0..3 {
        let x = MetricJet::xi(a, order);
        sq = sq.add(&x.mul(&x));
    }
    let u = sq.sub(&TruncatedPoly::one(order));
    let jet = TruncatedPoly::binomial_power_jet(&u, &(r / Rational::from_integer(2.into())))?;
    Ok(NormPowerJet { kind: NormKind::Euclidean, power: r.clone(), jet })
}

/// Full symbol of curl, `-i E_a^{bc}(x) xi_c`, as a degree-one jet of accuracy `n`.
pub fn curl_symbol(mj: &MetricJet, n: u32) -> SymbolJet {
    let c0 = Mat::from_fn(3, 3, |a, b| {
        let mut acc = TruncatedPoly::zero(n);
        for c in 0..3 {
            acc = acc.add(&mj.e_mixed[a][b][c].truncate(n).mul(&MetricJet::xi(c, n)));
        }
        acc.scale(&-Gq::i())
    });
    SymbolJet::principal_only(1, n, c0)
}

/// Full symbols of `d` on functions (3x1) and `delta` on 1-forms (1x3).
///
/// `delta u = -g^{ab}(d_b u_a - Gamma^c_{ba} u_c)`, so its symbol is
/// `-i g^{cb} xi_b` at degree one plus `g^{ab} Gamma^c_{ab}` at degree zero.
pub fn d_delta_symbols(mj: &MetricJet, n: u32) -> (SymbolJet, SymbolJet) {
    let d0 = Mat::from_fn(3, 1, |a, _| MetricJet::xi(a, n).scale(&Gq::i()));
    let d = SymbolJet::principal_only(1, n, d0);

    let del0 = Mat::from_fn(1, 3, |_, c| mj.xi_upper(c, n).scale(&-Gq::i()));
    let del1 = Mat::from_fn(1, 3, |_, c| {
        let mut acc = TruncatedPoly::zero(n.saturating_sub(1));
        for a in 0..3 {
            for b in 0..3 {
                acc = acc.add(&mj.g_inv.get(a, b).mul(&mj.gamma[c][a][b]));
            }
        }
        acc.truncate(n.saturating_sub(1))
    });
    let mut del = SymbolJet::principal_only(1, n, del0);
    if n >= 1 {
        del.set_component(1, del1);
    }
    (d, del)
}

/// Endpoints of a parallel-transport map along the straight line `t -> t y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Endpoints {
    /// From the origin to `tau * y`.
    OriginTo(Rational),
    /// From `y` to `tau * y`; `tau = 0` transports back to the origin.
    PointTo(Rational),
}

/// Cubic jets of the vector and covector transport maps, polynomials in `y` (stored in the `x` slots).
#[derive(Clone, Debug)]
pub struct TransportJet {
    /// `[z_vector]_{a b} = Z_a^b`.
    pub z_vector: Mat,
    /// `[z_covector]_{a b} = Z^a_b`.
    pub z_covector: Mat,
    pub endpoints: Endpoints,
}

/// `Riem^b_{m a n}(0) y^m y^n` and `d_n d_r Gamma^b_{m a}(0) y^m y^n y^r` as matrices indexed `[a][b]`.
fn transport_parts(mj: &MetricJet) -> (Mat, Mat) {
    let n = METRIC_ORDER;
    let quad = Mat::from_fn(3, 3, |a, b| {
        let mut acc = TruncatedPoly::zero(n);
        for m in 0..3 {
            for k in 0..3 {
                let c = &mj.riem0[b][m][a][k];
                if !c.is_zero() {
                    acc = acc.add(&poly_x(c, &[m, k], n));
                }
            }
        }
        acc
    });
    let cubic = Mat::from_fn(3, 3, |a, b| {
        let mut acc = TruncatedPoly::zero(n);
        for m in 0..3 {
            for k in 0..3 {
                for r in 0..3 {
                    let c = mj.d2_gamma(b, m, a, k, r);
                    if !c.is_zero() {
                        acc = acc.add(&poly_x(&c, &[m, k, r], n));
                    }
                }
            }
        }
        acc
    });
    (quad, cubic)
}

/// Parallel transport maps to cubic order.
pub fn transport_jet(mj: &MetricJet, endpoints: Endpoints) -> TransportJet {
    let (quad, cubic) = transport_parts(mj);
    let one = Rational::one();
    let sixth = rat(1, 6);
    // Z_a^b = delta + cq * quad - cc * cubic; the covector map flips both signs
    let (cq, cc) = match &endpoints {
        Endpoints::OriginTo(t) => (&sixth * t * t, &sixth * t * t * t),
        Endpoints::PointTo(t) => (&sixth * (t * t - &one), &sixth * (t * t * t - &one)),
    };
    let id = Mat::identity(3, METRIC_ORDER);
    let delta_v = quad.scale(&Gq::real(cq)).sub(&cubic.scale(&Gq::real(cc)));
    let z_vector = id.add(&delta_v);
    // covector map: index pattern Z^a_b with the correction transposed and negated
    let z_covector = id.sub(&delta_v.transpose());
    TransportJet { z_vector, z_covector, endpoints }
}
