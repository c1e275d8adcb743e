use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::One;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::number::{format_rational, parse_rational, Gq, Rational};

pub const NVARS: usize = 6;

/// Exponent vector over `(x1, x2, x3, e1, e2, e3)`.
pub type Exp = [u8; NVARS];

/// One of the six jet variables: spatial `x^a` or covector offset `eta_a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X1,
    X2,
    X3,
    E1,
    E2,
    E3,
}

impl Var {
    pub const ALL: [Var; NVARS] = [Var::X1, Var::X2, Var::X3, Var::E1, Var::E2, Var::E3];

    /// `x^(a+1)` for `a` in `0..3`.
    pub fn x(a: usize) -> Var {
        [Var::X1, Var::X2, Var::X3][a]
    }

    /// `eta_(a+1)` for `a` in `0..3`.
    pub fn eta(a: usize) -> Var {
        [Var::E1, Var::E2, Var::E3][a]
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn is_spatial(self) -> bool {
        self.index() < 3
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("power series needs a vanishing constant term")]
    NonzeroConstant,
    #[error("term of degree {degree} exceeds truncation order {order}")]
    DegreeAboveOrder { degree: u32, order: u32 },
    #[error("exponent {0:?} listed twice")]
    DuplicateExponent(Exp),
    #[error("cannot differentiate a polynomial known only to order 0")]
    OrderExhausted,
    #[error(transparent)]
    Parse(#[from] crate::number::ParseError),
}

fn degree(e: &Exp) -> u32 {
    e.iter().map(|&k| k as u32).sum()
}

/// Polynomial with Gaussian-rational coefficients, known up to joint degree `order`.
///
/// Zero coefficients are never stored, so equal values have equal representations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TruncatedPoly {
    order: u32,
    terms: BTreeMap<Exp, Gq>,
}

impl TruncatedPoly {
    pub fn zero(order: u32) -> Self {
        TruncatedPoly { order, terms: BTreeMap::new() }
    }

    pub fn constant(c: Gq, order: u32) -> Self {
        Self::monomial([0; NVARS], c, order)
    }

    pub fn one(order: u32) -> Self {
        Self::constant(Gq::one(), order)
    }

    pub fn var(v: Var, order: u32) -> Self {
        let mut e = [0; NVARS];
        e[v.index()] = 1;
        Self::monomial(e, Gq::one(), order)
    }

    /// `c * x^e`, dropped if its degree exceeds `order`.
    pub fn monomial(e: Exp, c: Gq, order: u32) -> Self {
        let mut p = Self::zero(order);
        if !c.is_zero() && degree(&e) <= order {
            p.terms.insert(e, c);
        }
        p
    }

    /// Builds from arbitrary terms: sums duplicates, drops zeros and terms above `order`.
    pub fn from_terms<I: IntoIterator<Item = (Exp, Gq)>>(terms: I, order: u32) -> Self {
        let mut p = Self::zero(order);
        for (e, c) in terms {
            if degree(&e) <= order {
                p.add_term(e, &c);
            }
        }
        p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exp, &Gq)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &Exp) -> Gq {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// Value at the origin of all six variables.
    pub fn constant_term(&self) -> Gq {
        self.coeff(&[0; NVARS])
    }

    /// Highest degree actually present, `None` for zero.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(degree).max()
    }

    /// Lowest degree actually present, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(degree).min()
    }

    fn add_term(&mut self, e: Exp, c: &Gq) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    /// Drops everything above `order`; never raises the order.
    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        TruncatedPoly {
            order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| degree(e) <= order)
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Relabels the truncation order without touching terms.
    ///
    /// Only valid when the caller knows the value exactly to `order`,
    /// e.g. for a genuinely polynomial quantity.
    pub fn with_order(&self, order: u32) -> Self {
        let mut p = self.truncate(order);
        p.order = order;
        p
    }

    pub fn scale(&self, c: &Gq) -> Self {
        if c.is_zero() {
            return Self::zero(self.order);
        }
        TruncatedPoly {
            order: self.order,
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&Gq::real(r.clone()))
    }

    pub fn conj(&self) -> Self {
        TruncatedPoly {
            order: self.order,
            terms: self.terms.iter().map(|(e, v)| (*e, v.conj())).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut p = self.truncate(order);
        for (e, c) in &o.terms {
            if degree(e) <= order {
                p.add_term(*e, c);
            }
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        TruncatedPoly {
            order: self.order,
            terms: self.terms.iter().map(|(e, v)| (*e, -v)).collect(),
        }
    }

    /// Product truncated at `min(self.order, o.order)`.
    pub fn mul(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut out = Self::zero(order);
        if self.is_zero() || o.is_zero() {
            return out;
        }
        let rhs: Vec<(Exp, u32, &Gq)> = o.terms.iter().map(|(e, c)| (*e, degree(e), c)).collect();
        for (ea, ca) in &self.terms {
            let da = degree(ea);
            if da > order {
                continue;
            }
            for (eb, db, cb) in &rhs {
                if da + db > order {
                    continue;
                }
                let mut e = *ea;
                for k in 0..NVARS {
                    e[k] += eb[k];
                }
                out.add_term(e, &(ca * cb));
            }
        }
        out
    }

    /// Formal partial derivative; the result is known one order less.
    pub fn diff(&self, v: Var) -> Self {
        self.try_diff(v).expect("differentiation beyond known order")
    }

    pub fn try_diff(&self, v: Var) -> Result<Self, PolyError> {
        if self.order == 0 {
            return Err(PolyError::OrderExhausted);
        }
        let k = v.index();
        let mut out = Self::zero(self.order - 1);
        for (e, c) in &self.terms {
            if e[k] == 0 {
                continue;
            }
            let mut f = *e;
            f[k] -= 1;
            if degree(&f) <= out.order {
                out.add_term(f, &c.scale(&Rational::from_integer(e[k].into())));
            }
        }
        Ok(out)
    }

    /// Sets the given variables to zero; order unchanged.
    pub fn restrict_zero(&self, vars: &[Var]) -> Self {
        TruncatedPoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| vars.iter().all(|v| e[v.index()] == 0))
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Restriction to `x = 0`, a polynomial in `eta` alone.
    pub fn at_x_origin(&self) -> Self {
        self.restrict_zero(&[Var::X1, Var::X2, Var::X3])
    }

    /// Restriction to `eta = 0`, a polynomial in `x` alone.
    pub fn at_eta_zero(&self) -> Self {
        self.restrict_zero(&[Var::E1, Var::E2, Var::E3])
    }

    /// Integer power with truncation.
    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.order);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// `(1 + u)^r = sum_k C(r, k) u^k` truncated at `u.order()`.
    ///
    /// `u` must have a vanishing constant term, so `u^k` starts at degree `k`
    /// and the sum is finite.
    pub fn binomial_power_jet(u: &Self, r: &Rational) -> Result<Self, PolyError> {
        if !u.constant_term().is_zero() {
            return Err(PolyError::NonzeroConstant);
        }
        let order = u.order;
        let mut out = Self::one(order);
        let mut power = Self::one(order);
        let mut coeff = Rational::one();
        for k in 0..order {
            power = power.mul(u);
            if power.is_zero() {
                break;
            }
            coeff = coeff * (r - Rational::from_integer(k.into())) / Rational::from_integer((k + 1).into());
            out = out.add(&power.scale_rational(&coeff));
        }
        Ok(out)
    }

    /// Numeric evaluation at a point of `C^6` given as `(re, im)` pairs per variable.
    pub fn eval_f64(&self, point: &[f64; NVARS]) -> (f64, f64) {
        let mut re = 0.0;
        let mut im = 0.0;
        for (e, c) in &self.terms {
            let m: f64 = (0..NVARS).map(|k| point[k].powi(e[k] as i32)).product();
            let (a, b) = c.to_f64_pair();
            re += a * m;
            im += b * m;
        }
        (re, im)
    }
}

impl Add for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn add(self, o: &TruncatedPoly) -> TruncatedPoly {
        TruncatedPoly::add(self, o)
    }
}

impl Sub for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn sub(self, o: &TruncatedPoly) -> TruncatedPoly {
        TruncatedPoly::sub(self, o)
    }
}

impl Mul for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn mul(self, o: &TruncatedPoly) -> TruncatedPoly {
        TruncatedPoly::mul(self, o)
    }
}

impl Neg for &TruncatedPoly {
    type Output = TruncatedPoly;
    fn neg(self) -> TruncatedPoly {
        TruncatedPoly::neg(self)
    }
}

const NAMES: [&str; NVARS] = ["x1", "x2", "x3", "e1", "e2", "e3"];

impl fmt::Display for TruncatedPoly {
    /// Human-readable form such as `(-1/12+0/1i)*x3 + ... + O(3)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            write!(f, "0")?;
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({c})")?;
            for k in 0..NVARS {
                match e[k] {
                    0 => {}
                    1 => write!(f, "*{}", NAMES[k])?,
                    p => write!(f, "*{}^{}", NAMES[k], p)?,
                }
            }
        }
        write!(f, " + O({})", self.order + 1)
    }
}

#[derive(Serialize, Deserialize)]
struct WireTerm {
    exp: Exp,
    re: String,
    im: String,
}

#[derive(Serialize, Deserialize)]
struct WirePoly {
    order: u32,
    terms: Vec<WireTerm>,
}

impl TryFrom<WirePoly> for TruncatedPoly {
    type Error = PolyError;

    fn try_from(w: WirePoly) -> Result<Self, PolyError> {
        let mut p = TruncatedPoly::zero(w.order);
        for t in w.terms {
            let d = degree(&t.exp);
            if d > w.order {
                return Err(PolyError::DegreeAboveOrder { degree: d, order: w.order });
            }
            if p.terms.contains_key(&t.exp) {
                return Err(PolyError::DuplicateExponent(t.exp));
            }
            let c = Gq::new(parse_rational(&t.re)?, parse_rational(&t.im)?);
            if !c.is_zero() {
                p.terms.insert(t.exp, c);
            }
        }
        Ok(p)
    }
}

impl Serialize for TruncatedPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let w = WirePoly {
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| WireTerm { exp: *e, re: format_rational(&c.re), im: format_rational(&c.im) })
                .collect(),
        };
        w.serialize(s)
    }
}

impl<'de> Deserialize<'de> for TruncatedPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WirePoly::deserialize(d)?;
        TruncatedPoly::try_from(w).map_err(serde::de::Error::custom)
    }
}

impl TruncatedPoly {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}
