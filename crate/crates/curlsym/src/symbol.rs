//! Graded symbol jets and the calculus operations on them.

use jetpoly::{rat, Gq, Rational, TruncatedPoly, Var};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::MetricJet;
use crate::matrix::Mat;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SymbolError {
    #[error("shape mismatch: {0:?} cannot be followed by {1:?}")]
    Shape((usize, usize), (usize, usize)),
    #[error("accuracy mismatch: {0} vs {1}")]
    Accuracy(u32, u32),
    #[error("operation needs a 3x3 symbol, got {0:?}")]
    NotSquare((usize, usize)),
    #[error("subprincipal symbol needs accuracy at least 2, got {0}")]
    TooShort(u32),
    #[error("degree -1 component of the difference does not vanish at x = 0")]
    SubleadingNonzero,
    #[error("transport correction level must be 2 or 3, got {0}")]
    BadLevel(u32),
}

/// Symbol expanded at `(0, xi0)` as a list of homogeneous components.
///
/// Component `k` has homogeneity `top_degree - k` and truncation order `accuracy - k`.
/// Homogeneity is a tag: after expanding in `eta` the polynomials are not homogeneous.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolJet {
    pub top_degree: i32,
    pub accuracy: u32,
    pub shape: (usize, usize),
    pub components: Vec<Mat>,
}

impl SymbolJet {
    /// All components zero.
    pub fn zero(top_degree: i32, accuracy: u32, shape: (usize, usize)) -> Self {
        let components = (0..=accuracy).map(|k| Mat::zeros(shape.0, shape.1, accuracy - k)).collect();
        SymbolJet { top_degree, accuracy, shape, components }
    }

    /// Leading component `c0`, all others zero.
    pub fn principal_only(top_degree: i32, accuracy: u32, c0: Mat) -> Self {
        let mut j = Self::zero(top_degree, accuracy, c0.shape());
        j.set_component(0, c0);
        j
    }

    /// Identity operator on 1-forms.
    pub fn identity(accuracy: u32) -> Self {
        Self::principal_only(0, accuracy, Mat::identity(3, accuracy))
    }

    /// Replaces component `k`, truncating to its scheduled order.
    pub fn set_component(&mut self, k: usize, m: Mat) {
        assert_eq!(m.shape(), self.shape, "component shape");
        let order = self.accuracy - k as u32;
        assert!(m.order() >= order, "component {k} known only to order {} < {order}", m.order());
        self.components[k] = m.truncate(order);
    }

    pub fn component(&self, k: usize) -> &Mat {
        &self.components[k]
    }

    /// Component of homogeneity `degree`, if retained.
    pub fn degree(&self, degree: i32) -> Option<&Mat> {
        let k = self.top_degree - degree;
        (k >= 0 && k as u32 <= self.accuracy).then(|| &self.components[k as usize])
    }

    pub fn principal(&self) -> &Mat {
        &self.components[0]
    }

    fn zip(&self, o: &Self, f: impl Fn(&Mat, &Mat) -> Mat) -> Self {
        assert_eq!(self.top_degree, o.top_degree, "degree mismatch");
        assert_eq!(self.accuracy, o.accuracy, "accuracy mismatch");
        SymbolJet {
            top_degree: self.top_degree,
            accuracy: self.accuracy,
            shape: self.shape,
            components: self.components.iter().zip(&o.components).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, Mat::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, Mat::sub)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        SymbolJet { components: self.components.iter().map(|m| m.scale(c)).collect(), ..self.clone() }
    }

    /// Lowest component index that is not identically zero.
    pub fn first_nonzero(&self) -> Option<usize> {
        self.components.iter().position(|m| !m.is_zero())
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serialisable")
    }

    pub fn from_json(s: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(s)
    }
}

/// Multi-indices over three slots with total size `k`, with `1 / beta!`.
fn multi_indices(k: u32) -> Vec<([u32; 3], Rational)> {
    let fact = |n: u32| -> i64 { (1..=n as i64).product() };
    let mut out = Vec::new();
    for a in 0..=k {
        for b in 0..=k - a {
            let c = k - a - b;
            out.push(([a, b, c], rat(1, fact(a) * fact(b) * fact(c))));
        }
    }
    out
}

fn diff_multi(m: &Mat, beta: &[u32; 3], var: fn(usize) -> Var) -> Mat {
    let mut out = m.clone();
    for (slot, &count) in beta.iter().enumerate() {
        for _ in 0..count {
            out = out.diff(var(slot));
        }
    }
    out
}

/// Symbol of `B A`: `sum_k 1/(i^k k!) d_xi^k b . d_x^k a`.
///
/// A term built from components `jb`, `ja` with `k` derivatives lands at level `jb + ja + k`,
/// and is known exactly to that level's order.
pub fn compose(b: &SymbolJet, a: &SymbolJet) -> Result<SymbolJet, SymbolError> {
    if b.shape.1 != a.shape.0 {
        return Err(SymbolError::Shape(b.shape, a.shape));
    }
    if b.accuracy != a.accuracy {
        return Err(SymbolError::Accuracy(b.accuracy, a.accuracy));
    }
    let n = b.accuracy as usize;
    let shape = (b.shape.0, a.shape.1);
    let mut out = SymbolJet::zero(b.top_degree + a.top_degree, b.accuracy, shape);
    let mut acc: Vec<Mat> = out.components.clone();
    for k in 0..=n {
        let idx = multi_indices(k as u32);
        for jb in 0..=n - k {
            if b.components[jb].is_zero() {
                continue;
            }
            for ja in 0..=n - k - jb {
                if a.components[ja].is_zero() {
                    continue;
                }
                let level = jb + ja + k;
                for (beta, inv_fact) in &idx {
                    let db = diff_multi(&b.components[jb], beta, Var::eta);
                    if db.is_zero() {
                        continue;
                    }
                    let da = diff_multi(&a.components[ja], beta, Var::x);
                    if da.is_zero() {
                        continue;
                    }
                    // 1 / i^k = (-i)^k
                    let c = Gq::real(inv_fact.clone()).mul_i_pow((4 - (k as u32 % 4)) % 4);
                    let term = db.mul(&da).truncate((n - level) as u32).scale(&c);
                    acc[level] = acc[level].add(&term);
                }
            }
        }
    }
    for (k, m) in acc.into_iter().enumerate() {
        out.set_component(k, m);
    }
    Ok(out)
}

fn require_square(q: &SymbolJet) -> Result<(), SymbolError> {
    if q.shape != (3, 3) {
        return Err(SymbolError::NotSquare(q.shape));
    }
    Ok(())
}

/// Subprincipal symbol of an operator on 1-forms:
///
/// `q_{s-1} + (i/2) d_x d_xi q_s + (i/2)(G^a_{ca} d_xi^c q_s - G^a_{c mu} d_xi^c [q_s]_a^nu - G^nu_{ca} d_xi^c [q_s]_mu^a)`.
pub fn subprincipal(q: &SymbolJet, mj: &MetricJet) -> Result<Mat, SymbolError> {
    require_square(q)?;
    if q.accuracy < 2 {
        return Err(SymbolError::TooShort(q.accuracy));
    }
    subprincipal_parts(q.component(0), q.component(1), mj)
}

fn subprincipal_parts(q0: &Mat, q1: &Mat, mj: &MetricJet) -> Result<Mat, SymbolError> {
    let order = q1.order().min(q0.order() - 2);
    let dxi: [Mat; 3] = std::array::from_fn(|c| q0.diff(Var::eta(c)));
    let mut second = Mat::zeros(3, 3, order);
    for c in 0..3 {
        second = second.add(&dxi[c].diff(Var::x(c)));
    }
    let gamma = &mj.gamma;
    let corr = Mat::from_fn(3, 3, |mu, nu| {
        let mut acc = TruncatedPoly::zero(order);
        for c in 0..3 {
            let trace_g = (0..3).fold(TruncatedPoly::zero(order), |s, a| s.add(&gamma[a][c][a]));
            acc = acc.add(&trace_g.mul(dxi[c].get(mu, nu)));
            for a in 0..3 {
                acc = acc.sub(&gamma[a][c][mu].mul(dxi[c].get(a, nu)));
                acc = acc.sub(&gamma[nu][c][a].mul(dxi[c].get(mu, a)));
            }
        }
        acc
    });
    let half_i = Gq::imag(rat(1, 2));
    Ok(q1.truncate(order).add(&second.add(&corr).scale(&half_i)).truncate(order))
}

/// `d_x^c Q - G_c^T Q + Q G_c^T` with `[G_c]_{a b} = Gamma^a_{c b}`, entry `(alpha, kappa)`.
fn covariant_dx(q: &Mat, c: usize, mj: &MetricJet) -> Mat {
    let dq = q.diff(Var::x(c));
    let order = dq.order();
    Mat::from_fn(3, 3, |al, ka| {
        let mut acc = dq.get(al, ka).clone();
        for a in 0..3 {
            acc = acc.sub(&mj.gamma[a][c][al].mul(q.get(a, ka)).truncate(order));
            acc = acc.add(&mj.gamma[ka][c][a].mul(q.get(al, a)).truncate(order));
        }
        acc
    })
}

/// Generalised Poisson bracket of two principal symbols.
pub fn poisson_bracket(q: &Mat, r: &Mat, mj: &MetricJet) -> Mat {
    let mut acc: Option<Mat> = None;
    for c in 0..3 {
        let t1 = covariant_dx(q, c, mj).mul(&r.diff(Var::eta(c)));
        let t2 = q.diff(Var::eta(c)).mul(&covariant_dx(r, c, mj));
        let t = t1.sub(&t2);
        acc = Some(match acc {
            None => t,
            Some(s) => s.add(&t),
        });
    }
    acc.expect("three terms")
}

/// Formal adjoint at principal and subprincipal level: `g conj(Q)^T g^{-1}` applied to both.
pub fn adjoint_pair(prin: &Mat, sub: &Mat, mj: &MetricJet) -> (Mat, Mat) {
    let sandwich = |m: &Mat| mj.g.truncate(m.order()).mul(&m.conj().transpose()).mul(&mj.g_inv.truncate(m.order()));
    (sandwich(prin), sandwich(sub))
}

pub fn adjoint_prin_sub(q: &SymbolJet, mj: &MetricJet) -> Result<(Mat, Mat), SymbolError> {
    let sub = subprincipal(q, mj)?;
    Ok(adjoint_pair(q.principal(), &sub, mj))
}

/// Componentwise matrix trace, a 1x1 jet on the same schedule.
pub fn trace_diag(q: &SymbolJet) -> Result<SymbolJet, SymbolError> {
    require_square(q)?;
    let mut out = SymbolJet::zero(q.top_degree, q.accuracy, (1, 1));
    for (k, m) in q.components.iter().enumerate() {
        out.set_component(k, Mat::from_fn(1, 1, |_, _| m.trace()));
    }
    Ok(out)
}

/// Parallel-transport correction to the trace at `(0, xi0)`.
///
/// `d` is the jet of `p+ - p-`. Level 2 evaluates `(1/6) Riem^a_{m k n} d_xi^m d_xi^n [d_0]_a^k`,
/// level 3 evaluates `-(i/6) d_m d_n Gamma^a_{s k} d_xi^s d_xi^m d_xi^n [d_0]_a^k`
/// with the `(s, m, n)`-symmetrised second derivative of the Christoffel symbols.
pub fn transport_correction(d: &SymbolJet, mj: &MetricJet, level: u32) -> Result<Gq, SymbolError> {
    require_square(d)?;
    if d.accuracy >= 1 && !d.component(1).at_x_origin().is_zero() {
        return Err(SymbolError::SubleadingNonzero);
    }
    let q0 = d.component(0);
    let mut acc = Gq::zero();
    match level {
        2 => {
            for a in 0..3 {
                for k in 0..3 {
                    for m in 0..3 {
                        let dm = q0.get(a, k).diff(Var::eta(m));
                        for n in 0..3 {
                            let r = &mj.riem0[a][m][k][n];
                            if r.is_zero() {
                                continue;
                            }
                            let v = dm.diff(Var::eta(n)).constant_term();
                            acc += &v.scale(r);
                        }
                    }
                }
            }
            Ok(acc.scale(&rat(1, 6)))
        }
        3 => {
            for a in 0..3 {
                for k in 0..3 {
                    for s in 0..3 {
                        let ds = q0.get(a, k).diff(Var::eta(s));
                        for m in 0..3 {
                            let dsm = ds.diff(Var::eta(m));
                            for n in 0..3 {
                                let c = mj.sym_d2_gamma(a, k, s, m, n);
                                if c.is_zero() {
                                    continue;
                                }
                                let v = dsm.diff(Var::eta(n)).constant_term();
                                acc += &v.scale(&c);
                            }
                        }
                    }
                }
            }
            Ok(acc.scale(&rat(1, 6)).mul_i_pow(3))
        }
        l => Err(SymbolError::BadLevel(l)),
    }
}

/// Principal-level commutator `[a, b]` of two jets via composition.
pub fn commutator(a: &SymbolJet, b: &SymbolJet) -> Result<SymbolJet, SymbolError> {
    Ok(compose(a, b)?.sub(&compose(b, a)?))
}

/// Subprincipal of a composition by the product rule with the generalised bracket.
pub fn subprincipal_of_composition(
    q_prin: &Mat,
    q_sub: &Mat,
    r_prin: &Mat,
    r_sub: &Mat,
    mj: &MetricJet,
) -> Mat {
    let br = poisson_bracket(q_prin, r_prin, mj).scale(&Gq::imag(rat(1, 2)));
    q_prin.mul(r_sub).add(&q_sub.mul(r_prin)).add(&br)
}

/// Zero-check helper used by reports: trace of a 3x3 constant matrix.
pub fn anchor_trace(m: &Mat) -> Gq {
    let mut t = Gq::zero();
    for a in 0..3 {
        t += &m.get(a, a).constant_term();
    }
    t
}
