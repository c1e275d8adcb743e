//! Iterative construction of the spectral projection symbols of curl and the asymmetry trace.

use std::fmt;

use jetpoly::{format_rational, rat, Gq, Rational};
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::config::CurvatureConfig;
use crate::geometry::{build_metric_jet, curl_symbol, levi_civita, norm_power_jet, MetricJet};
use crate::matrix::Mat;
use crate::symbol::{self, compose, subprincipal, trace_diag, transport_correction, SymbolError, SymbolJet};

/// Accuracy used for the asymmetry report.
pub const REPORT_ACCURACY: u32 = 3;

#[derive(Debug, Error)]
pub enum ProjectionError {
    #[error("accuracy {0} out of range 1..=3")]
    Accuracy(u32),
    #[error("covector must be non-zero")]
    ZeroCovector,
    #[error("covector norm is irrational")]
    IrrationalNorm,
    #[error(transparent)]
    Symbol(#[from] SymbolError),
}

/// Spectral label: kernel, positive or negative part of curl.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Aleph {
    Zero,
    Plus,
    Minus,
}

impl Aleph {
    pub const ALL: [Aleph; 3] = [Aleph::Zero, Aleph::Plus, Aleph::Minus];

    fn index(self) -> usize {
        self as usize
    }

    /// Eigenvalue of the principal symbol of curl in units of `||xi||`.
    fn eigen_sign(self) -> i64 {
        match self {
            Aleph::Zero => 0,
            Aleph::Plus => 1,
            Aleph::Minus => -1,
        }
    }
}

impl fmt::Display for Aleph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Aleph::Zero => "0",
            Aleph::Plus => "+",
            Aleph::Minus => "-",
        })
    }
}

/// Everything shared by the runs for one configuration and accuracy.
pub struct Workspace {
    pub mj: MetricJet,
    pub accuracy: u32,
    pub curl: SymbolJet,
    /// Principal symbols `P^(0)`, `P^(+)`, `P^(-)`.
    pub initial: [Mat; 3],
    inv_norm: jetpoly::TruncatedPoly,
}

impl Workspace {
    pub fn new(cfg: &CurvatureConfig, accuracy: u32) -> Result<Self, ProjectionError> {
        if !(1..=3).contains(&accuracy) {
            return Err(ProjectionError::Accuracy(accuracy));
        }
        let mj = build_metric_jet(cfg);
        Ok(Self::from_metric(mj, accuracy))
    }

    pub fn from_metric(mj: MetricJet, accuracy: u32) -> Self {
        let curl = curl_symbol(&mj, accuracy);
        let initial = initial_symbols(&mj, accuracy);
        let inv_norm = norm_power_jet(&mj, &rat(-1, 1), accuracy).expect("integer power").jet;
        Workspace { mj, accuracy, curl, initial, inv_norm }
    }
}

/// Principal symbols of the three projections at working order `n`:
/// `P0 = ||xi||^-2 xi_a xi^b`, `P+- = (1/2)(I - P0 +- i ||xi||^-1 E_a^{cb} xi_c)`.
pub fn initial_symbols(mj: &MetricJet, n: u32) -> [Mat; 3] {
    let inv1 = norm_power_jet(mj, &rat(-1, 1), n).expect("integer power").jet;
    let inv2 = norm_power_jet(mj, &rat(-2, 1), n).expect("integer power").jet;
    let p0 = Mat::from_fn(3, 3, |a, b| MetricJet::xi(a, n).mul(&mj.xi_upper(b, n)).mul(&inv2));
    let rot = Mat::from_fn(3, 3, |a, b| {
        let mut acc = jetpoly::TruncatedPoly::zero(n);
        for c in 0..3 {
            acc = acc.add(&mj.e_mixed[a][c][b].truncate(n).mul(&MetricJet::xi(c, n)));
        }
        acc.mul(&inv1).scale(&Gq::i())
    });
    let half = Gq::ratio(1, 2);
    let base = Mat::identity(3, n).sub(&p0);
    let plus = base.add(&rot).scale(&half);
    let minus = base.sub(&rot).scale(&half);
    [p0, plus, minus]
}

/// Intermediates of one iteration of the algorithm.
#[derive(Clone, Debug, Serialize)]
pub struct Step {
    pub k: u32,
    pub r: Mat,
    pub s: Mat,
    pub t: Mat,
    pub x: Mat,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProjectionFamily {
    pub aleph: Aleph,
    pub jet: SymbolJet,
    pub steps: Vec<Step>,
}

/// Runs the algorithm for one projection to the workspace accuracy.
///
/// The starting jet carries only the principal symbol and every correction `X_k`
/// only its principal part, so `P_k` has exactly `k + 1` non-zero components.
pub fn run_algorithm(ws: &Workspace, aleph: Aleph) -> Result<ProjectionFamily, ProjectionError> {
    let n = ws.accuracy;
    let pa = &ws.initial[aleph.index()];
    let curl0 = ws.curl.principal();
    let mut p = SymbolJet::principal_only(0, n, pa.clone());
    let mut steps = Vec::new();
    for k in 1..=n as usize {
        let sq = compose(&p, &p)?;
        let r = sq.component(k).sub(p.component(k)).neg();
        let s = r.neg().add(&pa.mul(&r)).add(&r.mul(pa));
        let comm = compose(&p, &ws.curl)?.sub(&compose(&ws.curl, &p)?);
        let t = comm.component(k).add(&s.commutator(curl0));
        let mut x = s.clone();
        for other in Aleph::ALL {
            if other == aleph {
                continue;
            }
            let pb = &ws.initial[other.index()];
            let num = pa.mul(&t).mul(pb).sub(&pb.mul(&t).mul(pa));
            // 1 / (h_aleph - h_other) with h = sign * ||xi||
            let diff = aleph.eigen_sign() - other.eigen_sign();
            let inv = ws.inv_norm.scale(&Gq::ratio(1, diff));
            x = x.add(&num.scale_poly(&inv));
        }
        let order = n - k as u32;
        let x = x.truncate(order);
        p.set_component(k, p.component(k).add(&x));
        steps.push(Step { k: k as u32, r: r.truncate(order), s: s.truncate(order), t: t.truncate(order), x });
    }
    Ok(ProjectionFamily { aleph, jet: p, steps })
}

/// First failure of the projection conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    Idempotency { level: usize, residual: Mat },
    Commutation { level: usize, residual: Mat },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::Idempotency { level, residual } => {
                write!(f, "P^2 - P non-zero at degree -{level}:\n{residual}")
            }
            VerifyFailure::Commutation { level, residual } => {
                write!(f, "[P, curl] non-zero at degree {}:\n{residual}", 1 - *level as i64)
            }
        }
    }
}

/// Checks `P^2 = P` at every retained degree and `[P, curl] = 0` at degrees `1 .. 1 - N`.
pub fn verify_projection(fam: &ProjectionFamily, ws: &Workspace) -> Result<(), VerifyFailure> {
    let p = &fam.jet;
    let sq = compose(p, p).expect("compatible").sub(p);
    if let Some(level) = sq.first_nonzero() {
        return Err(VerifyFailure::Idempotency { level, residual: sq.component(level).clone() });
    }
    let comm = symbol::commutator(p, &ws.curl).expect("compatible");
    if let Some(level) = comm.first_nonzero() {
        return Err(VerifyFailure::Commutation { level, residual: comm.component(level).clone() });
    }
    Ok(())
}

/// Subprincipal symbol of the projection restricted to `x = 0`, a polynomial matrix in `eta`.
pub fn subprincipal_check(fam: &ProjectionFamily, mj: &MetricJet) -> Result<Mat, ProjectionError> {
    Ok(subprincipal(&fam.jet, mj)?.at_x_origin())
}

/// `-(1 / (2 |xi|^5)) eps^{abc} nabla_a Ric_b^r xi_c xi_r` at the origin.
pub fn aprin_closed_form(cfg: &CurvatureConfig, xi: &[Rational; 3]) -> Result<Rational, ProjectionError> {
    let n2: Rational = xi.iter().map(|v| v * v).sum();
    if n2.is_zero() {
        return Err(ProjectionError::ZeroCovector);
    }
    let norm = rational_sqrt(&n2).ok_or(ProjectionError::IrrationalNorm)?;
    let mut acc = Rational::zero();
    for a in 0..3 {
        for b in 0..3 {
            for c in 0..3 {
                let e = levi_civita(a, b, c);
                if e == 0 {
                    continue;
                }
                for r in 0..3 {
                    acc += Rational::from_integer(e.into()) * cfg.dric(a, b, r) * &xi[c] * &xi[r];
                }
            }
        }
    }
    let n5 = &norm * &norm * &norm * &norm * &norm;
    Ok(-acc / (rat(2, 1) * n5))
}

fn rational_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let (p, q) = (r.numer().sqrt(), r.denom().sqrt());
    (&p * &p == *r.numer() && &q * &q == *r.denom()).then(|| Rational::new(p, q))
}

/// Everything the asymmetry computation produces for one configuration.
#[derive(Clone, Debug)]
pub struct AsymmetryReport {
    pub config: CurvatureConfig,
    /// `[(p+ - p-)_{-k}]_a^a (0, xi0)` for `k = 0..=N`.
    pub diag_traces: Vec<Gq>,
    /// Transport corrections at degrees -2 and -3.
    pub pt_corrections: [Gq; 2],
    pub a_prin: Gq,
    pub closed_form: Rational,
    pub plus: ProjectionFamily,
    pub minus: ProjectionFamily,
}

impl AsymmetryReport {
    /// Lower traces and transport corrections vanish and the degree -3 trace matches the closed form.
    pub fn pass(&self) -> bool {
        let n = self.diag_traces.len();
        self.diag_traces[..n - 1].iter().all(Gq::is_zero)
            && self.pt_corrections.iter().all(Gq::is_zero)
            && self.a_prin == Gq::real(self.closed_form.clone())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "config": self.config,
            "diag_traces": self.diag_traces.iter().map(Gq::to_string).collect::<Vec<_>>(),
            "pt_corrections": self.pt_corrections.iter().map(Gq::to_string).collect::<Vec<_>>(),
            "a_prin": self.a_prin.to_string(),
            "closed_form": format_rational(&self.closed_form),
            "pass": self.pass(),
        })
    }
}

/// Jet of `p+ - p-`.
pub fn difference(plus: &ProjectionFamily, minus: &ProjectionFamily) -> SymbolJet {
    plus.jet.sub(&minus.jet)
}

/// Runs both sign projections to accuracy 3 and assembles the trace data.
pub fn asymmetry_report(cfg: &CurvatureConfig) -> Result<AsymmetryReport, ProjectionError> {
    let ws = Workspace::new(cfg, REPORT_ACCURACY)?;
    asymmetry_report_in(&ws)
}

pub fn asymmetry_report_in(ws: &Workspace) -> Result<AsymmetryReport, ProjectionError> {
    let plus = run_algorithm(ws, Aleph::Plus)?;
    let minus = run_algorithm(ws, Aleph::Minus)?;
    let d = difference(&plus, &minus);
    let tr = trace_diag(&d)?;
    let diag_traces: Vec<Gq> = tr.components.iter().map(|m| m.get(0, 0).constant_term()).collect();
    let pt_corrections = [transport_correction(&d, &ws.mj, 2)?, transport_correction(&d, &ws.mj, 3)?];
    let a_prin = diag_traces[ws.accuracy as usize].clone();
    let closed_form = aprin_closed_form(&ws.mj.config, &[rat(0, 1), rat(0, 1), rat(1, 1)])?;
    Ok(AsymmetryReport { config: ws.mj.config.clone(), diag_traces, pt_corrections, a_prin, closed_form, plus, minus })
}
