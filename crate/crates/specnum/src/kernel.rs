//! Bessel-kernel identities and the cancellation of the logarithmic kernel singularity.

use std::f64::consts::PI;

use curlsym::geometry::levi_civita;
use curlsym::CurvatureConfig;
use jetpoly::{rat, Rational};
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use crate::summation::neumaier_sum;
pub use crate::tolerances::Tolerances;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Upper limit of the Basset quadrature; the neglected tail is below `1 / (2 T^2)` per side.
pub const BASSET_CUTOFF: f64 = 2.5e4;

#[derive(Debug, Error, PartialEq)]
pub enum KernelError {
    #[error("K1 needs a positive argument, got {0}")]
    NonPositive(f64),
}

/// One numeric check in the JSON report format.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub name: String,
    pub inputs: serde_json::Value,
    pub value: f64,
    pub reference: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl CheckReport {
    fn new(name: &str, inputs: serde_json::Value, value: f64, reference: f64, residual: f64, tolerance: f64) -> Self {
        CheckReport {
            name: name.to_string(),
            inputs,
            value,
            reference,
            residual,
            tolerance,
            pass: residual <= tolerance,
        }
    }
}

/// Modified Bessel function `K1(t)`.
pub fn bessel_k1(t: f64) -> Result<f64, KernelError> {
    if !(t > 0.0) {
        return Err(KernelError::NonPositive(t));
    }
    Ok(if t <= 2.0 { k1_series(t) } else { k1_continued_fraction(t) })
}

/// Ascending series
/// `K1(t) = 1/t + ln(t/2) I1(t) - (t/4) sum (psi(k+1) + psi(k+2)) (t^2/4)^k / (k! (k+1)!)`.
pub fn k1_series(t: f64) -> f64 {
    let q = t * t / 4.0;
    let mut term = 1.0; // (t^2/4)^k / (k! (k+1)!)
    let mut psi1 = -EULER_GAMMA; // psi(k+1)
    let mut psi2 = 1.0 - EULER_GAMMA; // psi(k+2)
    let (mut i1, mut rest) = (0.0, 0.0);
    for k in 0..200 {
        i1 += term;
        rest += (psi1 + psi2) * term;
        if term < 1e-18 * i1 {
            break;
        }
        let k = k as f64;
        term *= q / ((k + 1.0) * (k + 2.0));
        psi1 += 1.0 / (k + 1.0);
        psi2 += 1.0 / (k + 2.0);
    }
    1.0 / t + (t / 2.0).ln() * (t / 2.0) * i1 - t / 4.0 * rest
}

/// Steed's continued fraction for `K0` and `K1`, accurate for `t >~ 1`.
pub fn k1_continued_fraction(t: f64) -> f64 {
    // order mu = 0, so a1 = 1/4 and K1 = K0 (t + 1/2 - h) / t
    let a1 = 0.25;
    let mut b = 2.0 * (1.0 + t);
    let mut d = 1.0 / b;
    let mut delh = d;
    let mut h = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..100_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (PI / (2.0 * t)).sqrt() * (-t).exp() / s;
    k0 * (t + 0.5 - h) / t
}

/// `1/t + (t/4)(2 ln t + 2 gamma - 1 - ln 4)` against `K1(t)` inside the envelope `t^3 |ln t|`.
pub fn small_argument_check(t: f64) -> CheckReport {
    let k = bessel_k1(t).unwrap_or(f64::NAN);
    let expansion = 1.0 / t + (t / 4.0) * (2.0 * t.ln() + 2.0 * EULER_GAMMA - 1.0 - 4f64.ln());
    CheckReport::new(
        "k1_small_argument",
        json!({ "t": t }),
        k,
        expansion,
        (k - expansion).abs(),
        t.powi(3) * t.ln().abs(),
    )
}

/// Branches of `K1` compared at one argument, relative.
pub fn crossover_check(t: f64, tol: f64) -> CheckReport {
    let (s, c) = (k1_series(t), k1_continued_fraction(t));
    CheckReport::new("k1_crossover", json!({ "t": t }), s, c, ((s - c) / c).abs(), tol)
}

#[derive(Clone, Debug, Serialize)]
pub struct BassetCheck {
    pub y: f64,
    pub quadrature: f64,
    pub reference: f64,
    pub residual: f64,
}

/// `int cos(y t) (1 + t^2)^{-3/2} dt` over the real line against `2 y K1(y)`.
///
/// The half-line integral is split into panels no longer than half a period and each panel is
/// integrated by the double exponential rule.
pub fn basset_check(y: f64) -> BassetCheck {
    let y = y.abs();
    let panel = if y > 0.0 { (PI / y).min(1.0) } else { 1.0 };
    let panels = (BASSET_CUTOFF / panel).ceil() as usize;
    let f = |t: f64| (y * t).cos() * (1.0 + t * t).powf(-1.5);
    let half = neumaier_sum((0..panels).map(|k| {
        let lo = k as f64 * panel;
        let hi = (lo + panel).min(BASSET_CUTOFF);
        quadrature::integrate(f, lo, hi, 1e-15).integral
    }));
    let quadrature = 2.0 * half;
    let reference = if y > 0.0 { 2.0 * y * bessel_k1(y).expect("positive") } else { 2.0 };
    BassetCheck { y, quadrature, reference, residual: (quadrature - reference).abs() }
}

/// Coefficient of `t^2 ln t` in `g(t) = t K1(t) / (6 pi^2)` from a two-point fit at `t` and `t/2`.
pub fn log_coefficient_check(t: f64) -> CheckReport {
    let g0 = 1.0 / (6.0 * PI * PI);
    let h = |u: f64| (u * bessel_k1(u).unwrap_or(f64::NAN) * g0 - g0) / (u * u);
    let estimate = (h(t) - h(t / 2.0)) / 2f64.ln();
    let reference = 1.0 / (12.0 * PI * PI);
    CheckReport::new(
        "log_coefficient",
        json!({ "t": t }),
        estimate,
        reference,
        ((estimate - reference) / reference).abs(),
        Tolerances::default().log_coefficient,
    )
}

/// `c_{gamma rho} = (1 / (12 pi^2)) E^{alpha beta}_gamma nabla_alpha Ric_{beta rho}(0)`; the
/// rational matrix `c` excludes the factor `1 / (12 pi^2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularCoefficient {
    pub c: [[Rational; 3]; 3],
}

impl SingularCoefficient {
    /// The factor carried symbolically.
    pub fn scale() -> f64 {
        1.0 / (12.0 * PI * PI)
    }

    pub fn trace(&self) -> Rational {
        (0..3).map(|g| self.c[g][g].clone()).sum()
    }

    pub fn to_f64(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|g| std::array::from_fn(|r| self.c[g][r].to_f64().unwrap_or(f64::NAN) * Self::scale()))
    }
}

pub fn singular_coefficient(cfg: &CurvatureConfig) -> SingularCoefficient {
    SingularCoefficient {
        c: std::array::from_fn(|g| {
            std::array::from_fn(|r| {
                let mut acc = Rational::zero();
                for a in 0..3 {
                    for b in 0..3 {
                        let e = levi_civita(a, b, g);
                        if e != 0 {
                            acc += rat(e, 1) * cfg.dric(a, b, r);
                        }
                    }
                }
                acc
            })
        }),
    }
}

/// Unit-sphere rule with weights summing to one.
pub type SphereRule = Vec<([f64; 3], f64)>;

/// Fourteen-point octahedral rule, exact for polynomials of degree five.
pub fn lebedev14() -> SphereRule {
    let mut rule = Vec::with_capacity(14);
    for k in 0..3 {
        for s in [1.0, -1.0] {
            let mut p = [0.0; 3];
            p[k] = s;
            rule.push((p, 1.0 / 15.0));
        }
    }
    let v = 1.0 / 3f64.sqrt();
    for sx in [v, -v] {
        for sy in [v, -v] {
            for sz in [v, -v] {
                rule.push(([sx, sy, sz], 3.0 / 40.0));
            }
        }
    }
    rule
}

/// `int (x-y)^gamma (x-y)^rho / r^2 dS` over the sphere of radius `r`.
pub fn second_moment(r: f64, rule: &[([f64; 3], f64)]) -> [[f64; 3]; 3] {
    let area = 4.0 * PI * r * r;
    std::array::from_fn(|g| std::array::from_fn(|p| area * neumaier_sum(rule.iter().map(|(n, w)| w * n[g] * n[p]))))
}

/// Mean of `c_{gamma rho} (x-y)^gamma (x-y)^rho / r^2` over the sphere of radius `r`.
pub fn sphere_average_check(sc: &SingularCoefficient, r: f64, rule: &[([f64; 3], f64)]) -> CheckReport {
    let c = sc.to_f64();
    let avg = neumaier_sum(rule.iter().map(|(n, w)| {
        let x = n.map(|v| r * v);
        let mut q = 0.0;
        for g in 0..3 {
            for p in 0..3 {
                q += c[g][p] * x[g] * x[p];
            }
        }
        w * q / (r * r)
    }));
    CheckReport::new(
        "sphere_average",
        json!({ "r": r, "points": rule.len() }),
        avg,
        0.0,
        avg.abs(),
        Tolerances::default().sphere_average,
    )
}

/// Every kernel check at its default inputs.
pub fn run_kernel_suite(tol: &Tolerances) -> Vec<CheckReport> {
    let mut out = Vec::new();
    for k in 0..10 {
        let y = 0.1 * 50f64.powf(k as f64 / 9.0);
        let b = basset_check(y);
        out.push(CheckReport::new("basset", json!({ "y": y }), b.quadrature, b.reference, b.residual, tol.basset));
    }
    out.push(crossover_check(2.0, tol.k1_crossover));
    out.push(small_argument_check(0.01));
    let mut lc = log_coefficient_check(1e-3);
    lc.tolerance = tol.log_coefficient;
    lc.pass = lc.residual <= lc.tolerance;
    out.push(lc);
    let rule = lebedev14();
    for j in 1..=24 {
        let sc = singular_coefficient(&CurvatureConfig::unit(j));
        let tr = sc.trace();
        out.push(CheckReport::new(
            "trace_free",
            json!({ "config": format!("c{j}") }),
            tr.to_f64().unwrap_or(f64::NAN),
            0.0,
            if tr.is_zero() { 0.0 } else { f64::INFINITY },
            0.0,
        ));
        let mut s = sphere_average_check(&sc, 1.0, &rule);
        s.inputs["config"] = json!(format!("c{j}"));
        s.tolerance = tol.sphere_average;
        s.pass = s.residual <= s.tolerance;
        out.push(s);
    }
    out
}
