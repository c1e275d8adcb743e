//! Spectra of the Laplacian and of curl on Berger spheres, eta functions and Weyl ratios.
//!
//! Tables are enumerated lazily by `(series, n, l)` records carrying multiplicities, so an
//! `n_max = 3000` table costs no memory and a pass over it is `O(n_max^2)`.

use std::fmt;
use std::io::Write;

use jetpoly::{rat, Rational};
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::summation::{neumaier_sum, Neumaier};

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("squashing parameter must be positive and finite, got {0}")]
    BadParameter(f64),
    #[error("rational parameter must be positive, got {0}")]
    NonPositive(Rational),
    #[error("curl tables need n_max >= 2, got {0}")]
    NmaxTooSmall(u64),
    #[error("lambda = {lambda} exceeds the completeness bound {bound} of the table")]
    BeyondBound { lambda: f64, bound: f64 },
    #[error("series diverges at s = {s}; need s > {min}")]
    Divergent { s: f64, min: f64 },
    #[error("Euler-Maclaurin remainder {0:e} above 1e-12")]
    ZetaAccuracy(f64),
    #[error("cannot write CSV: {0}")]
    Csv(#[from] csv::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BergerParams {
    a: f64,
}

impl BergerParams {
    pub fn new(a: f64) -> Result<Self, SpectralError> {
        if a.is_finite() && a > 0.0 {
            Ok(BergerParams { a })
        } else {
            Err(SpectralError::BadParameter(a))
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    /// `2 pi^2 a`.
    pub fn volume(&self) -> f64 {
        2.0 * std::f64::consts::PI.powi(2) * self.a
    }

    /// Laplacian eigenvalue `n(n+2) + (a^-2 - 1)(n - 2l)^2`.
    pub fn mu(&self, n: u64, l: u64) -> f64 {
        let k = n as f64 - 2.0 * l as f64;
        (n * (n + 2)) as f64 + (self.a.powi(-2) - 1.0) * k * k
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Series {
    I,
    II,
    III,
    IV,
    #[serde(rename = "LAPLACE")]
    Laplace,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Series::I => "I",
            Series::II => "II",
            Series::III => "III",
            Series::IV => "IV",
            Series::Laplace => "LAPLACE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SpectrumEntry {
    pub series: Series,
    pub n: u64,
    pub l: u64,
    pub value: f64,
    pub multiplicity: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Laplace,
    Curl,
}

/// Spectrum up to `n_max`, enumerated on demand.
#[derive(Clone, Copy, Debug)]
pub struct SpectrumTable {
    kind: Kind,
    params: BergerParams,
    n_max: u64,
}

/// Multiplicity shared by the Laplacian (n >= 1) and series III/IV.
fn level_multiplicity(n: u64, l: u64) -> u64 {
    if n % 2 == 0 && 2 * l == n {
        n + 1
    } else {
        2 * n + 2
    }
}

pub fn laplacian_spectrum(p: BergerParams, n_max: u64) -> SpectrumTable {
    SpectrumTable { kind: Kind::Laplace, params: p, n_max }
}

pub fn curl_spectrum(p: BergerParams, n_max: u64) -> Result<SpectrumTable, SpectralError> {
    if n_max < 2 {
        return Err(SpectralError::NmaxTooSmall(n_max));
    }
    Ok(SpectrumTable { kind: Kind::Curl, params: p, n_max })
}

impl SpectrumTable {
    pub fn params(&self) -> BergerParams {
        self.params
    }

    pub fn n_max(&self) -> u64 {
        self.n_max
    }

    /// Entries ordered by series, then `n`, then `l`.
    pub fn entries(&self) -> Box<dyn Iterator<Item = SpectrumEntry>> {
        let p = self.params;
        let a = p.a;
        let n_max = self.n_max;
        match self.kind {
            Kind::Laplace => Box::new((0..=n_max).flat_map(move |n| {
                (0..=n / 2).map(move |l| SpectrumEntry {
                    series: Series::Laplace,
                    n,
                    l,
                    value: p.mu(n, l),
                    multiplicity: if n == 0 { 1 } else { level_multiplicity(n, l) },
                })
            })),
            Kind::Curl => {
                let one = (2..=n_max).map(move |n| SpectrumEntry {
                    series: Series::I,
                    n,
                    l: 0,
                    value: n as f64 / a,
                    multiplicity: 2 * n - 2,
                });
                let two = (2..=n_max).map(move |n| SpectrumEntry {
                    series: Series::II,
                    n,
                    l: 0,
                    value: (n as f64 + 2.0 * (a * a - 1.0)) / a,
                    multiplicity: if n == 2 { 1 } else { 2 * n - 2 },
                });
                let root = move |series: Series, sign: f64| {
                    (2..=n_max).flat_map(move |n| {
                        (1..=n / 2).map(move |l| SpectrumEntry {
                            series,
                            n,
                            l,
                            value: a + sign * (a * a + p.mu(n, l)).sqrt(),
                            multiplicity: level_multiplicity(n, l),
                        })
                    })
                };
                Box::new(one.chain(two).chain(root(Series::III, 1.0)).chain(root(Series::IV, -1.0)))
            }
        }
    }

    /// Every eigenvalue missing from the table has modulus at least this value.
    ///
    /// Each series is increasing in `n` once `l` is chosen to minimise it, so the first
    /// level beyond the table bounds everything after it.
    pub fn completeness_bound(&self) -> f64 {
        let p = self.params;
        let a = p.a;
        let n = self.n_max + 1;
        let min_mu = |lo: u64| (lo..=n / 2).map(|l| p.mu(n, l)).fold(f64::INFINITY, f64::min);
        match self.kind {
            Kind::Laplace => min_mu(0),
            Kind::Curl => {
                let one = n as f64 / a;
                let two = (n as f64 + 2.0 * (a * a - 1.0)) / a;
                let four = (a * a + min_mu(1)).sqrt() - a;
                one.min(two).min(four)
            }
        }
    }

    /// CSV with header `series,n,l,value,multiplicity`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<(), SpectralError> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["series", "n", "l", "value", "multiplicity"])?;
        for e in self.entries() {
            out.write_record([
                e.series.to_string(),
                e.n.to_string(),
                e.l.to_string(),
                e.value.to_string(),
                e.multiplicity.to_string(),
            ])?;
        }
        out.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

/// Number of eigenvalues with `0 < +-lambda_k < lambda`, counted with multiplicity.
pub fn counting_function(t: &SpectrumTable, lambda: f64, sign: Sign) -> Result<u64, SpectralError> {
    let bound = t.completeness_bound();
    if lambda > bound {
        return Err(SpectralError::BeyondBound { lambda, bound });
    }
    let s = if sign == Sign::Plus { 1.0 } else { -1.0 };
    Ok(t.entries().filter(|e| s * e.value > 0.0 && s * e.value < lambda).map(|e| e.multiplicity).sum())
}

#[derive(Clone, Debug, Serialize)]
pub struct WeylReport {
    pub a: f64,
    pub lambda: f64,
    pub n_max: u64,
    pub count_plus: u64,
    pub count_minus: u64,
    /// `N(lambda) 6 pi^2 / (Vol lambda^3)`.
    pub ratio_plus: f64,
    pub ratio_minus: f64,
    /// Larger of `|ratio - 1|` over both signs.
    pub deviation: f64,
    /// Expected size `3 / lambda` of the deviation.
    pub bound: f64,
}

/// Smallest curl table that is complete below `lambda`.
pub fn table_covering(p: BergerParams, lambda: f64) -> SpectrumTable {
    let mut n = (lambda * p.a.max(1.0 / p.a)).ceil().max(2.0) as u64;
    loop {
        let t = SpectrumTable { kind: Kind::Curl, params: p, n_max: n };
        if t.completeness_bound() >= lambda {
            return t;
        }
        n += n / 4 + 1;
    }
}

pub fn weyl_check(p: BergerParams, lambda: f64) -> Result<WeylReport, SpectralError> {
    let t = table_covering(p, lambda);
    let count_plus = counting_function(&t, lambda, Sign::Plus)?;
    let count_minus = counting_function(&t, lambda, Sign::Minus)?;
    let scale = 6.0 * std::f64::consts::PI.powi(2) / (p.volume() * lambda.powi(3));
    let ratio_plus = count_plus as f64 * scale;
    let ratio_minus = count_minus as f64 * scale;
    Ok(WeylReport {
        a: p.a,
        lambda,
        n_max: t.n_max,
        count_plus,
        count_minus,
        ratio_plus,
        ratio_minus,
        deviation: (ratio_plus - 1.0).abs().max((ratio_minus - 1.0).abs()),
        bound: 3.0 / lambda,
    })
}

/// `sum sgn(lambda) |lambda|^-s` over the table; zero eigenvalues are skipped.
pub fn eta_partial(t: &SpectrumTable, s: f64) -> Result<f64, SpectralError> {
    if s <= 3.0 {
        return Err(SpectralError::Divergent { s, min: 3.0 });
    }
    Ok(neumaier_sum(
        t.entries()
            .filter(|e| e.value != 0.0)
            .map(|e| e.value.signum() * e.multiplicity as f64 * e.value.abs().powf(-s)),
    ))
}

const BERNOULLI_2K: [f64; 9] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
];

/// Riemann zeta for real `s > 1`: direct sum to `N - 1` plus Euler-Maclaurin correction.
///
/// The first omitted correction term is returned as the remainder estimate.
pub fn zeta_with_remainder(s: f64) -> Result<(f64, f64), SpectralError> {
    if s <= 1.0 {
        return Err(SpectralError::Divergent { s, min: 1.0 });
    }
    const N: u32 = 16;
    let nf = N as f64;
    let mut acc: Neumaier = (1..N).map(|n| (n as f64).powf(-s)).collect();
    acc.add(nf.powf(1.0 - s) / (s - 1.0));
    acc.add(0.5 * nf.powf(-s));
    // rising factorial s (s+1) ... (s+2k-2) / (2k)!
    let mut rising = s;
    let mut fact = 2.0;
    let mut remainder = 0.0;
    for (k, b) in BERNOULLI_2K.iter().enumerate() {
        let k = k as i32 + 1;
        let term = b / fact * rising * nf.powf(-s - 2.0 * k as f64 + 1.0);
        if k as usize == BERNOULLI_2K.len() {
            remainder = term.abs();
            break;
        }
        acc.add(term);
        rising *= (s + 2.0 * k as f64 - 1.0) * (s + 2.0 * k as f64);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
    }
    Ok((acc.value(), remainder))
}

pub fn zeta(s: f64) -> Result<f64, SpectralError> {
    let (v, r) = zeta_with_remainder(s)?;
    if r > 1e-12 {
        return Err(SpectralError::ZetaAccuracy(r));
    }
    Ok(v)
}

/// `(entry, bracket)` with bracket `(sqrt(a^2+mu)+a)^-s - (sqrt(a^2+mu)-a)^-s`, for `mu > 0`.
pub fn theta_terms(p: BergerParams, s: f64, n_max: u64) -> impl Iterator<Item = (SpectrumEntry, f64)> {
    let a = p.a;
    laplacian_spectrum(p, n_max).entries().filter(|e| e.value > 0.0).map(move |e| {
        let r = (a * a + e.value).sqrt();
        (e, (r + a).powf(-s) - (r - a).powf(-s))
    })
}

/// `theta(s) + (2a)^-s + 4 a^s zeta(s - 1)` with `theta` over the Laplacian table.
pub fn eta_decomposition_rhs(p: BergerParams, s: f64, n_max: u64) -> Result<f64, SpectralError> {
    if s <= 2.0 {
        return Err(SpectralError::Divergent { s, min: 2.0 });
    }
    let a = p.a;
    let mut acc: Neumaier = theta_terms(p, s, n_max).map(|(e, b)| e.multiplicity as f64 * b).collect();
    acc.add((2.0 * a).powf(-s));
    acc.add(4.0 * a.powf(s) * zeta(s - 1.0)?);
    Ok(acc.value())
}

/// Largest `mu^2 |(sqrt(a^2+mu) +- a)^-s - expansion|` over the Laplacian table, where the
/// expansion is `mu^{-s/2}(1 -+ s a mu^-1/2 + s^2 a^2 mu^-1 / 2 +- s(1-s^2) a^3 mu^-3/2 / 6)`.
pub fn hitchin_remainder(p: BergerParams, s: f64, n_max: u64) -> f64 {
    let a = p.a;
    laplacian_spectrum(p, n_max)
        .entries()
        .filter(|e| e.value > 0.0)
        .flat_map(|e| {
            let mu = e.value;
            let r = (a * a + mu).sqrt();
            [1.0, -1.0].map(|pm| {
                let exact = (r + pm * a).powf(-s);
                let expansion = mu.powf(-s / 2.0)
                    * (1.0 - pm * s * a * mu.powf(-0.5) + 0.5 * s * s * a * a / mu
                        + pm * s * (1.0 - s * s) / 6.0 * a.powi(3) * mu.powf(-1.5));
                mu * mu * (exact - expansion).abs()
            })
        })
        .fold(0.0, f64::max)
}

/// Exact eta-type invariants at `s = 0` for rational `a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaClosedForms {
    pub a: Rational,
    /// `(2/3)(a^2 - 1)^2`.
    pub eta0: Rational,
    /// `(2/3) a^2 (a^2 - 2)`.
    pub theta0: Rational,
    /// `-(1/6)(a^2 - 1)^2`.
    pub dirac_eta0: Rational,
}

pub fn zeta_minus_one() -> Rational {
    rat(-1, 12)
}

pub fn eta_closed_forms(a: &Rational) -> Result<EtaClosedForms, SpectralError> {
    if !a.is_positive() {
        return Err(SpectralError::NonPositive(a.clone()));
    }
    let a2 = a * a;
    let d = (&a2 - rat(1, 1)) * (&a2 - rat(1, 1));
    Ok(EtaClosedForms {
        a: a.clone(),
        eta0: rat(2, 3) * &d,
        theta0: rat(2, 3) * &a2 * (&a2 - rat(2, 1)),
        dirac_eta0: rat(-1, 6) * d,
    })
}

impl EtaClosedForms {
    /// `eta0 = theta0 + 1 + 4 zeta(-1)` and `eta0 = -4 dirac_eta0`.
    pub fn identities_hold(&self) -> bool {
        self.eta0 == &self.theta0 + rat(1, 1) + rat(4, 1) * zeta_minus_one()
            && (&self.eta0 + rat(4, 1) * &self.dirac_eta0).is_zero()
    }
}
