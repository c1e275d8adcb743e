//! Curvature input: Ricci tensor and its covariant derivative at the origin.

use std::fmt;
use std::str::FromStr;

use jetpoly::{format_rational, parse_rational, rat, Rational};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("unknown built-in configuration `{0}` (expected c1..c24 or flat)")]
    UnknownName(String),
    #[error("{0} is not symmetric in its last two indices")]
    NotSymmetric(&'static str),
    #[error("bad rational: {0}")]
    Parse(#[from] jetpoly::ParseError),
    #[error("bad configuration JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("cannot read configuration: {0}")]
    Io(#[from] std::io::Error),
}

/// Position of the symmetric entry `(a, b)` among the six independent constants.
pub fn sym_index(a: usize, b: usize) -> usize {
    let (a, b) = if a <= b { (a, b) } else { (b, a) };
    match (a, b) {
        (0, 0) => 0,
        (0, 1) => 1,
        (0, 2) => 2,
        (1, 1) => 3,
        (1, 2) => 4,
        _ => 5,
    }
}

/// `Ric(0)` and `nabla Ric(0)` as 24 independent constants.
///
/// Constants `0..6` fill `Ric(0)` row by row over the upper triangle,
/// constants `6 + 6s .. 12 + 6s` fill `nabla_{s+1} Ric(0)` the same way.
/// Symmetry in the last two indices is built into the storage.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CurvatureConfig {
    c: [Rational; 24],
}

impl Default for CurvatureConfig {
    fn default() -> Self {
        Self::flat()
    }
}

impl CurvatureConfig {
    pub fn flat() -> Self {
        CurvatureConfig { c: std::array::from_fn(|_| Rational::zero()) }
    }

    pub fn from_constants(c: [Rational; 24]) -> Self {
        CurvatureConfig { c }
    }

    /// Unit configuration `c_j = 1`, `j` in `1..=24`.
    pub fn unit(j: usize) -> Self {
        assert!((1..=24).contains(&j), "unit configs are numbered 1..24");
        let mut cfg = Self::flat();
        cfg.c[j - 1] = rat(1, 1);
        cfg
    }

    /// `c1`..`c24` or `flat`.
    pub fn builtin(name: &str) -> Result<Self, ConfigError> {
        if name == "flat" {
            return Ok(Self::flat());
        }
        name.strip_prefix('c')
            .and_then(|n| n.parse::<usize>().ok())
            .filter(|j| (1..=24).contains(j))
            .map(Self::unit)
            .ok_or_else(|| ConfigError::UnknownName(name.to_string()))
    }

    /// Built-in name, or else a path to a JSON file.
    pub fn resolve(name: &str) -> Result<Self, ConfigError> {
        match Self::builtin(name) {
            Ok(c) => Ok(c),
            Err(e) => {
                let p = std::path::Path::new(name);
                if p.exists() {
                    Self::from_json(&std::fs::read_to_string(p)?)
                } else {
                    Err(e)
                }
            }
        }
    }

    pub fn constants(&self) -> &[Rational; 24] {
        &self.c
    }

    pub fn ric(&self, a: usize, b: usize) -> &Rational {
        &self.c[sym_index(a, b)]
    }

    /// `nabla_s Ric_{ab}(0)`.
    pub fn dric(&self, s: usize, a: usize, b: usize) -> &Rational {
        &self.c[6 + 6 * s + sym_index(a, b)]
    }

    pub fn has_zero_ricci(&self) -> bool {
        self.c[..6].iter().all(Zero::is_zero)
    }

    pub fn is_flat(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    /// Linear combination `self + t * other`.
    pub fn add_scaled(&self, other: &Self, t: &Rational) -> Self {
        CurvatureConfig { c: std::array::from_fn(|k| &self.c[k] + t * &other.c[k]) }
    }

    /// Adds `s * I` to `Ric(0)` and `ds_k * I` to each `nabla_k Ric(0)`.
    pub fn add_pure_trace(&self, s: &Rational, ds: &[Rational; 3]) -> Self {
        let mut out = self.clone();
        for a in 0..3 {
            out.c[sym_index(a, a)] += s;
            for k in 0..3 {
                out.c[6 + 6 * k + sym_index(a, a)] += &ds[k];
            }
        }
        out
    }

    /// `sum_a nabla_a Ric_{ab} - (1/2) nabla_b Sc` at the origin; zero under the second Bianchi identity.
    pub fn bianchi_residual(&self) -> [Rational; 3] {
        std::array::from_fn(|b| {
            let div: Rational = (0..3).map(|a| self.dric(a, a, b).clone()).sum();
            let dsc: Rational = (0..3).map(|a| self.dric(b, a, a).clone()).sum();
            div - rat(1, 2) * dsc
        })
    }

    /// Overwrites `nabla_3 Ric_13`, `nabla_3 Ric_23`, `nabla_3 Ric_33` (constants 21, 23, 24)
    /// so that the contracted Bianchi identity holds.
    pub fn bianchi_completed(&self) -> Self {
        let mut out = self.clone();
        let d = |s: usize, a: usize, b: usize| self.dric(s, a, b).clone();
        let half = rat(1, 2);
        out.c[20] = &half * (d(0, 0, 0) + d(0, 1, 1) + d(0, 2, 2)) - d(0, 0, 0) - d(1, 0, 1);
        out.c[22] = &half * (d(1, 0, 0) + d(1, 1, 1) + d(1, 2, 2)) - d(0, 0, 1) - d(1, 1, 1);
        out.c[23] = d(2, 0, 0) + d(2, 1, 1) - rat(2, 1) * (d(0, 0, 2) + d(1, 1, 2));
        out
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.wire()).expect("serialisable")
    }

    pub fn from_json(s: &str) -> Result<Self, ConfigError> {
        let w: WireConfig = serde_json::from_str(s)?;
        Self::from_wire(&w)
    }

    fn wire(&self) -> WireConfig {
        WireConfig {
            ric: std::array::from_fn(|a| std::array::from_fn(|b| format_rational(self.ric(a, b)))),
            dric: std::array::from_fn(|s| {
                std::array::from_fn(|a| std::array::from_fn(|b| format_rational(self.dric(s, a, b))))
            }),
        }
    }

    fn from_wire(w: &WireConfig) -> Result<Self, ConfigError> {
        let mut cfg = Self::flat();
        let ric = parse_matrix(&w.ric)?;
        check_symmetric(&ric, "ric")?;
        for a in 0..3 {
            for b in a..3 {
                cfg.c[sym_index(a, b)] = ric[a][b].clone();
            }
        }
        for s in 0..3 {
            let m = parse_matrix(&w.dric[s])?;
            check_symmetric(&m, "dric")?;
            for a in 0..3 {
                for b in a..3 {
                    cfg.c[6 + 6 * s + sym_index(a, b)] = m[a][b].clone();
                }
            }
        }
        Ok(cfg)
    }

    /// Short label: `flat`, `c11`, or the non-zero constants.
    pub fn label(&self) -> String {
        let nz: Vec<usize> = (0..24).filter(|&k| !self.c[k].is_zero()).collect();
        match nz.as_slice() {
            [] => "flat".into(),
            [k] if self.c[*k] == rat(1, 1) => format!("c{}", k + 1),
            _ => nz
                .iter()
                .map(|&k| format!("c{}={}", k + 1, format_rational(&self.c[k])))
                .collect::<Vec<_>>()
                .join(","),
        }
    }
}

impl fmt::Display for CurvatureConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

impl FromStr for CurvatureConfig {
    type Err = ConfigError;
    fn from_str(s: &str) -> Result<Self, ConfigError> {
        Self::resolve(s)
    }
}

#[derive(Serialize, Deserialize)]
struct WireConfig {
    ric: [[String; 3]; 3],
    dric: [[[String; 3]; 3]; 3],
}

fn parse_matrix(m: &[[String; 3]; 3]) -> Result<[[Rational; 3]; 3], ConfigError> {
    let mut out: [[Rational; 3]; 3] = Default::default();
    for a in 0..3 {
        for b in 0..3 {
            out[a][b] = parse_rational(&m[a][b])?;
        }
    }
    Ok(out)
}

fn check_symmetric(m: &[[Rational; 3]; 3], what: &'static str) -> Result<(), ConfigError> {
    for a in 0..3 {
        for b in 0..3 {
            if m[a][b] != m[b][a] {
                return Err(ConfigError::NotSymmetric(what));
            }
        }
    }
    Ok(())
}

impl Serialize for CurvatureConfig {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.wire().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CurvatureConfig {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = WireConfig::deserialize(d)?;
        Self::from_wire(&w).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn c11_is_nabla1_ric23() {
        let c = CurvatureConfig::unit(11);
        assert_eq!(*c.dric(0, 1, 2), rat(1, 1));
        assert_eq!(*c.dric(0, 2, 1), rat(1, 1));
        assert_eq!(c.label(), "c11");
    }

    #[test]
    fn json_round_trip() {
        let c = CurvatureConfig::unit(5).add_scaled(&CurvatureConfig::unit(17), &rat(-3, 7));
        let back = CurvatureConfig::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn rejects_asymmetric() {
        let j = r#"{"ric":[["0","1","0"],["0","0","0"],["0","0","0"]],
                    "dric":[[["0","0","0"],["0","0","0"],["0","0","0"]],
                            [["0","0","0"],["0","0","0"],["0","0","0"]],
                            [["0","0","0"],["0","0","0"],["0","0","0"]]]}"#;
        assert!(matches!(CurvatureConfig::from_json(j), Err(ConfigError::NotSymmetric(_))));
    }

    #[test]
    fn builtin_names() {
        assert!(CurvatureConfig::builtin("flat").unwrap().is_flat());
        assert!(CurvatureConfig::builtin("c25").is_err());
        assert!(CurvatureConfig::builtin("c0").is_err());
    }
}
