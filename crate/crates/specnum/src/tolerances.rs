//! Numeric tolerances shared by the checks and the command line.

use serde::Serialize;

/// Bumped whenever a default changes.
pub const TOLERANCE_TABLE_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub version: u32,
    /// Basset quadrature against `2 y K1(y)`.
    pub basset: f64,
    /// Series and continued-fraction branches of `K1` at the crossover, relative.
    pub k1_crossover: f64,
    /// Fitted logarithmic coefficient, relative.
    pub log_coefficient: f64,
    /// Sphere average of the singular part.
    pub sphere_average: f64,
    /// `eta_partial` against the decomposition identity.
    pub eta_identity: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            version: TOLERANCE_TABLE_VERSION,
            basset: 1e-8,
            k1_crossover: 1e-11,
            log_coefficient: 1e-2,
            sphere_average: 1e-10,
            eta_identity: 1e-6,
        }
    }
}
