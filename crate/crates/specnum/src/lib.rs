//! Floating-point companions to the symbolic pipeline: spectra and eta functions of curl on
//! Berger spheres, and the Bessel-kernel identities behind the local trace.

pub mod berger;
pub mod kernel;
pub mod summation;
pub mod tolerances;

pub use tolerances::Tolerances;
