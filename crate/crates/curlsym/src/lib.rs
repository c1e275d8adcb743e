//! Exact pseudodifferential symbol calculus for curl in normal coordinates.
//!
//! The pipeline runs from a [`CurvatureConfig`] (Ricci tensor and its derivative at a point)
//! through the metric jets of [`geometry`], the symbol calculus of [`symbol`], the projection
//! algorithm of [`projections`] and the independent square-root hierarchy of [`alt`].
//! Every number is an exact Gaussian rational.

pub mod alt;
pub mod config;
pub mod geometry;
pub mod matrix;
pub mod projections;
pub mod symbol;

pub use config::{ConfigError, CurvatureConfig};
pub use geometry::{build_metric_jet, MetricJet};
pub use matrix::Mat;
pub use symbol::SymbolJet;
