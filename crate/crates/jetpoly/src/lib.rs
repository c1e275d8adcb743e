//! Exact arithmetic kernel.
//!
//! [`Gq`] is a Gaussian rational (both parts arbitrary-precision rationals) and
//! [`TruncatedPoly`] is a polynomial in the six variables `x1, x2, x3, e1, e2, e3`
//! truncated by joint total degree. Everything downstream is built out of these two.

mod number;
mod poly;

pub use number::{format_rational, parse_rational, rat, Gq, ParseError, Rational};
pub use poly::{Exp, PolyError, TruncatedPoly, Var, NVARS};
