//! Small dense matrices of truncated polynomials.

use std::fmt;

use jetpoly::{Gq, TruncatedPoly, Var};
use serde::{Deserialize, Serialize};

/// Row-major `rows x cols` matrix; entry `(a, b)` is `[q]_a^b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<TruncatedPoly>,
}

impl Mat {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> TruncatedPoly) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for a in 0..rows {
            for b in 0..cols {
                data.push(f(a, b));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize, order: u32) -> Self {
        Self::from_fn(rows, cols, |_, _| TruncatedPoly::zero(order))
    }

    pub fn identity(n: usize, order: u32) -> Self {
        Self::from_fn(n, n, |a, b| if a == b { TruncatedPoly::one(order) } else { TruncatedPoly::zero(order) })
    }

    /// Constant matrix from Gaussian-rational entries.
    pub fn constant(rows: usize, cols: usize, order: u32, f: impl Fn(usize, usize) -> Gq) -> Self {
        Self::from_fn(rows, cols, |a, b| TruncatedPoly::constant(f(a, b), order))
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, a: usize, b: usize) -> &TruncatedPoly {
        &self.data[a * self.cols + b]
    }

    pub fn set(&mut self, a: usize, b: usize, p: TruncatedPoly) {
        self.data[a * self.cols + b] = p;
    }

    pub fn entries(&self) -> impl Iterator<Item = &TruncatedPoly> {
        self.data.iter()
    }

    /// Smallest truncation order over all entries.
    pub fn order(&self) -> u32 {
        self.data.iter().map(TruncatedPoly::order).min().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(TruncatedPoly::is_zero)
    }

    pub fn map(&self, f: impl Fn(&TruncatedPoly) -> TruncatedPoly) -> Self {
        Mat { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    fn zip(&self, o: &Self, f: impl Fn(&TruncatedPoly, &TruncatedPoly) -> TruncatedPoly) -> Self {
        assert_eq!(self.shape(), o.shape(), "matrix shape mismatch");
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        self.zip(o, TruncatedPoly::add)
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.zip(o, TruncatedPoly::sub)
    }

    pub fn neg(&self) -> Self {
        self.map(TruncatedPoly::neg)
    }

    pub fn scale(&self, c: &Gq) -> Self {
        self.map(|p| p.scale(c))
    }

    /// Multiplies every entry by a scalar polynomial.
    pub fn scale_poly(&self, s: &TruncatedPoly) -> Self {
        self.map(|p| p.mul(s))
    }

    pub fn conj(&self) -> Self {
        self.map(TruncatedPoly::conj)
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |a, b| self.get(b, a).clone())
    }

    pub fn truncate(&self, order: u32) -> Self {
        self.map(|p| p.truncate(order))
    }

    pub fn diff(&self, v: Var) -> Self {
        self.map(|p| p.diff(v))
    }

    pub fn at_x_origin(&self) -> Self {
        self.map(TruncatedPoly::at_x_origin)
    }

    pub fn at_eta_zero(&self) -> Self {
        self.map(TruncatedPoly::at_eta_zero)
    }

    /// Matrix product.
    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows, "matrix product shape mismatch");
        let order = self.order().min(o.order());
        Mat::from_fn(self.rows, o.cols, |a, b| {
            let mut acc = TruncatedPoly::zero(order);
            for k in 0..self.cols {
                let (l, r) = (self.get(a, k), o.get(k, b));
                if !l.is_zero() && !r.is_zero() {
                    acc = acc.add(&l.mul(r));
                }
            }
            acc
        })
    }

    /// `self * o - o * self`.
    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn trace(&self) -> TruncatedPoly {
        assert_eq!(self.rows, self.cols, "trace of non-square matrix");
        let mut acc = TruncatedPoly::zero(self.order());
        for a in 0..self.rows {
            acc = acc.add(self.get(a, a));
        }
        acc
    }

    /// Values at `x = 0, eta = 0`.
    pub fn at_anchor(&self) -> Vec<Vec<Gq>> {
        (0..self.rows).map(|a| (0..self.cols).map(|b| self.get(a, b).constant_term()).collect()).collect()
    }

    /// Entrywise equality of anchor values with the given constants.
    pub fn anchor_equals(&self, expect: &[Vec<Gq>]) -> bool {
        self.at_anchor() == expect
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|b| self.get(a, b).to_string()).collect();
            writeln!(f, "[{}]", row.join(" ; "))?;
        }
        Ok(())
    }
}

/// Gaussian-rational 3x3 helper for expected values: `scale * m`.
pub fn gq_matrix(scale: Gq, m: [[Gq; 3]; 3]) -> Vec<Vec<Gq>> {
    m.iter().map(|row| row.iter().map(|v| &scale * v).collect()).collect()
}
