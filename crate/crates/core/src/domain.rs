//! Shapes, incidence matrices, degree sequences and the probability carrier
//! shared by every other module.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::{BigRational, Ratio};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensions of the incidence matrix.
///
/// With `loops_forbidden` the matrix is square and its diagonal is fixed at
/// zero, which is the loop-free digraph setting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Shape {
    m: usize,
    n: usize,
    loops_forbidden: bool,
}

impl Shape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        Self::with_loops(m, n, false)
    }

    /// Square shape with zero diagonal.
    pub fn digraph(n: usize) -> Result<Self> {
        Self::with_loops(n, n, true)
    }

    pub fn with_loops(m: usize, n: usize, loops_forbidden: bool) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::domain(format!("shape {m}x{n} must have m, n >= 1")));
        }
        if loops_forbidden && m != n {
            return Err(Error::domain(format!(
                "loop-free shape must be square, got {m}x{n}"
            )));
        }
        Ok(Shape {
            m,
            n,
            loops_forbidden,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn loops_forbidden(&self) -> bool {
        self.loops_forbidden
    }

    /// Number of cells that may hold a 1.
    pub fn cell_count(&self) -> usize {
        if self.loops_forbidden {
            self.n * self.n - self.n
        } else {
            self.m * self.n
        }
    }

    /// Largest admissible row degree.
    pub fn row_capacity(&self) -> u32 {
        (if self.loops_forbidden { self.n - 1 } else { self.n }) as u32
    }

    /// Largest admissible column degree.
    pub fn col_capacity(&self) -> u32 {
        (if self.loops_forbidden { self.m - 1 } else { self.m }) as u32
    }

    pub fn is_allowed(&self, i: usize, j: usize) -> bool {
        !(self.loops_forbidden && i == j)
    }

    /// Allowed cells in row-major order.
    pub fn allowed_cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n;
        (0..self.m)
            .flat_map(move |i| (0..n).map(move |j| (i, j)))
            .filter(move |&(i, j)| self.is_allowed(i, j))
    }

    /// Rows that column `j` may use.
    pub fn allowed_rows(&self, j: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.m).filter(move |&i| self.is_allowed(i, j))
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.loops_forbidden {
            write!(f, "{}x{} (no loops)", self.m, self.n)
        } else {
            write!(f, "{}x{}", self.m, self.n)
        }
    }
}

/// An m x n 0/1 matrix, stored row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BipartiteAdjacency {
    shape: Shape,
    bits: Vec<bool>,
}

impl BipartiteAdjacency {
    pub fn zeros(shape: Shape) -> Self {
        BipartiteAdjacency {
            shape,
            bits: vec![false; shape.m * shape.n],
        }
    }

    pub fn from_bits(shape: Shape, bits: Vec<bool>) -> Result<Self> {
        if bits.len() != shape.m * shape.n {
            return Err(Error::domain(format!(
                "expected {} entries for shape {shape}, got {}",
                shape.m * shape.n,
                bits.len()
            )));
        }
        if shape.loops_forbidden && (0..shape.n).any(|i| bits[i * shape.n + i]) {
            return Err(Error::domain("diagonal entry set in a loop-free matrix"));
        }
        Ok(BipartiteAdjacency { shape, bits })
    }

    pub fn from_rows(shape: Shape, rows: &[&[u8]]) -> Result<Self> {
        if rows.len() != shape.m || rows.iter().any(|r| r.len() != shape.n) {
            return Err(Error::domain("row layout does not match shape"));
        }
        let bits = rows.iter().flat_map(|r| r.iter().map(|&x| x != 0)).collect();
        Self::from_bits(shape, bits)
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.bits[i * self.shape.n + j]
    }

    pub(crate) fn set(&mut self, i: usize, j: usize) {
        debug_assert!(self.shape.is_allowed(i, j));
        self.bits[i * self.shape.n + j] = true;
    }

    pub fn edge_count(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Row degrees `s` and column degrees `t`.
///
/// The two sums may differ; joint quantities check them before use.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSequence {
    shape: Shape,
    s: Vec<u32>,
    t: Vec<u32>,
}

impl DegreeSequence {
    pub fn new(shape: Shape, s: Vec<u32>, t: Vec<u32>) -> Result<Self> {
        if s.len() != shape.m || t.len() != shape.n {
            return Err(Error::domain(format!(
                "degree vectors of length {}/{} do not fit shape {shape}",
                s.len(),
                t.len()
            )));
        }
        if let Some(&bad) = s.iter().find(|&&x| x > shape.row_capacity()) {
            return Err(Error::domain(format!(
                "row degree {bad} exceeds {}",
                shape.row_capacity()
            )));
        }
        if let Some(&bad) = t.iter().find(|&&x| x > shape.col_capacity()) {
            return Err(Error::domain(format!(
                "column degree {bad} exceeds {}",
                shape.col_capacity()
            )));
        }
        Ok(DegreeSequence { shape, s, t })
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn s(&self) -> &[u32] {
        &self.s
    }

    pub fn t(&self) -> &[u32] {
        &self.t
    }

    pub fn row_sum(&self) -> u64 {
        self.s.iter().map(|&x| x as u64).sum()
    }

    pub fn col_sum(&self) -> u64 {
        self.t.iter().map(|&x| x as u64).sum()
    }

    pub fn is_joint_valid(&self) -> bool {
        self.row_sum() == self.col_sum()
    }

    /// Common edge count, or an error when the sums differ.
    pub fn k(&self) -> Result<u64> {
        let (row_sum, col_sum) = (self.row_sum(), self.col_sum());
        if row_sum != col_sum {
            return Err(Error::SumMismatch { row_sum, col_sum });
        }
        Ok(row_sum)
    }

    /// Sorted copies of `s` and `t`, used as memo keys.
    pub fn canonical(&self) -> (Vec<u32>, Vec<u32>) {
        let mut s = self.s.clone();
        let mut t = self.t.clone();
        s.sort_unstable();
        t.sort_unstable();
        (s, t)
    }
}

impl fmt::Display for DegreeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "s={:?} t={:?}", self.s, self.t)
    }
}

pub fn degrees_of(matrix: &BipartiteAdjacency) -> DegreeSequence {
    let shape = matrix.shape;
    let mut s = vec![0u32; shape.m];
    let mut t = vec![0u32; shape.n];
    for i in 0..shape.m {
        for j in 0..shape.n {
            if matrix.get(i, j) {
                s[i] += 1;
                t[j] += 1;
            }
        }
    }
    DegreeSequence { shape, s, t }
}

/// k/(mn) as an exact fraction; errors when the sums differ.
pub fn density_lambda(ds: &DegreeSequence) -> Result<Ratio<u64>> {
    let k = ds.k()?;
    Ok(Ratio::new(k, (ds.shape.m * ds.shape.n) as u64))
}

/// The column-side density: sum(t) / (mn).
pub fn column_density(m: usize, t: &[u32]) -> Ratio<u64> {
    let k: u64 = t.iter().map(|&x| x as u64).sum();
    Ratio::new(k, (m * t.len()) as u64)
}

/// Natural log of a big non-negative integer; `-inf` for zero.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap().ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(!x.is_negative());
    ln_biguint(x.magnitude())
}

/// Natural log of a non-negative rational.
pub fn ln_rational(x: &BigRational) -> f64 {
    ln_bigint(x.numer()) - ln_bigint(x.denom())
}

/// A probability carried either exactly or as a natural log.
#[derive(Debug, Clone, PartialEq)]
pub enum Probability {
    Exact(BigRational),
    Log(f64),
}

impl Probability {
    pub fn zero() -> Self {
        Probability::Exact(BigRational::zero())
    }

    pub fn one() -> Self {
        Probability::Exact(BigRational::one())
    }

    pub fn from_ln(ln: f64) -> Self {
        debug_assert!(!ln.is_nan() && ln <= 1e-12, "log-probability {ln} out of range");
        Probability::Log(ln)
    }

    pub fn ln(&self) -> f64 {
        match self {
            Probability::Exact(r) => ln_rational(r),
            Probability::Log(l) => *l,
        }
    }

    pub fn value(&self) -> f64 {
        match self {
            Probability::Exact(r) => r.to_f64().unwrap_or_else(|| self.ln().exp()),
            Probability::Log(l) => l.exp(),
        }
    }

    pub fn exact(&self) -> Option<&BigRational> {
        match self {
            Probability::Exact(r) => Some(r),
            Probability::Log(_) => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Probability::Exact(r) => r.is_zero(),
            Probability::Log(l) => *l == f64::NEG_INFINITY,
        }
    }

    /// Sum, exact when both sides are exact, log-sum-exp otherwise.
    pub fn add(&self, other: &Probability) -> Probability {
        match (self, other) {
            (Probability::Exact(a), Probability::Exact(b)) => Probability::Exact(a + b),
            _ => Probability::Log(log_add_exp(self.ln(), other.ln())),
        }
    }

    pub fn mul(&self, other: &Probability) -> Probability {
        match (self, other) {
            (Probability::Exact(a), Probability::Exact(b)) => Probability::Exact(a * b),
            _ => Probability::Log(self.ln() + other.ln()),
        }
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Probability::Exact(r) => write!(f, "{r}"),
            Probability::Log(l) => write!(f, "exp({l})"),
        }
    }
}

pub fn log_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let hi = a.max(b);
    hi + (-(a - b).abs()).exp().ln_1p()
}

/// log(sum(exp(x_i))) over a slice, `-inf` when empty.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let hi = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi == f64::NEG_INFINITY {
        return hi;
    }
    let mut sum = 0.0;
    let mut comp = 0.0;
    for &x in xs {
        // Kahan
        let y = (x - hi).exp() - comp;
        let next = sum + y;
        comp = (next - sum) - y;
        sum = next;
    }
    hi + sum.ln()
}
