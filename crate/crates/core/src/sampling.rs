//! Model specifications and seedable samplers.
//!
//! Every random draw comes from a ChaCha12 generator. A stream is identified
//! by `(seed, stream_index)`: the key is expanded from `seed` with
//! `SeedableRng::seed_from_u64` and `stream_index` selects the ChaCha stream
//! via `set_stream`. Both steps are fixed, platform independent algorithms, so
//! equal pairs reproduce identical draws everywhere.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::{Binomial, Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::domain::{degrees_of, BipartiteAdjacency, DegreeSequence, Shape};
use crate::error::{Error, Result};

/// The probability models on degree sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Independent edges with probability p.
    Gp,
    /// Uniform over graphs with k edges.
    Gk,
    /// Uniform over graphs with column degrees t.
    Gt,
    /// Independent binomial degrees.
    Ip,
    /// `Ip` conditioned on equal side sums.
    Bp,
    /// `Ip` conditioned on both side sums equal to k.
    Bk,
    /// Row part of `Bk` with k = sum(t).
    Bt,
    /// Gaussian-kernel mixture of `Bp'`.
    Vp,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Gp,
        Family::Gk,
        Family::Gt,
        Family::Ip,
        Family::Bp,
        Family::Bk,
        Family::Bt,
        Family::Vp,
    ];

    pub fn is_graph(self) -> bool {
        matches!(self, Family::Gp | Family::Gk | Family::Gt)
    }

    /// Families whose law lives on the row degrees only, with t fixed.
    pub fn is_column_conditioned(self) -> bool {
        matches!(self, Family::Gt | Family::Bt)
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Gp => "gp",
            Family::Gk => "gk",
            Family::Gt => "gt",
            Family::Ip => "ip",
            Family::Bp => "bp",
            Family::Bk => "bk",
            Family::Bt => "bt",
            Family::Vp => "vp",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::config(format!("unknown model family '{s}'")))
    }
}

/// An edge probability, with its exact rational value when one is known.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeProb {
    value: f64,
    exact: Option<Ratio<i64>>,
}

impl EdgeProb {
    pub fn ratio(numer: i64, denom: i64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::domain("zero denominator"));
        }
        let r = Ratio::new(numer, denom);
        Self::checked(*r.numer() as f64 / *r.denom() as f64, Some(r))
    }

    /// Parses a decimal literal such as `0.3` into the exact value 3/10.
    pub fn parse_decimal(text: &str) -> Result<Self> {
        let text = text.trim();
        let value: f64 = text
            .parse()
            .map_err(|_| Error::domain(format!("'{text}' is not a number")))?;
        Self::checked(value, decimal_ratio(text))
    }

    /// Uses the shortest decimal that round-trips to `value` as the exact value.
    pub fn from_f64(value: f64) -> Result<Self> {
        Self::checked(value, decimal_ratio(&value.to_string()))
    }

    /// A probability with no exact value; the rational path rejects it.
    pub fn inexact(value: f64) -> Result<Self> {
        Self::checked(value, None)
    }

    fn checked(value: f64, exact: Option<Ratio<i64>>) -> Result<Self> {
        if !(value > 0.0 && value < 1.0) {
            return Err(Error::domain(format!("p = {value} must lie in (0, 1)")));
        }
        Ok(EdgeProb { value, exact })
    }

    pub fn value(&self) -> f64 {
        self.value
    }

    pub fn q(&self) -> f64 {
        1.0 - self.value
    }

    pub fn exact(&self) -> Option<BigRational> {
        self.exact
            .map(|r| BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom())))
    }
}

fn decimal_ratio(text: &str) -> Option<Ratio<i64>> {
    let (int_part, frac) = match text.split_once('.') {
        Some((a, b)) => (a, b),
        None => (text, ""),
    };
    if frac.len() > 17 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let int: i64 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().ok()?
    };
    let denom = 10i64.checked_pow(frac.len() as u32)?;
    let frac_val: i64 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    Some(Ratio::new(int.checked_mul(denom)?.checked_add(frac_val)?, denom))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ModelParam {
    P(EdgeProb),
    K(u64),
    T(Vec<u32>),
}

/// A model family together with its shape and parameter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    family: Family,
    shape: Shape,
    param: ModelParam,
}

impl ModelSpec {
    pub fn new(family: Family, shape: Shape, param: ModelParam) -> Result<Self> {
        match (family, &param) {
            (Family::Gp | Family::Ip | Family::Bp | Family::Vp, ModelParam::P(_)) => {}
            (Family::Gk | Family::Bk, ModelParam::K(k)) => {
                if *k as usize > shape.cell_count() {
                    return Err(Error::domain(format!(
                        "k = {k} exceeds {} available cells",
                        shape.cell_count()
                    )));
                }
            }
            (Family::Gt | Family::Bt, ModelParam::T(t)) => {
                if t.len() != shape.n() {
                    return Err(Error::domain(format!(
                        "t has {} entries, shape has {} columns",
                        t.len(),
                        shape.n()
                    )));
                }
                let available = shape.col_capacity();
                if let Some((column, &demand)) = t.iter().enumerate().find(|(_, &x)| x > available)
                {
                    return Err(Error::InfeasibleColumn {
                        column,
                        demand,
                        available,
                    });
                }
            }
            _ => {
                return Err(Error::domain(format!(
                    "model {family} does not take parameter {param:?}"
                )))
            }
        }
        Ok(ModelSpec {
            family,
            shape,
            param,
        })
    }

    pub fn with_p(family: Family, shape: Shape, p: EdgeProb) -> Result<Self> {
        Self::new(family, shape, ModelParam::P(p))
    }

    pub fn with_k(family: Family, shape: Shape, k: u64) -> Result<Self> {
        Self::new(family, shape, ModelParam::K(k))
    }

    pub fn with_t(family: Family, shape: Shape, t: Vec<u32>) -> Result<Self> {
        Self::new(family, shape, ModelParam::T(t))
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn param(&self) -> &ModelParam {
        &self.param
    }

    pub fn p(&self) -> Option<&EdgeProb> {
        match &self.param {
            ModelParam::P(p) => Some(p),
            _ => None,
        }
    }

    pub fn k(&self) -> Option<u64> {
        match &self.param {
            ModelParam::K(k) => Some(*k),
            _ => None,
        }
    }

    pub fn t(&self) -> Option<&[u32]> {
        match &self.param {
            ModelParam::T(t) => Some(t),
            _ => None,
        }
    }

    /// The edge total fixed by the model, if any.
    pub fn fixed_k(&self) -> Option<u64> {
        match &self.param {
            ModelParam::K(k) => Some(*k),
            ModelParam::T(t) => Some(t.iter().map(|&x| x as u64).sum()),
            ModelParam::P(_) => None,
        }
    }
}

impl fmt::Display for ModelSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.shape.loops_forbidden() { "dig-" } else { "" };
        write!(f, "{prefix}{}[{}]", self.family, self.shape)?;
        match &self.param {
            ModelParam::P(p) => write!(f, " p={}", p.value()),
            ModelParam::K(k) => write!(f, " k={k}"),
            ModelParam::T(t) => write!(f, " t={t:?}"),
        }
    }
}

/// Identifies one reproducible random stream.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RngStream {
    pub seed: u64,
    pub stream_index: u64,
}

impl RngStream {
    pub fn new(seed: u64, stream_index: u64) -> Self {
        RngStream { seed, stream_index }
    }

    pub fn rng(&self) -> ChaCha12Rng {
        let mut rng = ChaCha12Rng::seed_from_u64(self.seed);
        rng.set_stream(self.stream_index);
        rng
    }
}

/// Runs the reservoir algorithm with externally supplied draws.
///
/// `draws[r]` is the value of `Y_{a+1+r}` and must lie in `1..=a+1+r`.
/// Exposed so that uniformity can be checked by enumerating every draw vector.
pub fn reservoir_from_draws<T: Clone>(universe: &[T], a: usize, draws: &[usize]) -> Result<Vec<T>> {
    if a > universe.len() {
        return Err(Error::domain(format!(
            "subset size {a} exceeds universe of {}",
            universe.len()
        )));
    }
    if draws.len() != universe.len() - a {
        return Err(Error::domain("need exactly N - a draws"));
    }
    let mut it = draws.iter();
    reservoir_core(universe, a, |_| *it.next().expect("draw count checked"))
}

fn reservoir_core<T: Clone>(
    universe: &[T],
    a: usize,
    mut draw: impl FnMut(usize) -> usize,
) -> Result<Vec<T>> {
    let mut x: Vec<T> = universe[..a].to_vec();
    for (idx, w) in universe.iter().enumerate().skip(a) {
        let j = idx + 1;
        let y = draw(j);
        if y == 0 || y > j {
            return Err(Error::domain(format!("draw {y} outside 1..={j}")));
        }
        if y <= a {
            x[y - 1] = w.clone();
        }
    }
    Ok(x)
}

/// Uniform `a`-subset of `universe` by reservoir sampling (Waterman's
/// algorithm R). Uses exactly `N - a` uniform draws.
pub fn reservoir_subset<T: Clone, R: Rng + ?Sized>(
    universe: &[T],
    a: usize,
    rng: &mut R,
) -> Result<Vec<T>> {
    if a > universe.len() {
        return Err(Error::domain(format!(
            "subset size {a} exceeds universe of {}",
            universe.len()
        )));
    }
    reservoir_core(universe, a, |j| rng.random_range(1..=j))
}

/// Draws a graph from `Gp`, `Gk` or `Gt` (loop-free when the shape says so).
pub fn sample_graph<R: Rng + ?Sized>(model: &ModelSpec, rng: &mut R) -> Result<BipartiteAdjacency> {
    let shape = model.shape;
    let mut g = BipartiteAdjacency::zeros(shape);
    match (&model.family, &model.param) {
        (Family::Gp, ModelParam::P(p)) => {
            for (i, j) in shape.allowed_cells() {
                if rng.random_bool(p.value) {
                    g.set(i, j);
                }
            }
        }
        (Family::Gk, ModelParam::K(k)) => {
            let cells: Vec<(usize, usize)> = shape.allowed_cells().collect();
            for (i, j) in reservoir_subset(&cells, *k as usize, rng)? {
                g.set(i, j);
            }
        }
        (Family::Gt, ModelParam::T(t)) => {
            for (j, &tj) in t.iter().enumerate() {
                let rows: Vec<usize> = shape.allowed_rows(j).collect();
                if tj as usize > rows.len() {
                    return Err(Error::InfeasibleColumn {
                        column: j,
                        demand: tj,
                        available: rows.len() as u32,
                    });
                }
                for i in reservoir_subset(&rows, tj as usize, rng)? {
                    g.set(i, j);
                }
            }
        }
        _ => {
            return Err(Error::domain(format!(
                "sample_graph needs a graph model, got {}",
                model.family
            )))
        }
    }
    Ok(g)
}

/// Same as [`sample_graph`] but driven by a stream identifier.
pub fn sample_graph_stream(model: &ModelSpec, stream: RngStream) -> Result<BipartiteAdjacency> {
    sample_graph(model, &mut stream.rng())
}

fn binomial_draw<R: Rng + ?Sized>(n: u32, p: f64, rng: &mut R) -> u32 {
    Binomial::new(n as u64, p).expect("valid binomial").sample(rng) as u32
}

fn independent_binomials<R: Rng + ?Sized>(shape: Shape, p: f64, rng: &mut R) -> (Vec<u32>, Vec<u32>) {
    let s = (0..shape.m()).map(|_| binomial_draw(shape.row_capacity(), p, rng)).collect();
    let t = (0..shape.n()).map(|_| binomial_draw(shape.col_capacity(), p, rng)).collect();
    (s, t)
}

fn conditioned_binomials<R: Rng + ?Sized>(shape: Shape, p: f64, rng: &mut R) -> (Vec<u32>, Vec<u32>) {
    loop {
        let (s, t) = independent_binomials(shape, p, rng);
        if s.iter().sum::<u32>() == t.iter().sum::<u32>() {
            return (s, t);
        }
    }
}

/// Row degrees of a uniform k-subset of the allowed cells. This is exactly
/// the law of `S` in `Bk` (and of `T` after transposition).
fn hypergeometric_rows<R: Rng + ?Sized>(shape: Shape, k: u64, rng: &mut R) -> Result<Vec<u32>> {
    let cells: Vec<usize> = shape.allowed_cells().map(|(i, _)| i).collect();
    let mut s = vec![0u32; shape.m()];
    for i in reservoir_subset(&cells, k as usize, rng)? {
        s[i] += 1;
    }
    Ok(s)
}

fn hypergeometric_cols<R: Rng + ?Sized>(shape: Shape, k: u64, rng: &mut R) -> Result<Vec<u32>> {
    let cells: Vec<usize> = shape.allowed_cells().map(|(_, j)| j).collect();
    let mut t = vec![0u32; shape.n()];
    for j in reservoir_subset(&cells, k as usize, rng)? {
        t[j] += 1;
    }
    Ok(t)
}

/// Draws p' from the mixing kernel: normal with mean p and variance
/// pq/(2mn), truncated to (0, 1).
pub fn sample_kernel<R: Rng + ?Sized>(shape: Shape, p: f64, rng: &mut R) -> f64 {
    let mn = (shape.m() * shape.n()) as f64;
    let sigma = (p * (1.0 - p) / (2.0 * mn)).sqrt();
    let normal = Normal::new(p, sigma).expect("positive sigma");
    loop {
        let x = normal.sample(rng);
        if x > 0.0 && x < 1.0 {
            return x;
        }
    }
}

/// One draw of the degree sequence from any model family.
pub fn sample_degrees<R: Rng + ?Sized>(model: &ModelSpec, rng: &mut R) -> Result<DegreeSequence> {
    let shape = model.shape;
    let (s, t) = match (&model.family, &model.param) {
        (Family::Gp | Family::Gk | Family::Gt, _) => return Ok(degrees_of(&sample_graph(model, rng)?)),
        (Family::Ip, ModelParam::P(p)) => independent_binomials(shape, p.value, rng),
        (Family::Bp, ModelParam::P(p)) => conditioned_binomials(shape, p.value, rng),
        (Family::Vp, ModelParam::P(p)) => {
            let p_prime = sample_kernel(shape, p.value, rng);
            conditioned_binomials(shape, p_prime, rng)
        }
        (Family::Bk, ModelParam::K(k)) => {
            let s = hypergeometric_rows(shape, *k, rng)?;
            (s, hypergeometric_cols(shape, *k, rng)?)
        }
        (Family::Bt, ModelParam::T(t)) => {
            let k = t.iter().map(|&x| x as u64).sum();
            (hypergeometric_rows(shape, k, rng)?, t.clone())
        }
        _ => unreachable!("ModelSpec::new validates family/parameter pairs"),
    };
    DegreeSequence::new(shape, s, t)
}

/// `trials` independent draws; trial `r` uses stream `(seed, r)`, so the
/// output does not depend on scheduling.
pub fn sample_degree_stream(model: &ModelSpec, trials: usize, seed: u64) -> Result<Vec<DegreeSequence>> {
    if trials == 0 {
        return Err(Error::domain("trials must be at least 1"));
    }
    (0..trials as u64)
        .into_par_iter()
        .map(|r| sample_degrees(model, &mut RngStream::new(seed, r).rng()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(n: usize) -> Shape {
        Shape::new(n, n).unwrap()
    }

    #[test]
    fn gk_zero_edges_is_empty() {
        let model = ModelSpec::with_k(Family::Gk, Shape::new(3, 4).unwrap(), 0).unwrap();
        for r in 0..20 {
            let g = sample_graph_stream(&model, RngStream::new(1, r)).unwrap();
            assert_eq!(g.edge_count(), 0);
        }
    }

    #[test]
    fn gt_full_columns_is_full() {
        let model = ModelSpec::with_t(Family::Gt, Shape::new(3, 2).unwrap(), vec![3, 3]).unwrap();
        let g = sample_graph_stream(&model, RngStream::new(5, 0)).unwrap();
        assert_eq!(g.edge_count(), 6);
    }

    #[test]
    fn full_loop_free_digraph() {
        let shape = Shape::digraph(4).unwrap();
        let model = ModelSpec::with_k(Family::Gk, shape, 12).unwrap();
        let g = sample_graph_stream(&model, RngStream::new(9, 3)).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(g.get(i, j), i != j);
            }
        }
    }

    #[test]
    fn digraph_samplers_avoid_diagonal() {
        let shape = Shape::digraph(5).unwrap();
        let models = [
            ModelSpec::with_p(Family::Gp, shape, EdgeProb::ratio(9, 10).unwrap()).unwrap(),
            ModelSpec::with_k(Family::Gk, shape, 15).unwrap(),
            ModelSpec::with_t(Family::Gt, shape, vec![4, 4, 3, 4, 4]).unwrap(),
        ];
        for model in &models {
            for r in 0..50 {
                let g = sample_graph_stream(model, RngStream::new(2, r)).unwrap();
                assert!((0..5).all(|i| !g.get(i, i)));
                let ds = degrees_of(&g);
                assert!(ds.s().iter().all(|&x| x < 5));
                assert!(ds.t().iter().all(|&x| x < 5));
            }
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(EdgeProb::from_f64(0.0).is_err());
        assert!(EdgeProb::from_f64(1.0).is_err());
        assert!(ModelSpec::with_k(Family::Gk, sq(2), 5).is_err());
        assert!(matches!(
            ModelSpec::with_t(Family::Gt, Shape::digraph(3).unwrap(), vec![3, 0, 0]),
            Err(Error::InfeasibleColumn { column: 0, .. })
        ));
        assert!(ModelSpec::with_k(Family::Gp, sq(2), 1).is_err());
    }

    #[test]
    fn decimal_parsing_is_exact() {
        let p = EdgeProb::parse_decimal("0.3").unwrap();
        assert_eq!(p.exact().unwrap(), BigRational::new(3.into(), 10.into()));
        let p = EdgeProb::from_f64(0.25).unwrap();
        assert_eq!(p.exact().unwrap(), BigRational::new(1.into(), 4.into()));
        assert!(EdgeProb::inexact(0.25).unwrap().exact().is_none());
    }

    #[test]
    fn reservoir_edge_cases() {
        let u = [1, 2, 3, 4];
        let mut rng = RngStream::new(0, 0).rng();
        assert!(reservoir_subset(&u, 0, &mut rng).unwrap().is_empty());
        let mut all = reservoir_subset(&u, 4, &mut rng).unwrap();
        all.sort();
        assert_eq!(all, vec![1, 2, 3, 4]);
        assert!(reservoir_subset(&u, 5, &mut rng).is_err());
    }

    #[test]
    fn reservoir_three_choose_two_by_enumeration() {
        let u = ['a', 'b', 'c'];
        let mut tally = std::collections::BTreeMap::new();
        for y in 1..=3 {
            let mut x = reservoir_from_draws(&u, 2, &[y]).unwrap();
            x.sort();
            *tally.entry(x).or_insert(0) += 1;
        }
        assert_eq!(tally.len(), 3);
        assert!(tally.values().all(|&c| c == 1));
    }

    #[test]
    fn streams_are_reproducible() {
        let model = ModelSpec::with_p(Family::Gp, Shape::new(6, 7).unwrap(), EdgeProb::from_f64(0.4).unwrap()).unwrap();
        let a = sample_degree_stream(&model, 30, 77).unwrap();
        let b = sample_degree_stream(&model, 30, 77).unwrap();
        assert_eq!(a, b);
        let c = sample_degree_stream(&model, 30, 78).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn gt_stream_keeps_t() {
        let t = vec![1, 2, 0, 3];
        let model = ModelSpec::with_t(Family::Gt, Shape::new(3, 4).unwrap(), t.clone()).unwrap();
        for ds in sample_degree_stream(&model, 40, 3).unwrap() {
            assert_eq!(ds.t(), &t[..]);
        }
    }

    #[test]
    fn binomial_families_respect_conditioning() {
        let shape = Shape::new(3, 4).unwrap();
        let p = EdgeProb::from_f64(0.3).unwrap();
        let bp = ModelSpec::with_p(Family::Bp, shape, p.clone()).unwrap();
        let vp = ModelSpec::with_p(Family::Vp, shape, p).unwrap();
        let bk = ModelSpec::with_k(Family::Bk, shape, 5).unwrap();
        for ds in sample_degree_stream(&bp, 50, 1).unwrap() {
            assert!(ds.is_joint_valid());
        }
        for ds in sample_degree_stream(&vp, 50, 1).unwrap() {
            assert!(ds.is_joint_valid());
        }
        for ds in sample_degree_stream(&bk, 50, 1).unwrap() {
            assert_eq!(ds.k().unwrap(), 5);
        }
    }
}
