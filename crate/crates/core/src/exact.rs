//! Exact counts of 0/1 matrices with prescribed margins and exact rational
//! probability mass functions for the small-shape models.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::binom::{binomial, ln_binomial};
use crate::domain::{log_sum_exp, DegreeSequence, Probability, Shape};
use crate::error::{Error, Result};
use crate::sampling::{Family, ModelParam, ModelSpec};

/// Largest cell count accepted by [`brute_force_count`].
pub const BRUTE_FORCE_MAX_CELLS: usize = 25;
/// Largest cell count for which graph-model pmfs are produced as exact rationals.
pub const EXACT_PMF_MAX_CELLS: usize = 24;
/// Largest cell count for which [`sum_match_prob`] sums big rationals.
pub const SUM_MATCH_EXACT_MAX_CELLS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMethod {
    BruteForce,
    Dp,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountResult {
    pub value: BigUint,
    pub method: CountMethod,
    /// Set when the margins had different sums and the count is zero for that reason.
    pub sum_mismatch: bool,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct CountOptions {
    /// Return zero early when the Gale–Ryser conditions fail (bipartite only).
    pub gale_ryser: bool,
}

/// Enumerates every matrix of the shape and tallies its margins.
pub fn brute_force_table(shape: Shape) -> Result<HashMap<(Vec<u32>, Vec<u32>), u64>> {
    let cells: Vec<(usize, usize)> = shape.allowed_cells().collect();
    if cells.len() > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::capacity(format!(
            "brute force over {} cells exceeds the limit of {BRUTE_FORCE_MAX_CELLS}",
            cells.len()
        )));
    }
    let mut row_masks = vec![0u32; shape.m()];
    let mut col_masks = vec![0u32; shape.n()];
    for (bit, &(i, j)) in cells.iter().enumerate() {
        row_masks[i] |= 1 << bit;
        col_masks[j] |= 1 << bit;
    }
    let mut table = HashMap::new();
    for mask in 0u32..(1u32 << cells.len()) {
        let s: Vec<u32> = row_masks.iter().map(|r| (mask & r).count_ones()).collect();
        let t: Vec<u32> = col_masks.iter().map(|c| (mask & c).count_ones()).collect();
        *table.entry((s, t)).or_insert(0) += 1;
    }
    Ok(table)
}

/// Reference count by exhaustive enumeration (loops honoured).
pub fn brute_force_count(ds: &DegreeSequence) -> Result<CountResult> {
    let shape = ds.shape();
    let cells: Vec<(usize, usize)> = shape.allowed_cells().collect();
    if cells.len() > BRUTE_FORCE_MAX_CELLS {
        return Err(Error::capacity(format!(
            "brute force over {} cells exceeds the limit of {BRUTE_FORCE_MAX_CELLS}",
            cells.len()
        )));
    }
    if !ds.is_joint_valid() {
        return Ok(CountResult {
            value: BigUint::ZERO,
            method: CountMethod::BruteForce,
            sum_mismatch: true,
        });
    }
    let mut row_masks = vec![0u32; shape.m()];
    let mut col_masks = vec![0u32; shape.n()];
    for (bit, &(i, j)) in cells.iter().enumerate() {
        row_masks[i] |= 1 << bit;
        col_masks[j] |= 1 << bit;
    }
    let mut hits = 0u64;
    for mask in 0u32..(1u32 << cells.len()) {
        let rows_ok = row_masks
            .iter()
            .zip(ds.s())
            .all(|(r, &si)| (mask & r).count_ones() == si);
        if rows_ok
            && col_masks
                .iter()
                .zip(ds.t())
                .all(|(c, &tj)| (mask & c).count_ones() == tj)
        {
            hits += 1;
        }
    }
    Ok(CountResult {
        value: BigUint::from(hits),
        method: CountMethod::BruteForce,
        sum_mismatch: false,
    })
}

/// Gale–Ryser test for the existence of a bipartite graph with margins (s, t).
pub fn gale_ryser(s: &[u32], t: &[u32]) -> bool {
    let total_s: u64 = s.iter().map(|&x| x as u64).sum();
    let total_t: u64 = t.iter().map(|&x| x as u64).sum();
    if total_s != total_t {
        return false;
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut prefix = 0u64;
    for (idx, &si) in sorted.iter().enumerate() {
        prefix += si as u64;
        let k = idx as u64 + 1;
        let cap: u64 = t.iter().map(|&tj| (tj as u64).min(k)).sum();
        if prefix > cap {
            return false;
        }
    }
    true
}

fn check_margins(ds: &DegreeSequence, loops_forbidden: bool) -> Result<()> {
    ds.k()?;
    if ds.shape().loops_forbidden() != loops_forbidden {
        return Err(Error::domain(if loops_forbidden {
            "loop-free count requested for a shape that allows loops"
        } else {
            "bipartite count requested for a loop-free shape"
        }));
    }
    Ok(())
}

struct BipartiteDp {
    cols: Vec<u32>,
    max_value: usize,
    memo: HashMap<(usize, Vec<u8>), BigUint>,
}

impl BipartiteDp {
    fn count(&mut self, col: usize, classes: &[u8]) -> BigUint {
        let remaining = self.cols.len() - col;
        // Highest non-empty residual class must fit into the remaining columns.
        if let Some(top) = (1..=self.max_value).rev().find(|&v| classes[v] > 0) {
            if top > remaining {
                return BigUint::ZERO;
            }
        } else {
            return if self.cols[col..].iter().all(|&t| t == 0) {
                BigUint::one()
            } else {
                BigUint::ZERO
            };
        }
        if remaining == 0 {
            return BigUint::ZERO;
        }
        let key = (col, classes.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let demand = self.cols[col];
        let mut total = BigUint::ZERO;
        let mut take = vec![0u8; self.max_value + 2];
        self.distribute(col, classes, &mut take, self.max_value, demand, 1, &mut total);
        self.memo.insert(key, total.clone());
        total
    }

    /// Chooses how many rows of each residual class (from `v` down to 1) the
    /// current column uses.
    #[allow(clippy::too_many_arguments)]
    fn distribute(
        &mut self,
        col: usize,
        classes: &[u8],
        take: &mut Vec<u8>,
        v: usize,
        left: u32,
        weight: u64,
        total: &mut BigUint,
    ) {
        if left == 0 {
            let mut next = classes.to_vec();
            for u in 1..=self.max_value {
                next[u] -= take[u];
                next[u - 1] += take[u];
            }
            let sub = self.count(col + 1, &next);
            if !sub.is_zero() {
                *total += sub * weight;
            }
            return;
        }
        if v == 0 {
            return;
        }
        let avail_below: u32 = classes[1..v].iter().map(|&c| c as u32).sum();
        let c = classes[v] as u32;
        let lo = left.saturating_sub(avail_below);
        let hi = c.min(left);
        for x in lo..=hi {
            take[v] = x as u8;
            let w = weight * binom_u64(c, x);
            self.distribute(col, classes, take, v - 1, left - x, w, total);
        }
        take[v] = 0;
    }
}

fn binom_u64(n: u32, k: u32) -> u64 {
    let k = k.min(n - k);
    let mut acc = 1u64;
    for i in 0..k {
        acc = acc * (n - i) as u64 / (i + 1) as u64;
    }
    acc
}

/// G(s, t): the number of bipartite graphs (0/1 matrices) with margins (s, t).
pub fn count_g(ds: &DegreeSequence) -> Result<CountResult> {
    count_g_with(ds, CountOptions::default())
}

pub fn count_g_with(ds: &DegreeSequence, opts: CountOptions) -> Result<CountResult> {
    check_margins(ds, false)?;
    if ds.shape().m() > u8::MAX as usize {
        return Err(Error::capacity("more than 255 rows"));
    }
    let done = |value| {
        Ok(CountResult {
            value,
            method: CountMethod::Dp,
            sum_mismatch: false,
        })
    };
    if opts.gale_ryser && !gale_ryser(ds.s(), ds.t()) {
        return done(BigUint::ZERO);
    }
    let max_value = ds.shape().n();
    let mut classes = vec![0u8; max_value + 1];
    for &si in ds.s() {
        classes[si as usize] += 1;
    }
    let mut cols = ds.t().to_vec();
    cols.sort_unstable_by(|a, b| b.cmp(a));
    let mut dp = BipartiteDp {
        cols,
        max_value,
        memo: HashMap::new(),
    };
    done(dp.count(0, &classes))
}

struct DigraphDp {
    cols: Vec<u32>,
    max_value: usize,
    memo: HashMap<(usize, Vec<u8>, Vec<u8>), BigUint>,
}

impl DigraphDp {
    /// Column `col` may not use row `col`. Rows below `col` have passed their
    /// forbidden column and are pooled by residual; rows from `col` on are
    /// kept individually in `pending`.
    fn count(&mut self, col: usize, pooled: &[u8], pending: &[u8]) -> BigUint {
        let n = self.cols.len();
        if col == n {
            return if pooled[1..].iter().all(|&c| c == 0) {
                BigUint::one()
            } else {
                BigUint::ZERO
            };
        }
        let remaining = n - col;
        if let Some(top) = (1..=self.max_value).rev().find(|&v| pooled[v] > 0) {
            if top > remaining {
                return BigUint::ZERO;
            }
        }
        if pending.iter().any(|&r| r as usize > remaining - 1) {
            return BigUint::ZERO;
        }
        let key = (col, pooled.to_vec(), pending.to_vec());
        if let Some(v) = self.memo.get(&key) {
            return v.clone();
        }
        let mut total = BigUint::ZERO;
        let mut chosen = vec![false; pending.len()];
        self.pick_pending(col, pooled, pending, &mut chosen, 1, self.cols[col], &mut total);
        self.memo.insert(key, total.clone());
        total
    }

    #[allow(clippy::too_many_arguments)]
    fn pick_pending(
        &mut self,
        col: usize,
        pooled: &[u8],
        pending: &[u8],
        chosen: &mut Vec<bool>,
        idx: usize,
        left: u32,
        total: &mut BigUint,
    ) {
        if idx == pending.len() || left == 0 {
            let mut take = vec![0u8; self.max_value + 2];
            self.pick_pooled(col, pooled, pending, chosen, &mut take, self.max_value, left, 1, total);
            return;
        }
        self.pick_pending(col, pooled, pending, chosen, idx + 1, left, total);
        if pending[idx] > 0 {
            chosen[idx] = true;
            self.pick_pending(col, pooled, pending, chosen, idx + 1, left - 1, total);
            chosen[idx] = false;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn pick_pooled(
        &mut self,
        col: usize,
        pooled: &[u8],
        pending: &[u8],
        chosen: &[bool],
        take: &mut Vec<u8>,
        v: usize,
        left: u32,
        weight: u64,
        total: &mut BigUint,
    ) {
        if left == 0 {
            let mut next_pool = pooled.to_vec();
            for u in 1..=self.max_value {
                next_pool[u] -= take[u];
                next_pool[u - 1] += take[u];
            }
            // The excluded row joins the pool untouched.
            next_pool[pending[0] as usize] += 1;
            let next_pending: Vec<u8> = pending[1..]
                .iter()
                .zip(&chosen[1..])
                .map(|(&r, &c)| if c { r - 1 } else { r })
                .collect();
            let sub = self.count(col + 1, &next_pool, &next_pending);
            if !sub.is_zero() {
                *total += sub * weight;
            }
            return;
        }
        if v == 0 {
            return;
        }
        let avail_below: u32 = pooled[1..v].iter().map(|&c| c as u32).sum();
        let c = pooled[v] as u32;
        let lo = left.saturating_sub(avail_below);
        let hi = c.min(left);
        for x in lo..=hi {
            take[v] = x as u8;
            let w = weight * binom_u64(c, x);
            self.pick_pooled(col, pooled, pending, chosen, take, v - 1, left - x, w, total);
        }
        take[v] = 0;
    }
}

/// The number of loop-free digraphs with out-degrees s and in-degrees t
/// (square 0/1 matrices with zero diagonal and margins (s, t)).
pub fn count_dig_g(ds: &DegreeSequence) -> Result<CountResult> {
    check_margins(ds, true)?;
    let n = ds.shape().n();
    if n > u8::MAX as usize {
        return Err(Error::capacity("more than 255 vertices"));
    }
    // Relabel vertices so that columns come in descending demand; the count
    // is invariant under a simultaneous permutation of s and t.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| ds.t()[b].cmp(&ds.t()[a]).then(a.cmp(&b)));
    let cols: Vec<u32> = order.iter().map(|&v| ds.t()[v]).collect();
    let pending: Vec<u8> = order.iter().map(|&v| ds.s()[v] as u8).collect();
    let mut dp = DigraphDp {
        cols,
        max_value: n,
        memo: HashMap::new(),
    };
    let pooled = vec![0u8; n + 1];
    Ok(CountResult {
        value: dp.count(0, &pooled, &pending),
        method: CountMethod::Dp,
        sum_mismatch: false,
    })
}

/// Dispatches to [`count_g`] or [`count_dig_g`] by shape.
pub fn count(ds: &DegreeSequence) -> Result<CountResult> {
    if ds.shape().loops_forbidden() {
        count_dig_g(ds)
    } else {
        count_g(ds)
    }
}

/// Memoises counts across many pmf evaluations on the same shape.
#[derive(Debug, Default)]
pub struct CountCache {
    map: HashMap<Vec<u32>, BigUint>,
}

impl CountCache {
    pub fn new() -> Self {
        Self::default()
    }

    fn key(ds: &DegreeSequence) -> Vec<u32> {
        if ds.shape().loops_forbidden() {
            let mut pairs: Vec<(u32, u32)> = ds.s().iter().copied().zip(ds.t().iter().copied()).collect();
            pairs.sort_unstable();
            pairs.into_iter().flat_map(|(a, b)| [a, b]).collect()
        } else {
            let (mut s, t) = ds.canonical();
            s.push(u32::MAX);
            s.extend(t);
            s
        }
    }

    pub fn count(&mut self, ds: &DegreeSequence) -> Result<BigUint> {
        let key = Self::key(ds);
        if let Some(v) = self.map.get(&key) {
            return Ok(v.clone());
        }
        let v = count(ds)?.value;
        self.map.insert(key, v.clone());
        Ok(v)
    }
}

fn big(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

fn rat_binom(n: u64, k: u64) -> BigRational {
    big(&binomial(n, k))
}

fn pow(x: &BigRational, e: u64) -> BigRational {
    Pow::pow(x, e as u32)
}

fn binom_product(cap: u32, xs: &[u32]) -> BigUint {
    xs.iter().fold(BigUint::one(), |acc, &x| acc * binomial(cap as u64, x as u64))
}

/// Probability that the two side sums of `Ip` coincide:
/// the sum over k of C(N,k)^2 p^(2k) q^(2N-2k), with N the cell count.
///
/// Exact for rational p up to [`SUM_MATCH_EXACT_MAX_CELLS`] cells, log-space
/// beyond.
pub fn sum_match_prob(shape: Shape, p: &crate::sampling::EdgeProb) -> Result<Probability> {
    let n_cells = shape.cell_count() as u64;
    match p.exact() {
        Some(r) if shape.cell_count() <= SUM_MATCH_EXACT_MAX_CELLS => {
            let a = r.numer().magnitude().clone();
            let b = r.denom().magnitude().clone();
            let c = &b - &a;
            let a2 = &a * &a;
            let c2 = &c * &c;
            // Horner-style accumulation of sum_k C(N,k)^2 a^(2k) c^(2(N-k)).
            let mut acc = BigUint::ZERO;
            let mut a_pow = BigUint::one();
            let mut coef = BigUint::one();
            for k in 0..=n_cells {
                if k > 0 {
                    coef = coef * (n_cells - k + 1) / k;
                    a_pow *= &a2;
                }
                acc = acc * &c2 + &coef * &coef * &a_pow;
            }
            let denom = Pow::pow(&b, (2 * n_cells) as u32);
            Ok(Probability::Exact(BigRational::new(acc.into(), denom.into())))
        }
        _ => Ok(Probability::from_ln(ln_sum_match_prob(n_cells, p.value()))),
    }
}

/// Log-space version of [`sum_match_prob`] for N cells.
pub fn ln_sum_match_prob(n_cells: u64, p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    let (lp, lq) = (p.ln(), (1.0 - p).ln());
    let terms: Vec<f64> = (0..=n_cells)
        .map(|k| {
            2.0 * ln_binomial(n_cells, k) + 2.0 * k as f64 * lp + 2.0 * (n_cells - k) as f64 * lq
        })
        .collect();
    log_sum_exp(&terms)
}

fn exact_p(model: &ModelSpec) -> Result<(BigRational, BigRational)> {
    let p = model
        .p()
        .and_then(|p| p.exact())
        .ok_or_else(|| Error::domain("exact pmf needs a rational p"))?;
    let q = BigRational::one() - &p;
    Ok((p, q))
}

/// Exact rational probability of `ds` under `model`.
pub fn exact_pmf(model: &ModelSpec, ds: &DegreeSequence) -> Result<Probability> {
    exact_pmf_cached(model, ds, &mut CountCache::new())
}

pub fn exact_pmf_cached(
    model: &ModelSpec,
    ds: &DegreeSequence,
    cache: &mut CountCache,
) -> Result<Probability> {
    let shape = model.shape();
    if ds.shape() != shape {
        return Err(Error::domain(format!(
            "degree sequence shape {} differs from model shape {shape}",
            ds.shape()
        )));
    }
    let family = model.family();
    if family == Family::Vp {
        return Err(Error::Unsupported(
            "the integrated model has no exact pmf; use the log-space engine".into(),
        ));
    }
    if family.is_graph() && shape.cell_count() > EXACT_PMF_MAX_CELLS {
        return Err(Error::capacity(format!(
            "exact graph pmf limited to {EXACT_PMF_MAX_CELLS} cells, shape has {}",
            shape.cell_count()
        )));
    }
    let n_cells = shape.cell_count() as u64;
    let row_cap = shape.row_capacity();
    let col_cap = shape.col_capacity();
    let zero = || Ok(Probability::zero());
    let value = match (family, model.param()) {
        (Family::Ip, _) => {
            let (p, q) = exact_p(model)?;
            let total = ds.row_sum() + ds.col_sum();
            pow(&p, total)
                * pow(&q, 2 * n_cells - total)
                * big(&binom_product(row_cap, ds.s()))
                * big(&binom_product(col_cap, ds.t()))
        }
        _ if !ds.is_joint_valid() => return zero(),
        (Family::Gp, _) => {
            let (p, q) = exact_p(model)?;
            let k = ds.row_sum();
            pow(&p, k) * pow(&q, n_cells - k) * big(&cache.count(ds)?)
        }
        (Family::Gk, ModelParam::K(k)) => {
            if ds.row_sum() != *k {
                return zero();
            }
            big(&cache.count(ds)?) / rat_binom(n_cells, *k)
        }
        (Family::Gt, ModelParam::T(t)) => {
            if ds.t() != &t[..] {
                return zero();
            }
            big(&cache.count(ds)?) / big(&binom_product(col_cap, t))
        }
        (Family::Bp, _) => {
            let (p, q) = exact_p(model)?;
            let k = ds.row_sum();
            let ip = pow(&p, 2 * k)
                * pow(&q, 2 * n_cells - 2 * k)
                * big(&binom_product(row_cap, ds.s()))
                * big(&binom_product(col_cap, ds.t()));
            let denom = sum_match_prob(shape, model.p().unwrap())?;
            let denom = denom
                .exact()
                .cloned()
                .ok_or_else(|| Error::capacity("normaliser beyond the exact range"))?;
            ip / denom
        }
        (Family::Bk, ModelParam::K(k)) => {
            if ds.row_sum() != *k {
                return zero();
            }
            let c = rat_binom(n_cells, *k);
            big(&binom_product(row_cap, ds.s())) * big(&binom_product(col_cap, ds.t())) / (&c * &c)
        }
        (Family::Bt, ModelParam::T(t)) => {
            if ds.t() != &t[..] {
                return zero();
            }
            big(&binom_product(row_cap, ds.s())) / rat_binom(n_cells, ds.row_sum())
        }
        _ => unreachable!("ModelSpec::new validates family/parameter pairs"),
    };
    Ok(Probability::Exact(value))
}

/// Calls `f` on every vector in `[0, cap]^len`, in lexicographic order.
pub fn for_each_vector(len: usize, cap: u32, mut f: impl FnMut(&[u32])) {
    let mut v = vec![0u32; len];
    loop {
        f(&v);
        let mut idx = len;
        loop {
            if idx == 0 {
                return;
            }
            idx -= 1;
            if v[idx] < cap {
                v[idx] += 1;
                break;
            }
            v[idx] = 0;
        }
    }
}

/// Every point of the model's index set: all (s, t) for joint models, all s
/// with t fixed at the parameter for column-conditioned ones.
pub fn index_set(model: &ModelSpec) -> Vec<DegreeSequence> {
    let shape = model.shape();
    let mut out = Vec::new();
    match model.t() {
        Some(t) if model.family().is_column_conditioned() => {
            for_each_vector(shape.m(), shape.row_capacity(), |s| {
                out.push(DegreeSequence::new(shape, s.to_vec(), t.to_vec()).expect("in range"));
            });
        }
        _ => {
            let mut rows = Vec::new();
            for_each_vector(shape.m(), shape.row_capacity(), |s| rows.push(s.to_vec()));
            for s in &rows {
                for_each_vector(shape.n(), shape.col_capacity(), |t| {
                    out.push(DegreeSequence::new(shape, s.clone(), t.to_vec()).expect("in range"));
                });
            }
        }
    }
    out
}

/// Sum of the exact pmf over the full index set.
pub fn total_mass(model: &ModelSpec) -> Result<BigRational> {
    let mut cache = CountCache::new();
    let mut total = BigRational::zero();
    for ds in index_set(model) {
        let p = exact_pmf_cached(model, &ds, &mut cache)?;
        total += p.exact().expect("exact path");
    }
    Ok(total)
}
