//! Asymptotic enumeration estimates, the leading-order `Bp` pmf, and the
//! regularity statistics of a degree sequence.

use num_rational::Ratio;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::binom::ln_binomial;
use crate::domain::{density_lambda, DegreeSequence, Shape};
use crate::error::{Error, Result};

/// Log of an enumeration estimate together with its factors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnumerationEstimate {
    pub ln_estimate: f64,
    /// Log of the binomial product part.
    pub ln_main: f64,
    /// Normalised row variance.
    pub a: f64,
    /// Normalised column variance.
    pub b: f64,
    /// Normalised row/column covariance (loop-free shapes only).
    pub cross: Option<f64>,
}

fn kahan_sum(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut sum, mut comp) = (0.0f64, 0.0f64);
    for x in xs {
        let y = x - comp;
        let next = sum + y;
        comp = (next - sum) - y;
        sum = next;
    }
    sum
}

pub fn ln_binom_product(cap: u32, xs: &[u32]) -> f64 {
    kahan_sum(xs.iter().map(|&x| ln_binomial(cap as u64, x as u64)))
}

fn sum_sq(xs: &[u32]) -> u128 {
    xs.iter().map(|&x| (x as u128) * (x as u128)).sum()
}

/// Estimate of ln G(s, t) for an ε-regular bipartite degree sequence:
/// C(mn, k)^-1 prod C(n, s_i) prod C(m, t_j) exp(-(1-A)(1-B)/2).
pub fn estimate_log_g(ds: &DegreeSequence) -> Result<EnumerationEstimate> {
    let shape = ds.shape();
    if shape.loops_forbidden() {
        return Err(Error::domain("use estimate_log_dig_g for loop-free shapes"));
    }
    let k = ds.k()?;
    let (m, n) = (shape.m() as u128, shape.n() as u128);
    let cells = m * n;
    if k == 0 || k as u128 == cells {
        return Err(Error::Degenerate(format!(
            "density {k}/{cells}: the only realisation is the empty or full matrix"
        )));
    }
    let k128 = k as u128;
    let ln_main = -ln_binomial(cells as u64, k) + ln_binom_product(shape.n() as u32, ds.s())
        + ln_binom_product(shape.m() as u32, ds.t());
    // A = n (m sum s^2 - k^2) / (k (mn - k)), and symmetrically for B.
    let denom = (k128 * (cells - k128)) as f64;
    let a = (n * (m * sum_sq(ds.s()) - k128 * k128)) as f64 / denom;
    let b = (m * (n * sum_sq(ds.t()) - k128 * k128)) as f64 / denom;
    Ok(EnumerationEstimate {
        ln_estimate: ln_main - 0.5 * (1.0 - a) * (1.0 - b),
        ln_main,
        a,
        b,
        cross: None,
    })
}

/// Estimate of the log of the loop-free digraph count, with the additional
/// row/column covariance correction.
pub fn estimate_log_dig_g(ds: &DegreeSequence) -> Result<EnumerationEstimate> {
    let shape = ds.shape();
    if !shape.loops_forbidden() {
        return Err(Error::domain("use estimate_log_g for bipartite shapes"));
    }
    let k = ds.k()?;
    let n = shape.n() as u128;
    let k128 = k as u128;
    let allowed = n * n - n;
    if k128 > allowed {
        return Err(Error::domain(format!(
            "density {k}/{} is infeasible without loops",
            n * n
        )));
    }
    if k == 0 {
        return Err(Error::Degenerate("empty digraph".into()));
    }
    let cap = shape.n() as u32 - 1;
    let ln_main = -ln_binomial(allowed as u64, k) + ln_binom_product(cap, ds.s())
        + ln_binom_product(cap, ds.t());
    // lambda = k / n^2; every normalised sum has denominator k (n^2 - k) / n.
    let denom = (k128 * (n * n - k128)) as f64;
    let a = (n * (n * sum_sq(ds.s()) - k128 * k128)) as f64 / denom;
    let b = (n * (n * sum_sq(ds.t()) - k128 * k128)) as f64 / denom;
    let st: i128 = ds
        .s()
        .iter()
        .zip(ds.t())
        .map(|(&x, &y)| x as i128 * y as i128)
        .sum();
    let cross = (n as i128 * (n as i128 * st - (k128 * k128) as i128)) as f64 / denom;
    Ok(EnumerationEstimate {
        ln_estimate: ln_main - 0.5 * (1.0 - a) * (1.0 - b) - cross,
        ln_main,
        a,
        b,
        cross: Some(cross),
    })
}

/// Dispatches on the shape.
pub fn estimate_log_count(ds: &DegreeSequence) -> Result<EnumerationEstimate> {
    if ds.shape().loops_forbidden() {
        estimate_log_dig_g(ds)
    } else {
        estimate_log_g(ds)
    }
}

/// Leading-order log pmf of `Bp`:
/// ln[2 p^(2k) q^(2N-2k) sqrt(pi p q N) prod C prod C], N the cell count.
pub fn bpdenom_log_pmf(p: f64, ds: &DegreeSequence) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain(format!("p = {p} must lie in (0, 1)")));
    }
    if !ds.is_joint_valid() {
        return Ok(f64::NEG_INFINITY);
    }
    let shape = ds.shape();
    let cells = shape.cell_count() as f64;
    let k = ds.row_sum() as f64;
    let q = 1.0 - p;
    Ok(std::f64::consts::LN_2
        + 2.0 * k * p.ln()
        + 2.0 * (cells - k) * q.ln()
        + 0.5 * (std::f64::consts::PI * p * q * cells).ln()
        + ln_binom_product(shape.row_capacity(), ds.s())
        + ln_binom_product(shape.col_capacity(), ds.t()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegularityCheck {
    pub regular: bool,
    /// Bound minus the largest deviation; negative when the check fails.
    pub margin: f64,
}

/// True iff every entry lies within `c_reg * N^(1/2 + eps)` of the mean
/// (inclusive).
pub fn is_eps_regular(x: &[u32], eps: f64, c_reg: f64) -> RegularityCheck {
    let len = x.len().max(1) as f64;
    let mean = x.iter().map(|&v| v as f64).sum::<f64>() / len;
    let worst = x
        .iter()
        .map(|&v| (v as f64 - mean).abs())
        .fold(0.0f64, f64::max);
    let bound = c_reg * len.powf(0.5 + eps);
    RegularityCheck {
        regular: worst <= bound,
        margin: bound - worst,
    }
}

/// A degree pair is ε-regular when the sums agree and both sides are.
pub fn is_pair_eps_regular(ds: &DegreeSequence, eps: f64, c_reg: f64) -> bool {
    ds.is_joint_valid()
        && is_eps_regular(ds.s(), eps, c_reg).regular
        && is_eps_regular(ds.t(), eps, c_reg).regular
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AcceptabilityParams {
    pub a: f64,
    pub eps: f64,
    pub c_reg: f64,
}

impl Default for AcceptabilityParams {
    fn default() -> Self {
        AcceptabilityParams {
            a: 0.25,
            eps: 0.1,
            c_reg: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Acceptability {
    pub lhs: f64,
    pub rhs: f64,
    pub ok: bool,
}

/// The density/shape condition
/// (1-2x)^2 / (4x(1-x)) * (1 + 5m/6n + 5n/6m) < a log n.
///
/// Only this inequality is decidable for a single instance; the growth
/// conditions on m and n concern sequences of instances.
pub fn acceptability(m: usize, n: usize, x: f64, a: f64) -> Result<Acceptability> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::domain(format!("density {x} must lie in (0, 1)")));
    }
    if m < 2 || n < 2 {
        return Err(Error::domain("acceptability needs m, n >= 2"));
    }
    let (mf, nf) = (m as f64, n as f64);
    let shape_factor = 1.0 + 5.0 * mf / (6.0 * nf) + 5.0 * nf / (6.0 * mf);
    let lhs = (1.0 - 2.0 * x).powi(2) / (4.0 * x * (1.0 - x)) * shape_factor;
    let rhs = a * nf.ln();
    Ok(Acceptability {
        lhs,
        rhs,
        ok: lhs < rhs,
    })
}

/// Λ, the squared-deviation sums R_S and R_T, the square-shape cross term,
/// and the regularity flags of one degree sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityReport {
    pub lambda: Ratio<u64>,
    pub r_s: f64,
    pub r_t: f64,
    pub cross: Option<f64>,
    pub eps_regular_s: RegularityCheck,
    pub eps_regular_t: RegularityCheck,
    /// Left side of the acceptability inequality at x = Λ; `None` when Λ is 0 or 1.
    pub acceptability_lhs: Option<f64>,
}

impl RegularityReport {
    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64().unwrap()
    }

    /// R_S / (Λ(1-Λ)mn), undefined at Λ ∈ {0, 1}.
    pub fn normalised_r_s(&self, shape: Shape) -> Option<f64> {
        let l = self.lambda_f64();
        let denom = l * (1.0 - l) * (shape.m() * shape.n()) as f64;
        (denom > 0.0).then(|| self.r_s / denom)
    }

    pub fn normalised_r_t(&self, shape: Shape) -> Option<f64> {
        let l = self.lambda_f64();
        let denom = l * (1.0 - l) * (shape.m() * shape.n()) as f64;
        (denom > 0.0).then(|| self.r_t / denom)
    }
}

pub fn degree_stats(ds: &DegreeSequence, params: &AcceptabilityParams) -> Result<RegularityReport> {
    let lambda = density_lambda(ds)?;
    let shape = ds.shape();
    let (m, n) = (shape.m() as i128, shape.n() as i128);
    let k = ds.row_sum() as i128;
    // Integer numerators: m R_S = m sum s^2 - k^2, n R_T = n sum t^2 - k^2.
    let r_s = (m * sum_sq(ds.s()) as i128 - k * k) as f64 / m as f64;
    let r_t = (n * sum_sq(ds.t()) as i128 - k * k) as f64 / n as f64;
    let cross = (m == n).then(|| {
        let st: i128 = ds.s().iter().zip(ds.t()).map(|(&a, &b)| a as i128 * b as i128).sum();
        (n * st - k * k) as f64 / n as f64
    });
    let l = lambda.to_f64().unwrap();
    let acceptability_lhs = if l > 0.0 && l < 1.0 && shape.m() >= 2 && shape.n() >= 2 {
        Some(acceptability(shape.m(), shape.n(), l, params.a)?.lhs)
    } else {
        None
    };
    Ok(RegularityReport {
        lambda,
        r_s,
        r_t,
        cross,
        eps_regular_s: is_eps_regular(ds.s(), params.eps, params.c_reg),
        eps_regular_t: is_eps_regular(ds.t(), params.eps, params.c_reg),
        acceptability_lhs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(m: usize, n: usize, s: &[u32], t: &[u32]) -> DegreeSequence {
        DegreeSequence::new(Shape::new(m, n).unwrap(), s.to_vec(), t.to_vec()).unwrap()
    }

    fn dig(s: &[u32], t: &[u32]) -> DegreeSequence {
        DegreeSequence::new(Shape::digraph(s.len()).unwrap(), s.to_vec(), t.to_vec()).unwrap()
    }

    #[test]
    fn four_by_four_regular_estimate() {
        let e = estimate_log_g(&ds(4, 4, &[2; 4], &[2; 4])).unwrap();
        assert_eq!(e.a, 0.0);
        assert_eq!(e.b, 0.0);
        // 6^8 / C(16, 8) * e^(-1/2)
        let expect = 1_679_616.0f64 / 12_870.0 * (-0.5f64).exp();
        assert!((e.ln_estimate.exp() - expect).abs() < 1e-9);
        assert!((e.ln_estimate.exp() - 79.16).abs() < 0.01);
    }

    #[test]
    fn three_vertex_digraph_estimate() {
        let e = estimate_log_dig_g(&dig(&[1, 1, 1], &[1, 1, 1])).unwrap();
        let expect = 64.0f64 / 20.0 * (-0.5f64).exp();
        assert!((e.ln_estimate.exp() - expect).abs() < 1e-12);
        assert!((e.ln_estimate.exp() - 1.941).abs() < 1e-3);
    }

    #[test]
    fn cross_equals_a_when_s_equals_t() {
        let e = estimate_log_dig_g(&dig(&[3, 1, 2, 2], &[3, 1, 2, 2])).unwrap();
        assert!((e.cross.unwrap() - e.a).abs() < 1e-15);
    }

    #[test]
    fn degenerate_density() {
        assert!(matches!(
            estimate_log_g(&ds(2, 2, &[0, 0], &[0, 0])),
            Err(Error::Degenerate(_))
        ));
        assert!(matches!(
            estimate_log_g(&ds(2, 2, &[2, 2], &[2, 2])),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn regularity_predicate() {
        assert!(is_eps_regular(&[4, 4, 4, 4], 0.01, 0.001).regular);
        let spike = is_eps_regular(&[0, 0, 0, 100], 0.1, 1.0);
        assert!(!spike.regular);
        assert!(spike.margin < 0.0);
        // N = 4, eps = 0.5: bound = c * 4 = 3 when c = 0.75; deviation of [0, 6, 3, 3] is 3.
        let edge = is_eps_regular(&[0, 6, 3, 3], 0.5, 0.75);
        assert!(edge.regular);
        assert_eq!(edge.margin, 0.0);
    }

    #[test]
    fn acceptability_values() {
        assert_eq!(acceptability(10, 10, 0.5, 0.1).unwrap().lhs, 0.0);
        assert!(acceptability(10, 10, 0.5, 0.1).unwrap().ok);
        let r = acceptability(100, 100, 0.1, 0.3).unwrap();
        assert!((r.lhs - 0.64 / 0.36 * 8.0 / 3.0).abs() < 1e-12);
        assert!((r.lhs - 4.7407).abs() < 1e-4);
        assert!((r.rhs - 1.3816).abs() < 1e-4);
        assert!(!r.ok);
        assert!(acceptability(10, 10, 1.0, 0.3).is_err());
        // shape factor is 8/3 on square shapes
        let r = acceptability(7, 7, 0.25, 1.0).unwrap();
        assert!((r.lhs - 0.25 / 0.75 * 8.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn degree_stats_examples() {
        let p = AcceptabilityParams::default();
        let full = degree_stats(&ds(2, 3, &[3, 3], &[2, 2, 2]), &p).unwrap();
        assert_eq!(full.lambda, Ratio::from_integer(1));
        assert_eq!((full.r_s, full.r_t), (0.0, 0.0));
        assert!(full.acceptability_lhs.is_none());

        let id = degree_stats(&ds(2, 2, &[1, 1], &[1, 1]), &p).unwrap();
        assert_eq!(id.lambda, Ratio::new(1, 2));
        assert_eq!(id.r_s, 0.0);

        let r = degree_stats(&ds(2, 2, &[2, 0], &[1, 1]), &p).unwrap();
        assert_eq!(r.lambda, Ratio::new(1, 2));
        assert_eq!((r.r_s, r.r_t, r.cross), (2.0, 0.0, Some(0.0)));

        let rect = degree_stats(&ds(2, 3, &[2, 1], &[1, 1, 1]), &p).unwrap();
        assert!(rect.cross.is_none());
    }

    #[test]
    fn bpdenom_complement_symmetry() {
        let a = bpdenom_log_pmf(0.5, &ds(2, 3, &[2, 1], &[1, 2, 0])).unwrap();
        let b = bpdenom_log_pmf(0.5, &ds(2, 3, &[1, 2], &[1, 0, 2])).unwrap();
        assert!((a - b).abs() < 1e-12);
        assert_eq!(
            bpdenom_log_pmf(0.5, &ds(2, 2, &[1, 1], &[1, 0])).unwrap(),
            f64::NEG_INFINITY
        );
    }
}
