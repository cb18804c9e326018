//! Log-space probability engines for every model at any scale, the
//! integrated-model kernel and quadrature, and the mixing identities between
//! the graph models.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::asymptotics::{estimate_log_count, is_pair_eps_regular, ln_binom_product};
use crate::binom::{binomial, ln_binomial};
use crate::domain::{ln_biguint, DegreeSequence, Probability, Shape};
use crate::error::{Error, Result};
use crate::exact::{exact_pmf_cached, CountResult, index_set, ln_sum_match_prob, CountCache};
use crate::quad::integrate;
use crate::sampling::{EdgeProb, Family, ModelParam, ModelSpec};

/// Bipartite shapes with more cells than this are refused by the exact count provider.
pub const EXACT_COUNT_MAX_CELLS: usize = 256;
/// Loop-free shapes with more vertices than this are refused by the exact count provider.
pub const EXACT_DIGRAPH_MAX_N: usize = 12;

/// Exact count, refused with a capacity error beyond the provider's limits.
pub fn checked_count(ds: &DegreeSequence) -> Result<CountResult> {
    let shape = ds.shape();
    let too_big = if shape.loops_forbidden() {
        shape.n() > EXACT_DIGRAPH_MAX_N
    } else {
        shape.cell_count() > EXACT_COUNT_MAX_CELLS
    };
    if too_big {
        return Err(Error::capacity(format!("exact counting is not offered for shape {shape}")));
    }
    crate::exact::count(ds)
}

/// Where graph counts come from inside [`log_pmf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CountProvider {
    #[default]
    Exact,
    Asymptotic,
}

impl std::str::FromStr for CountProvider {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(CountProvider::Exact),
            "asymptotic" => Ok(CountProvider::Asymptotic),
            other => Err(Error::config(format!("unknown count mode '{other}'"))),
        }
    }
}

/// Default ε and regularity constant used to flag untrusted asymptotic counts.
const TRUST_EPS: f64 = 0.1;
const TRUST_C_REG: f64 = 3.0;

impl CountProvider {
    /// ln G(s, t) or its loop-free analogue, plus a warning when an
    /// asymptotic value is requested outside the regular regime.
    pub fn ln_count(self, ds: &DegreeSequence) -> Result<(f64, Option<String>)> {
        let shape = ds.shape();
        ds.k()?;
        match self {
            CountProvider::Exact => Ok((ln_biguint(&checked_count(ds)?.value), None)),
            CountProvider::Asymptotic => {
                let k = ds.row_sum() as usize;
                if k == 0 || k == shape.cell_count() {
                    return Ok((0.0, None));
                }
                let warning = (!is_pair_eps_regular(ds, TRUST_EPS, TRUST_C_REG)).then(|| {
                    format!("{ds} is not ε-regular (ε={TRUST_EPS}, C={TRUST_C_REG}); asymptotic count is untrusted")
                });
                Ok((estimate_log_count(ds)?.ln_estimate, warning))
            }
        }
    }
}

/// A log-space pmf value and any trust warning raised while computing it.
#[derive(Debug, Clone, PartialEq)]
pub struct LogPmf {
    pub prob: Probability,
    pub warning: Option<String>,
}

/// Log-space probability of `ds` under `model`.
pub fn log_pmf(model: &ModelSpec, ds: &DegreeSequence, counts: CountProvider) -> Result<Probability> {
    Ok(log_pmf_detailed(model, ds, counts)?.prob)
}

fn times_ln(count: f64, ln: f64) -> f64 {
    if count == 0.0 {
        0.0
    } else {
        count * ln
    }
}

pub fn log_pmf_detailed(model: &ModelSpec, ds: &DegreeSequence, counts: CountProvider) -> Result<LogPmf> {
    let shape = model.shape();
    if ds.shape() != shape {
        return Err(Error::domain(format!(
            "degree sequence shape {} differs from model shape {shape}",
            ds.shape()
        )));
    }
    let cells = shape.cell_count() as u64;
    let row_cap = shape.row_capacity();
    let col_cap = shape.col_capacity();
    let done = |ln: f64| {
        Ok(LogPmf {
            prob: Probability::from_ln(ln.min(0.0)),
            warning: None,
        })
    };
    let neg_inf = || done(f64::NEG_INFINITY);
    let lp = |p: &EdgeProb| (p.value().ln(), p.q().ln());

    match (model.family(), model.param()) {
        (Family::Ip, ModelParam::P(p)) => {
            let (lnp, lnq) = lp(p);
            let total = (ds.row_sum() + ds.col_sum()) as f64;
            done(times_ln(total, lnp)
                + times_ln(2.0 * cells as f64 - total, lnq)
                + ln_binom_product(row_cap, ds.s())
                + ln_binom_product(col_cap, ds.t()))
        }
        _ if !ds.is_joint_valid() => neg_inf(),
        (Family::Gp, ModelParam::P(p)) => {
            let (lnp, lnq) = lp(p);
            let k = ds.row_sum() as f64;
            let (ln_c, warning) = counts.ln_count(ds)?;
            Ok(LogPmf {
                prob: Probability::from_ln(
                    (times_ln(k, lnp) + times_ln(cells as f64 - k, lnq) + ln_c).min(0.0),
                ),
                warning,
            })
        }
        (Family::Gk, ModelParam::K(k)) => {
            if ds.row_sum() != *k {
                return neg_inf();
            }
            let (ln_c, warning) = counts.ln_count(ds)?;
            Ok(LogPmf {
                prob: Probability::from_ln((ln_c - ln_binomial(cells, *k)).min(0.0)),
                warning,
            })
        }
        (Family::Gt, ModelParam::T(t)) => {
            if ds.t() != &t[..] {
                return neg_inf();
            }
            let (ln_c, warning) = counts.ln_count(ds)?;
            Ok(LogPmf {
                prob: Probability::from_ln((ln_c - ln_binom_product(col_cap, t)).min(0.0)),
                warning,
            })
        }
        (Family::Bp, ModelParam::P(p)) => done(ln_bp_pmf(shape, p.value(), ds)),
        (Family::Bk, ModelParam::K(k)) => {
            if ds.row_sum() != *k {
                return neg_inf();
            }
            done(-2.0 * ln_binomial(cells, *k)
                + ln_binom_product(row_cap, ds.s())
                + ln_binom_product(col_cap, ds.t()))
        }
        (Family::Bt, ModelParam::T(t)) => {
            if ds.t() != &t[..] {
                return neg_inf();
            }
            done(-ln_binomial(cells, ds.row_sum()) + ln_binom_product(row_cap, ds.s()))
        }
        (Family::Vp, ModelParam::P(p)) => Ok(LogPmf {
            prob: vp_log_pmf(p.value(), ds, counts)?,
            warning: None,
        }),
        _ => unreachable!("ModelSpec::new validates family/parameter pairs"),
    }
}

/// ln Prob_{Bp}(s, t) for a joint-valid sequence at any real p in (0, 1).
fn ln_bp_pmf(shape: Shape, p: f64, ds: &DegreeSequence) -> f64 {
    if !ds.is_joint_valid() {
        return f64::NEG_INFINITY;
    }
    let cells = shape.cell_count() as f64;
    let k = ds.row_sum() as f64;
    times_ln(2.0 * k, p.ln()) + times_ln(2.0 * (cells - k), (1.0 - p).ln())
        + ln_binom_product(shape.row_capacity(), ds.s())
        + ln_binom_product(shape.col_capacity(), ds.t())
        - ln_sum_match_prob(shape.cell_count() as u64, p)
}

/// The mixing kernel: a normal density in p' with mean p and variance
/// pq/(2mn).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelParams {
    pub p: f64,
    pub shape: Shape,
}

impl KernelParams {
    pub fn new(p: f64, shape: Shape) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain(format!("p = {p} must lie in (0, 1)")));
        }
        Ok(KernelParams { p, shape })
    }

    fn mn(&self) -> f64 {
        (self.shape.m() * self.shape.n()) as f64
    }

    pub fn sigma(&self) -> f64 {
        (self.p * (1.0 - self.p) / (2.0 * self.mn())).sqrt()
    }

    pub fn ln_density(&self, p_prime: f64) -> f64 {
        let pq = self.p * (1.0 - self.p);
        0.5 * (self.mn() / (std::f64::consts::PI * pq)).ln()
            - self.mn() / pq * (p_prime - self.p).powi(2)
    }

    pub fn density(&self, p_prime: f64) -> f64 {
        self.ln_density(p_prime).exp()
    }

    /// Kernel mass on [0, 1].
    pub fn normalizer(&self) -> f64 {
        let sigma = self.sigma();
        let upper = (1.0 - self.p) / sigma;
        let lower = self.p / sigma;
        let s2 = std::f64::consts::SQRT_2;
        1.0 - 0.5 * erfc(upper / s2) - 0.5 * erfc(lower / s2)
    }
}

/// The kernel as a closure and its mass V(p) on [0, 1].
pub fn kernel_and_normalizer(kp: KernelParams) -> (impl Fn(f64) -> f64, f64) {
    (move |x| kp.density(x), kp.normalizer())
}

/// Relative error target of the integrated-model quadrature.
pub const VP_REL_TOL: f64 = 1e-8;
const WINDOW_SIGMAS: f64 = 10.0;

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// log of V(p)^-1 ∫_0^1 K_p(p') Prob_{Bp'}(s, t) dp'.
///
/// The integrand is log-concave in p'. It is rescaled by its maximum,
/// integrated over ±10 kernel standard deviations around that maximum, and
/// the two tails are bounded by `f(e) / |(ln f)'(e)|` at each window edge.
/// The count provider is accepted for interface symmetry; `Bp'` needs no
/// graph counts.
pub fn vp_log_pmf(p: f64, ds: &DegreeSequence, _counts: CountProvider) -> Result<Probability> {
    let kp = KernelParams::new(p, ds.shape())?;
    if !ds.is_joint_valid() {
        return Ok(Probability::from_ln(f64::NEG_INFINITY));
    }
    let shape = ds.shape();
    let cells = shape.cell_count() as u64;
    let k = ds.row_sum() as f64;
    let binoms = ln_binom_product(shape.row_capacity(), ds.s()) + ln_binom_product(shape.col_capacity(), ds.t());
    let log_integrand = |x: f64| {
        if x <= 0.0 || x >= 1.0 {
            return f64::NEG_INFINITY;
        }
        kp.ln_density(x)
            + times_ln(2.0 * k, x.ln())
            + times_ln(2.0 * (cells as f64 - k), (1.0 - x).ln())
            + binoms
            - ln_sum_match_prob(cells, x)
    };
    let result = integrate_log_concave(&log_integrand, &kp)?;
    let ln = result - kp.normalizer().ln();
    Ok(Probability::from_ln(ln.min(0.0)))
}

/// Returns ln ∫_0^1 exp(g(x)) dx for log-concave g concentrated near the kernel.
fn integrate_log_concave(g: &impl Fn(f64) -> f64, kp: &KernelParams) -> Result<f64> {
    let sigma = kp.sigma();
    let tiny = 1e-300;
    let search_lo = (kp.p - 40.0 * sigma).max(tiny);
    let search_hi = (kp.p + 40.0 * sigma).min(1.0 - 1e-16);
    let peak = golden_max(g, search_lo, search_hi);
    let g_peak = g(peak);
    if !g_peak.is_finite() {
        return Err(Error::Numeric {
            message: "integrand has no finite maximum".into(),
            achieved: f64::INFINITY,
        });
    }
    let lo = (peak - WINDOW_SIGMAS * sigma).max(0.0);
    let hi = (peak + WINDOW_SIGMAS * sigma).min(1.0);
    let scaled = |x: f64| (g(x) - g_peak).exp();
    let quad = integrate(scaled, lo, hi, 1e-10);

    let tail = |edge: f64, outward: f64| -> f64 {
        if edge <= 0.0 || edge >= 1.0 {
            return 0.0;
        }
        let h = 1e-6 * sigma;
        let slope = (g(edge + outward * h) - g(edge)) / h;
        let value = (g(edge) - g_peak).exp();
        if slope < 0.0 {
            value / -slope
        } else {
            f64::INFINITY
        }
    };
    let tails = tail(lo, -1.0) + tail(hi, 1.0);
    let achieved = (quad.error + tails) / quad.value;
    if !quad.converged || !(achieved <= VP_REL_TOL) {
        return Err(Error::Numeric {
            message: "integrated-model quadrature did not converge".into(),
            achieved,
        });
    }
    Ok(g_peak + quad.value.ln())
}

/// V(p)^-1 ∫_0^1 K_p(p') f(p') dp' for any integrable f.
pub fn transfer_expectation(p: f64, shape: Shape, f: impl Fn(f64) -> f64) -> Result<f64> {
    let kp = KernelParams::new(p, shape)?;
    let sigma = kp.sigma();
    let lo = (p - WINDOW_SIGMAS * sigma).max(0.0);
    let hi = (p + WINDOW_SIGMAS * sigma).min(1.0);
    let integrand = |x: f64| kp.density(x) * f(x);
    let abs_integrand = |x: f64| (kp.density(x) * f(x)).abs();
    let scale = integrate(abs_integrand, lo, hi, 1e-6).value.max(f64::MIN_POSITIVE);
    let mut value = 0.0;
    let mut error = 0.0;
    let mut converged = true;
    for (a, b) in [(0.0, lo), (lo, hi), (hi, 1.0)] {
        if b > a {
            let part = integrate(integrand, a, b, 1e-11);
            // Tail panels carry negligible mass; measure them against the main one.
            value += part.value;
            error += part.error;
            converged &= part.converged;
        }
    }
    let achieved = error / scale;
    if !converged || achieved > VP_REL_TOL {
        return Err(Error::Numeric {
            message: "kernel expectation did not converge".into(),
            achieved,
        });
    }
    Ok(value / kp.normalizer())
}

/// Variance transfer: V(p)^-1 ∫ K_p(p') (Var_{p'} + (E_V - E_{p'})^2) dp'.
pub fn transfer_variance(
    p: f64,
    shape: Shape,
    mean: impl Fn(f64) -> f64,
    variance: impl Fn(f64) -> f64,
) -> Result<f64> {
    let e_v = transfer_expectation(p, shape, &mean)?;
    transfer_expectation(p, shape, |x| variance(x) + (e_v - mean(x)).powi(2))
}

/// The three mixing/conditioning relations between the graph models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MixtureIdentity {
    /// Gp as a binomial mixture of Gk, and as a product-binomial mixture of Gt.
    Relp,
    /// Gk as Gp conditioned on K = k, and as a mixture of Gt.
    RelM,
    /// Gt as Gp or Gk conditioned on T = t.
    Relt,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureParams {
    pub p: EdgeProb,
    pub k: u64,
    pub t: Vec<u32>,
}

/// Largest cell count accepted by [`mixture_residual`].
pub const MIXTURE_MAX_CELLS: usize = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct MixtureResidual {
    pub max_abs: BigRational,
    pub points: usize,
}

impl MixtureResidual {
    pub fn max_abs_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.max_abs.to_f64().unwrap_or(f64::INFINITY)
    }
}

fn rat(x: &num_bigint::BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(x.clone()))
}

/// Evaluates both sides of a mixing identity at every point of the index
/// set on the exact rational path and returns the largest difference.
pub fn mixture_residual(identity: MixtureIdentity, shape: Shape, params: &MixtureParams) -> Result<MixtureResidual> {
    if shape.cell_count() > MIXTURE_MAX_CELLS {
        return Err(Error::capacity(format!(
            "mixture identities are enumerated only up to {MIXTURE_MAX_CELLS} cells"
        )));
    }
    let p = params
        .p
        .exact()
        .ok_or_else(|| Error::domain("mixture identities need a rational p"))?;
    let q = BigRational::one() - &p;
    let cells = shape.cell_count() as u64;
    let col_cap = shape.col_capacity() as u64;
    let gp = ModelSpec::with_p(Family::Gp, shape, params.p.clone())?;
    let mut cache = CountCache::new();
    let mut pmf = |model: &ModelSpec, ds: &DegreeSequence| -> Result<BigRational> {
        Ok(exact_pmf_cached(model, ds, &mut cache)?.exact().cloned().expect("exact path"))
    };
    let powi = |x: &BigRational, e: u64| num_traits::Pow::pow(x, e as u32);
    // Weight of column vector t under independent edges.
    let column_weight = |t: &[u32]| -> BigRational {
        t.iter().fold(BigRational::one(), |acc, &tj| {
            acc * rat(&binomial(col_cap, tj as u64)) * powi(&p, tj as u64) * powi(&q, col_cap - tj as u64)
        })
    };
    let mut worst = BigRational::zero();
    let mut points = 0usize;
    let mut note = |lhs: &BigRational, rhs: &BigRational| {
        let d = (lhs - rhs).abs();
        if d > worst {
            worst = d;
        }
    };

    match identity {
        MixtureIdentity::Relp => {
            let gks: Vec<ModelSpec> = (0..=cells)
                .map(|k| ModelSpec::with_k(Family::Gk, shape, k))
                .collect::<Result<_>>()?;
            for ds in index_set(&gp) {
                points += 1;
                let lhs = pmf(&gp, &ds)?;
                let mut via_k = BigRational::zero();
                for (k, gk) in gks.iter().enumerate() {
                    let w = rat(&binomial(cells, k as u64)) * powi(&p, k as u64) * powi(&q, cells - k as u64);
                    via_k += w * pmf(gk, &ds)?;
                }
                let gt = ModelSpec::with_t(Family::Gt, shape, ds.t().to_vec())?;
                let via_t = column_weight(ds.t()) * pmf(&gt, &ds)?;
                note(&lhs, &via_k);
                note(&lhs, &via_t);
            }
        }
        MixtureIdentity::RelM => {
            let k = params.k;
            let gk = ModelSpec::with_k(Family::Gk, shape, k)?;
            let all = index_set(&gp);
            let mut mass_k = BigRational::zero();
            for ds in all.iter().filter(|d| d.is_joint_valid() && d.row_sum() == k) {
                mass_k += pmf(&gp, ds)?;
            }
            let choose = rat(&binomial(cells, k));
            for ds in &all {
                points += 1;
                let lhs = pmf(&gk, ds)?;
                let conditioned = if ds.row_sum() == k {
                    pmf(&gp, ds)? / &mass_k
                } else {
                    BigRational::zero()
                };
                let mixed = if ds.col_sum() == k {
                    let gt = ModelSpec::with_t(Family::Gt, shape, ds.t().to_vec())?;
                    let w = ds
                        .t()
                        .iter()
                        .fold(BigRational::one(), |acc, &tj| acc * rat(&binomial(col_cap, tj as u64)))
                        / &choose;
                    w * pmf(&gt, ds)?
                } else {
                    BigRational::zero()
                };
                note(&lhs, &conditioned);
                note(&lhs, &mixed);
            }
        }
        MixtureIdentity::Relt => {
            let t = params.t.clone();
            let k: u64 = t.iter().map(|&x| x as u64).sum();
            let gt = ModelSpec::with_t(Family::Gt, shape, t.clone())?;
            let gk = ModelSpec::with_k(Family::Gk, shape, k)?;
            let rows = index_set(&gt);
            let mut marg_p = BigRational::zero();
            let mut marg_k = BigRational::zero();
            for ds in &rows {
                marg_p += pmf(&gp, ds)?;
                marg_k += pmf(&gk, ds)?;
            }
            if marg_p.is_zero() || marg_k.is_zero() {
                return Err(Error::domain("column vector t has zero probability"));
            }
            for ds in &rows {
                points += 1;
                let lhs = pmf(&gt, ds)?;
                note(&lhs, &(pmf(&gp, ds)? / &marg_p));
                note(&lhs, &(pmf(&gk, ds)? / &marg_k));
            }
        }
    }
    Ok(MixtureResidual {
        max_abs: worst,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(m: usize, n: usize, s: &[u32], t: &[u32]) -> DegreeSequence {
        DegreeSequence::new(Shape::new(m, n).unwrap(), s.to_vec(), t.to_vec()).unwrap()
    }

    #[test]
    fn ip_single_cell() {
        let sh = Shape::new(1, 1).unwrap();
        let ip = ModelSpec::with_p(Family::Ip, sh, EdgeProb::from_f64(0.5).unwrap()).unwrap();
        let v = log_pmf(&ip, &ds(1, 1, &[1], &[0]), CountProvider::Exact).unwrap();
        assert!((v.ln() - 0.25f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn bk_matches_rational_value() {
        let sh = Shape::new(2, 2).unwrap();
        let bk = ModelSpec::with_k(Family::Bk, sh, 2).unwrap();
        let v = log_pmf(&bk, &ds(2, 2, &[1, 1], &[1, 1]), CountProvider::Exact).unwrap();
        assert!((v.ln() - (4.0f64 / 9.0).ln()).abs() < 1e-12);
    }

    #[test]
    fn mismatched_sums_are_impossible() {
        let sh = Shape::new(2, 2).unwrap();
        let d = ds(2, 2, &[1, 1], &[1, 0]);
        let p = EdgeProb::from_f64(0.4).unwrap();
        for model in [
            ModelSpec::with_p(Family::Gp, sh, p.clone()).unwrap(),
            ModelSpec::with_p(Family::Bp, sh, p.clone()).unwrap(),
            ModelSpec::with_p(Family::Vp, sh, p).unwrap(),
            ModelSpec::with_k(Family::Gk, sh, 2).unwrap(),
            ModelSpec::with_k(Family::Bk, sh, 2).unwrap(),
        ] {
            assert_eq!(log_pmf(&model, &d, CountProvider::Exact).unwrap().ln(), f64::NEG_INFINITY);
        }
    }

    #[test]
    fn kernel_values() {
        let kp = KernelParams::new(0.5, Shape::new(10, 10).unwrap()).unwrap();
        assert!((kp.density(0.5) - (400.0 / std::f64::consts::PI).sqrt()).abs() < 1e-12);
        assert!((kp.density(0.5) - 11.28379).abs() < 1e-5);
        for d in [0.001, 0.01, 0.05] {
            assert!((kp.density(0.5 + d) - kp.density(0.5 - d)).abs() < 1e-12);
        }
        let (f, v) = kernel_and_normalizer(kp);
        assert!(v <= 1.0 && v >= 1.0 - 1e-6);
        assert_eq!(f(0.5), kp.density(0.5));
    }

    #[test]
    fn normalizer_against_quadrature() {
        let kp = KernelParams::new(0.1, Shape::new(1, 2).unwrap()).unwrap();
        let direct = integrate(|x| kp.density(x), 0.0, 1.0, 1e-13).value;
        assert!((direct - kp.normalizer()).abs() < 1e-12);
        assert!(kp.normalizer() < 0.9);
    }

    #[test]
    fn transfer_constants() {
        let sh = Shape::new(3, 4).unwrap();
        assert!((transfer_expectation(0.3, sh, |_| 1.0).unwrap() - 1.0).abs() < 1e-10);
        assert!((transfer_expectation(0.3, sh, |_| 2.5).unwrap() - 2.5).abs() < 1e-9);
    }

    #[test]
    fn vp_complement_symmetry() {
        let p = 0.5;
        let a = vp_log_pmf(p, &ds(2, 3, &[2, 1], &[1, 2, 0]), CountProvider::Exact).unwrap();
        let b = vp_log_pmf(p, &ds(2, 3, &[1, 2], &[1, 0, 2]), CountProvider::Exact).unwrap();
        assert!((a.ln() - b.ln()).abs() < 1e-9);
    }

    #[test]
    fn mixture_identities_small() {
        let sh = Shape::new(2, 2).unwrap();
        let params = MixtureParams {
            p: EdgeProb::ratio(1, 3).unwrap(),
            k: 2,
            t: vec![1, 1],
        };
        for id in [MixtureIdentity::Relp, MixtureIdentity::RelM, MixtureIdentity::Relt] {
            let r = mixture_residual(id, sh, &params).unwrap();
            assert!(r.max_abs.is_zero(), "{id:?}");
            assert!(r.points > 0);
        }
        assert!(matches!(
            mixture_residual(MixtureIdentity::Relp, Shape::new(4, 4).unwrap(), &params),
            Err(Error::Capacity(_))
        ));
    }
}
