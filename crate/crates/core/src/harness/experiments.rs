use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use super::config::{paired_model, rescale, validate_pair, Experiment, ExperimentConfig};
use super::report::ExperimentReport;
use super::stats::{quantile, strictly_decreasing, Summary};
use crate::asymptotics::{degree_stats, estimate_log_count, is_pair_eps_regular};
use crate::domain::{ln_biguint, DegreeSequence, Shape};
use crate::error::{Error, Result};
use crate::exact::{count, exact_pmf_cached, index_set, CountCache};
use crate::models::{log_pmf, log_pmf_detailed, CountProvider, EXACT_COUNT_MAX_CELLS, EXACT_DIGRAPH_MAX_N, MIXTURE_MAX_CELLS};
use crate::sampling::{sample_degree_stream, Family, ModelParam, ModelSpec};

/// Standard errors allowed between a Monte Carlo mean and its exact target.
pub const SE_TOLERANCE: f64 = 4.0;
/// Required fraction of ε-regular samples.
pub const REGULAR_FRACTION: f64 = 0.99;

pub fn run(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    match cfg.experiment {
        Experiment::Ratio => run_ratio_experiment(cfg),
        Experiment::TvExact => run_tv_exact(cfg),
        Experiment::Concentration => run_concentration(cfg),
        Experiment::ExpectationR => run_expectation_r(cfg),
        Experiment::EnumAccuracy => run_enum_accuracy(cfg),
        Experiment::Normalization => run_normalization(cfg),
    }
}

fn csv_ints(xs: &[u32]) -> String {
    xs.iter().map(u32::to_string).collect::<Vec<_>>().join(",")
}

/// ln Prob_D(s, t) - ln Prob_D'(s, t).
pub fn log_ratio(d: &ModelSpec, d_prime: &ModelSpec, ds: &DegreeSequence, counts: CountProvider) -> Result<f64> {
    Ok(log_pmf(d, ds, counts)?.ln() - log_pmf(d_prime, ds, counts)?.ln())
}

fn check_cfg_experiment(cfg: &ExperimentConfig, want: Experiment) -> Result<()> {
    if cfg.experiment != want {
        return Err(Error::config(format!(
            "configuration is for {}, not {}",
            cfg.experiment.name(),
            want.name()
        )));
    }
    Ok(())
}

pub fn run_ratio_experiment(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_cfg_experiment(cfg, Experiment::Ratio)?;
    let base = cfg.require_model()?;
    let base_prime = match &cfg.model_prime {
        Some(p) => p.clone(),
        None => paired_model(base)?,
    };
    validate_pair(base, &base_prime)?;
    let trials = cfg.require_trials()?;
    let models: Vec<ModelSpec> = if cfg.sizes.is_empty() {
        vec![base.clone()]
    } else {
        cfg.sizes.iter().map(|&n| rescale(base, n)).collect::<Result<_>>()?
    };

    let mut report = ExperimentReport::new(
        cfg,
        &["n", "trial", "k", "s", "t", "ln_prob_d", "ln_prob_d_prime", "log_ratio", "untrusted"],
    );
    let mut medians = Vec::new();
    for model in &models {
        let prime = paired_model(model)?;
        let n = model.shape().n();
        let samples = sample_degree_stream(model, trials, cfg.seed)?;
        let evaluated: Vec<(f64, f64, bool)> = samples
            .par_iter()
            .map(|ds| {
                let d = log_pmf_detailed(model, ds, cfg.count_mode)?;
                let dp = log_pmf(&prime, ds, cfg.count_mode)?;
                Ok((d.prob.ln(), dp.ln(), d.warning.is_some()))
            })
            .collect::<Result<_>>()?;
        let mut abs = Vec::with_capacity(trials);
        for (r, (ds, (ld, ldp, warned))) in samples.iter().zip(&evaluated).enumerate() {
            let ratio = ld - ldp;
            abs.push(ratio.abs());
            report.push_row(vec![
                json!(n),
                json!(r),
                json!(ds.row_sum()),
                json!(csv_ints(ds.s())),
                json!(csv_ints(ds.t())),
                json!(ld),
                json!(ldp),
                json!(ratio),
                json!(warned),
            ]);
        }
        let s = Summary::of(&abs);
        report.note(format!("n={n} model"), model.to_string());
        report.note(format!("n={n} model_prime"), prime.to_string());
        report.note(format!("n={n} mean_abs_log_ratio"), s.mean);
        report.note(format!("n={n} median_abs_log_ratio"), s.median);
        report.note(format!("n={n} q99_abs_log_ratio"), quantile(&abs, 0.99));
        report.note(format!("n={n} max_abs_log_ratio"), s.max);
        report.note(format!("n={n} std_err_abs_log_ratio"), s.std_err);
        medians.push(s.median);
    }
    if medians.len() >= 2 {
        report.verdict(
            "median |log ratio| strictly decreasing in n",
            strictly_decreasing(&medians),
            format!("medians {medians:?} over sizes {:?}", cfg.sizes),
        );
    }
    Ok(report)
}

fn rational_available(model: &ModelSpec) -> bool {
    model.family() != Family::Vp && model.p().is_none_or(|p| p.exact().is_some())
}

fn require_tiny(shape: Shape) -> Result<()> {
    if shape.cell_count() > MIXTURE_MAX_CELLS {
        return Err(Error::capacity(format!(
            "exact enumeration is limited to {MIXTURE_MAX_CELLS} cells; shape {shape} has {}",
            shape.cell_count()
        )));
    }
    Ok(())
}

pub fn run_tv_exact(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_cfg_experiment(cfg, Experiment::TvExact)?;
    let d = cfg.require_model()?;
    let d_prime = match &cfg.model_prime {
        Some(p) => p.clone(),
        None => paired_model(d)?,
    };
    if d.shape() != d_prime.shape() {
        return Err(Error::config("tv_exact needs both models on one shape"));
    }
    require_tiny(d.shape())?;
    let points = index_set(d);
    if points != index_set(&d_prime) {
        return Err(Error::config(format!("{d} and {d_prime} have different index sets")));
    }
    let mut report = ExperimentReport::new(cfg, &["s", "t", "prob_d", "prob_d_prime", "abs_diff"]);
    let rational = rational_available(d) && rational_available(&d_prime);
    let (tv_forward, tv_one_sided): (f64, f64);
    if rational {
        let mut cache = CountCache::new();
        let mut probs = Vec::with_capacity(points.len());
        for ds in &points {
            let a = exact_pmf_cached(d, ds, &mut cache)?.exact().cloned().expect("rational");
            let b = exact_pmf_cached(&d_prime, ds, &mut cache)?.exact().cloned().expect("rational");
            probs.push((a, b));
        }
        let half = BigRational::new(1.into(), 2.into());
        let forward = probs
            .iter()
            .fold(BigRational::zero(), |acc, (a, b)| acc + (a - b).abs())
            * &half;
        let one_sided = probs.iter().rev().fold(BigRational::zero(), |acc, (a, b)| {
            if a > b {
                acc + (a - b)
            } else {
                acc
            }
        });
        for (ds, (a, b)) in points.iter().zip(&probs) {
            report.push_row(vec![
                json!(csv_ints(ds.s())),
                json!(csv_ints(ds.t())),
                json!(a.to_string()),
                json!(b.to_string()),
                json!((a - b).abs().to_string()),
            ]);
        }
        report.note("tv_rational", forward.to_string());
        report.verdict(
            "two summation orders agree",
            forward == one_sided,
            format!("half absolute sum {forward}, reversed positive-part sum {one_sided}"),
        );
        tv_forward = ratio_f64(&forward);
        tv_one_sided = ratio_f64(&one_sided);
    } else {
        let probs: Vec<(f64, f64)> = points
            .par_iter()
            .map(|ds| Ok((log_pmf(d, ds, cfg.count_mode)?.value(), log_pmf(&d_prime, ds, cfg.count_mode)?.value())))
            .collect::<Result<_>>()?;
        tv_forward = 0.5 * probs.iter().map(|(a, b)| (a - b).abs()).sum::<f64>();
        tv_one_sided = probs.iter().rev().map(|(a, b)| (a - b).max(0.0)).sum::<f64>();
        for (ds, (a, b)) in points.iter().zip(&probs) {
            report.push_row(vec![
                json!(csv_ints(ds.s())),
                json!(csv_ints(ds.t())),
                json!(a),
                json!(b),
                json!((a - b).abs()),
            ]);
        }
        report.verdict(
            "two summation orders agree",
            (tv_forward - tv_one_sided).abs() <= 1e-9,
            format!("half absolute sum {tv_forward:e}, reversed positive-part sum {tv_one_sided:e}"),
        );
    }
    report.note("model", d.to_string());
    report.note("model_prime", d_prime.to_string());
    report.note("tv", tv_forward);
    report.note("tv_one_sided", tv_one_sided);
    report.note("exact_rational", rational);
    Ok(report)
}

fn ratio_f64(x: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap_or(f64::NAN)
}

/// The statistic tracked by the expectation experiment and its exact mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RStatistic {
    /// Σ(S_i - nΛ)².
    RowSquares,
    /// Σ(S_i - k/n)(t_i - k/n) on loop-free shapes.
    Cross,
}

/// Exact expectation of R (or of the cross term for loop-free G_t).
pub fn expectation_target(model: &ModelSpec) -> Result<(RStatistic, f64)> {
    let shape = model.shape();
    let (m, n) = (shape.m() as f64, shape.n() as f64);
    match (model.family(), model.param(), shape.loops_forbidden()) {
        (Family::Gp, ModelParam::P(p), false) => Ok((RStatistic::RowSquares, p.value() * p.q() * (m - 1.0) * n)),
        (Family::Gp, ModelParam::P(p), true) => Ok((RStatistic::RowSquares, p.value() * p.q() * (n - 1.0).powi(2))),
        (Family::Gt, ModelParam::T(t), false) => {
            let sum: f64 = t.iter().map(|&tj| tj as f64 * (m - tj as f64)).sum();
            Ok((RStatistic::RowSquares, sum / m))
        }
        (Family::Gt, ModelParam::T(t), true) => {
            let mean = t.iter().map(|&x| x as f64).sum::<f64>() / n;
            let sum: f64 = t.iter().map(|&tj| (tj as f64 - mean).powi(2)).sum();
            Ok((RStatistic::Cross, -sum / (n - 1.0)))
        }
        _ => Err(Error::config(format!(
            "no exact expectation of R is recorded for {model}; use G_p, G_t or their loop-free forms"
        ))),
    }
}

pub fn run_expectation_r(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_cfg_experiment(cfg, Experiment::ExpectationR)?;
    let model = cfg.require_model()?;
    let (stat, target) = expectation_target(model)?;
    let samples = sample_degree_stream(model, cfg.require_trials()?, cfg.seed)?;
    let values: Vec<f64> = samples
        .par_iter()
        .map(|ds| {
            let r = degree_stats(ds, &cfg.regularity)?;
            Ok(match stat {
                RStatistic::RowSquares => r.r_s,
                RStatistic::Cross => r.cross.expect("square shape"),
            })
        })
        .collect::<Result<_>>()?;
    let name = match stat {
        RStatistic::RowSquares => "r_s",
        RStatistic::Cross => "cross",
    };
    let mut report = ExperimentReport::new(cfg, &["trial", "k", name]);
    for (r, (ds, v)) in samples.iter().zip(&values).enumerate() {
        report.push_row(vec![json!(r), json!(ds.row_sum()), json!(v)]);
    }
    let s = Summary::of(&values);
    let z = (s.mean - target) / s.std_err;
    report.note("model", model.to_string());
    report.note("statistic", name);
    report.note("target", target);
    report.note("mean", s.mean);
    report.note("median", s.median);
    report.note("max", s.max);
    report.note("std_err", s.std_err);
    report.note("z", z);
    report.verdict(
        format!("mean of {name} within {SE_TOLERANCE} standard errors of target"),
        (s.mean - target).abs() <= SE_TOLERANCE * s.std_err,
        format!("mean {:.6} target {target:.6} std_err {:.6}", s.mean, s.std_err),
    );
    Ok(report)
}

pub fn run_concentration(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_cfg_experiment(cfg, Experiment::Concentration)?;
    let model = cfg.require_model()?;
    let shape = model.shape();
    let samples = sample_degree_stream(model, cfg.require_trials()?, cfg.seed)?;
    let params = cfg.regularity;
    let stats: Vec<(bool, Option<f64>, Option<f64>, Option<f64>, f64)> = samples
        .par_iter()
        .map(|ds| {
            let regular = is_pair_eps_regular(ds, params.eps, params.c_reg);
            if !ds.is_joint_valid() {
                return Ok((regular, None, None, None, f64::NAN));
            }
            let r = degree_stats(ds, &params)?;
            Ok((regular, r.normalised_r_s(shape), r.normalised_r_t(shape), r.cross, r.r_t))
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new(
        cfg,
        &["trial", "k", "eps_regular", "r_s_normalised", "r_t_normalised", "cross"],
    );
    for (r, (ds, (reg, rs, rt, cross, _))) in samples.iter().zip(&stats).enumerate() {
        report.push_row(vec![json!(r), json!(ds.row_sum()), json!(reg), json!(rs), json!(rt), json!(cross)]);
    }
    let total = stats.len() as f64;
    let regular = stats.iter().filter(|s| s.0).count() as f64 / total;
    let collect = |f: fn(&(bool, Option<f64>, Option<f64>, Option<f64>, f64)) -> Option<f64>| {
        stats.iter().filter_map(f).collect::<Vec<f64>>()
    };
    let rs = Summary::of(&collect(|s| s.1));
    let rt = Summary::of(&collect(|s| s.2));
    report.note("model", model.to_string());
    report.note("eps", params.eps);
    report.note("c_reg", params.c_reg);
    report.note("regular_fraction", regular);
    report.note("r_s_normalised_mean", rs.mean);
    report.note("r_s_normalised_median", rs.median);
    report.note("r_s_normalised_std_err", rs.std_err);
    report.note("r_s_deviation_from_one", (rs.mean - 1.0).abs());
    if model.family().is_column_conditioned() {
        let constant_zero = stats.iter().all(|s| s.4 == 0.0);
        report.note("r_t_identically_zero", constant_zero);
    } else {
        report.note("r_t_normalised_mean", rt.mean);
        report.note("r_t_deviation_from_one", (rt.mean - 1.0).abs());
    }
    report.verdict(
        format!("eps-regular fraction >= {REGULAR_FRACTION}"),
        regular >= REGULAR_FRACTION,
        format!("fraction {regular} over {} samples", stats.len()),
    );
    if let Ok((RStatistic::Cross, target)) = expectation_target(model) {
        let cs = Summary::of(&collect(|s| s.3));
        report.note("cross_target", target);
        report.note("cross_mean", cs.mean);
        report.note("cross_std_err", cs.std_err);
        report.verdict(
            format!("mean cross within {SE_TOLERANCE} standard errors of target"),
            (cs.mean - target).abs() <= SE_TOLERANCE * cs.std_err,
            format!("mean {:.6} target {target:.6} std_err {:.6}", cs.mean, cs.std_err),
        );
    }
    Ok(report)
}

/// The λ = 1/2 regular sequence on an n×n or n-vertex loop-free shape,
/// with every degree ⌊n/2⌋.
pub fn half_regular(n: usize, digraph: bool) -> Result<DegreeSequence> {
    let shape = if digraph { Shape::digraph(n)? } else { Shape::new(n, n)? };
    let d = (n / 2) as u32;
    DegreeSequence::new(shape, vec![d; n], vec![d; n])
}

pub fn run_enum_accuracy(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_cfg_experiment(cfg, Experiment::EnumAccuracy)?;
    let digraph = cfg.model.as_ref().map_or(cfg.digraph, |m| m.shape().loops_forbidden());
    let sizes = if cfg.sizes.is_empty() {
        if digraph {
            vec![3, 4, 6, 8]
        } else {
            vec![4, 6, 8, 10]
        }
    } else {
        cfg.sizes.clone()
    };
    for &n in &sizes {
        let too_big = if digraph { n > EXACT_DIGRAPH_MAX_N } else { n * n > EXACT_COUNT_MAX_CELLS };
        if too_big || n < 2 {
            return Err(Error::capacity(format!("exact counting is not offered at n = {n}")));
        }
    }
    let rows: Vec<(usize, u32, String, f64, f64)> = sizes
        .par_iter()
        .map(|&n| {
            let ds = half_regular(n, digraph)?;
            let exact = count(&ds)?.value;
            let est = estimate_log_count(&ds)?;
            Ok((n, ds.s()[0], exact.to_string(), ln_biguint(&exact), est.ln_estimate))
        })
        .collect::<Result<_>>()?;
    let mut report = ExperimentReport::new(
        cfg,
        &["n", "degree", "exact_count", "ln_exact", "ln_estimate", "estimate", "abs_diff"],
    );
    let mut diffs = Vec::new();
    for (n, d, exact, ln_exact, ln_est) in rows {
        let diff = (ln_exact - ln_est).abs();
        diffs.push(diff);
        report.push_row(vec![
            json!(n),
            json!(d),
            json!(exact),
            json!(ln_exact),
            json!(ln_est),
            json!(ln_est.exp()),
            json!(diff),
        ]);
    }
    report.note("digraph", digraph);
    report.note("sizes", Value::from(sizes.clone()));
    report.verdict(
        "|ln exact - ln estimate| strictly decreasing in n",
        strictly_decreasing(&diffs),
        format!("differences {diffs:?}"),
    );
    Ok(report)
}

/// Relative tolerance for models whose pmf has no rational form.
const FLOAT_MASS_TOL: f64 = 1e-8;

pub fn run_normalization(cfg: &ExperimentConfig) -> Result<ExperimentReport> {
    check_cfg_experiment(cfg, Experiment::Normalization)?;
    let mut models = vec![cfg.require_model()?.clone()];
    models.extend(cfg.model_prime.clone());
    let mut report = ExperimentReport::new(cfg, &["model", "points", "total_mass", "exact_rational", "pass"]);
    for model in &models {
        require_tiny(model.shape())?;
        let points = index_set(model);
        let (text, pass, rational) = if rational_available(model) {
            let mut cache = CountCache::new();
            let mut total = BigRational::zero();
            for ds in &points {
                total += exact_pmf_cached(model, ds, &mut cache)?.exact().expect("rational");
            }
            let ok = total.is_one();
            (total.to_string(), ok, true)
        } else {
            let values: Vec<f64> = points
                .par_iter()
                .map(|ds| Ok(log_pmf(model, ds, cfg.count_mode)?.value()))
                .collect::<Result<_>>()?;
            let total: f64 = values.iter().sum();
            (format!("{total}"), (total - 1.0).abs() <= FLOAT_MASS_TOL, false)
        };
        report.push_row(vec![
            json!(model.to_string()),
            json!(points.len()),
            json!(text),
            json!(rational),
            json!(pass),
        ]);
        report.verdict(format!("{model} sums to 1"), pass, format!("total {text}"));
    }
    Ok(report)
}
