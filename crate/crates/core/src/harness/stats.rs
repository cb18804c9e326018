//! Summary statistics and goodness-of-fit.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// Mean, median, max and standard error of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
    pub std_err: f64,
}

impl Summary {
    /// Summarises the finite entries of `xs`, summing in index order.
    pub fn of(xs: &[f64]) -> Summary {
        let mut v: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
        let count = v.len();
        if count == 0 {
            return Summary {
                count,
                mean: f64::NAN,
                median: f64::NAN,
                max: f64::NAN,
                std_err: f64::NAN,
            };
        }
        let mean = v.iter().sum::<f64>() / count as f64;
        let var = if count > 1 {
            v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (count - 1) as f64
        } else {
            0.0
        };
        v.sort_by(f64::total_cmp);
        Summary {
            count,
            mean,
            median: quantile_sorted(&v, 0.5),
            max: v[count - 1],
            std_err: (var / count as f64).sqrt(),
        }
    }
}

/// Linear-interpolation quantile of already sorted data.
pub fn quantile_sorted(v: &[f64], q: f64) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn quantile(xs: &[f64], q: f64) -> f64 {
    let mut v: Vec<f64> = xs.iter().copied().filter(|x| x.is_finite()).collect();
    v.sort_by(f64::total_cmp);
    quantile_sorted(&v, q)
}

pub fn strictly_decreasing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GoodnessOfFit {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
}

/// Pearson chi-squared test of observed counts against cell probabilities.
///
/// Cells with expected count below 5 are pooled into a single cell before
/// the statistic is formed.
pub fn chi_squared_gof(observed: &[u64], probs: &[f64]) -> GoodnessOfFit {
    assert_eq!(observed.len(), probs.len());
    let total: u64 = observed.iter().sum();
    let n = total as f64;
    let mut cells: Vec<(f64, f64)> = Vec::new();
    let mut pooled = (0.0, 0.0);
    for (&o, &p) in observed.iter().zip(probs) {
        let e = p * n;
        if e < 5.0 {
            pooled.0 += o as f64;
            pooled.1 += e;
        } else {
            cells.push((o as f64, e));
        }
    }
    if pooled.1 > 0.0 || pooled.0 > 0.0 {
        cells.push(pooled);
    }
    let statistic: f64 = cells
        .iter()
        .map(|&(o, e)| if e > 0.0 { (o - e).powi(2) / e } else if o > 0.0 { f64::INFINITY } else { 0.0 })
        .sum();
    let dof = cells.len().saturating_sub(1);
    let p_value = if !statistic.is_finite() {
        0.0
    } else if dof == 0 {
        1.0
    } else {
        ChiSquared::new(dof as f64).expect("positive dof").sf(statistic)
    };
    GoodnessOfFit {
        statistic,
        dof,
        p_value,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_basics() {
        let s = Summary::of(&[1.0, 2.0, 3.0, 4.0, f64::NAN]);
        assert_eq!(s.count, 4);
        assert_eq!(s.mean, 2.5);
        assert_eq!(s.median, 2.5);
        assert_eq!(s.max, 4.0);
        assert!((s.std_err - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn quantiles() {
        let v: Vec<f64> = (0..=100).map(f64::from).collect();
        assert_eq!(quantile(&v, 0.99), 99.0);
        assert_eq!(quantile(&v, 0.0), 0.0);
    }

    #[test]
    fn gof_perfect_fit() {
        let g = chi_squared_gof(&[250, 250, 500], &[0.25, 0.25, 0.5]);
        assert_eq!(g.statistic, 0.0);
        assert_eq!(g.dof, 2);
        assert!((g.p_value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gof_rejects_bad_fit() {
        let g = chi_squared_gof(&[900, 100], &[0.5, 0.5]);
        assert!(g.p_value < 1e-10);
    }

    #[test]
    fn decreasing() {
        assert!(strictly_decreasing(&[3.0, 2.0, 1.0]));
        assert!(!strictly_decreasing(&[3.0, 3.0, 1.0]));
    }
}
