//! Adaptive Gauss–Legendre quadrature.

use std::sync::OnceLock;

const ORDER: usize = 16;
const MAX_DEPTH: u32 = 40;

/// Nodes and weights on [-1, 1], from Newton iteration on P_n.
fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = ORDER;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut deriv = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let kf = k as f64;
                    let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                    p0 = p1;
                    p1 = p2;
                }
                deriv = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / deriv;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * deriv * deriv);
            nodes[i] = x;
            nodes[n - 1 - i] = -x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        (nodes, weights)
    })
}

pub(crate) fn gauss_legendre(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    nodes
        .iter()
        .zip(weights)
        .map(|(&x, &w)| w * f(mid + half * x))
        .sum::<f64>()
        * half
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    /// Sum of the accepted panels' |coarse - refined| differences.
    pub error: f64,
    pub converged: bool,
}

/// Integrates `f` over [a, b], bisecting panels until each panel's two-half
/// estimate agrees with its whole-panel estimate to within its share of
/// `rel_tol` times the integral.
pub fn integrate(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> QuadResult {
    if b <= a {
        return QuadResult {
            value: 0.0,
            error: 0.0,
            converged: true,
        };
    }
    const START_PANELS: usize = 8;
    let width = (b - a) / START_PANELS as f64;
    let panels: Vec<(f64, f64, f64)> = (0..START_PANELS)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == START_PANELS { b } else { lo + width };
            (lo, hi, gauss_legendre(&mut f, lo, hi))
        })
        .collect();
    let scale: f64 = panels.iter().map(|p| p.2.abs()).sum();
    let abs_tol = rel_tol * scale;
    let mut out = QuadResult {
        value: 0.0,
        error: 0.0,
        converged: true,
    };
    let mut stack: Vec<(f64, f64, f64, u32)> = panels.into_iter().map(|(lo, hi, v)| (lo, hi, v, 0)).collect();
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = gauss_legendre(&mut f, lo, mid);
        let right = gauss_legendre(&mut f, mid, hi);
        let diff = (left + right - whole).abs();
        let share = abs_tol * (hi - lo) / (b - a);
        if diff <= share || diff <= 1e-300 {
            out.value += left + right;
            out.error += diff;
        } else if depth >= MAX_DEPTH {
            out.value += left + right;
            out.error += diff;
            out.converged = false;
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two() {
        let (nodes, weights) = rule();
        assert!((weights.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        assert!(nodes.iter().all(|x| x.abs() < 1.0));
    }

    #[test]
    fn polynomials_are_exact() {
        // Degree 31 is integrated exactly by a 16-point rule.
        let v = gauss_legendre(&mut |x: f64| x.powi(30), 0.0, 1.0);
        assert!((v - 1.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn gaussian_integral() {
        let sigma = 1e-3;
        let r = integrate(
            |x| (-(x - 0.5f64).powi(2) / (2.0 * sigma * sigma)).exp(),
            0.0,
            1.0,
            1e-12,
        );
        let expect = sigma * (2.0 * std::f64::consts::PI).sqrt();
        assert!(r.converged);
        assert!(((r.value - expect) / expect).abs() < 1e-11);
    }
}
