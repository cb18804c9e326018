//! Exact and log-space binomial coefficients.

use std::sync::OnceLock;

use num_bigint::BigUint;
use num_traits::One;

const PASCAL_ROWS: usize = 160;
const LN_FACT_TABLE: usize = 4096;

fn pascal() -> &'static Vec<Vec<BigUint>> {
    static TABLE: OnceLock<Vec<Vec<BigUint>>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(PASCAL_ROWS);
        rows.push(vec![BigUint::one()]);
        for r in 1..PASCAL_ROWS {
            let prev = &rows[r - 1];
            let mut row = Vec::with_capacity(r + 1);
            row.push(BigUint::one());
            for c in 1..r {
                row.push(&prev[c - 1] + &prev[c]);
            }
            row.push(BigUint::one());
            rows.push(row);
        }
        rows
    })
}

/// C(n, k) as a big integer; zero when k > n.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    if (n as usize) < PASCAL_ROWS {
        return pascal()[n as usize][k as usize].clone();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

fn ln_fact_table() -> &'static Vec<f64> {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = Vec::with_capacity(LN_FACT_TABLE);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        out.push(0.0);
        for i in 1..LN_FACT_TABLE {
            let y = (i as f64).ln() - comp;
            let next = sum + y;
            comp = (next - sum) - y;
            sum = next;
            out.push(sum);
        }
        out
    })
}

/// ln(n!).
pub fn ln_factorial(n: u64) -> f64 {
    if (n as usize) < LN_FACT_TABLE {
        return ln_fact_table()[n as usize];
    }
    // Stirling series; the truncation error is far below f64 resolution here.
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    x * x.ln() - x
        + 0.5 * (2.0 * std::f64::consts::PI * x).ln()
        + inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 / 1260.0))
}

/// ln C(n, k); `-inf` when k > n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::ln_biguint;

    #[test]
    fn small_values() {
        assert_eq!(binomial(4, 2), BigUint::from(6u8));
        assert_eq!(binomial(16, 8), BigUint::from(12870u32));
        assert_eq!(binomial(3, 5), BigUint::ZERO);
        assert_eq!(binomial(200, 0), BigUint::one());
    }

    #[test]
    fn large_binomial_matches_recurrence() {
        let a = binomial(300, 150);
        let b = binomial(299, 149) + binomial(299, 150);
        assert_eq!(a, b);
    }

    #[test]
    fn ln_binomial_matches_exact() {
        for &(n, k) in &[(10u64, 3u64), (100, 50), (5000, 2500), (4095, 17), (4096, 2048)] {
            let exact = ln_biguint(&binomial(n, k));
            let approx = ln_binomial(n, k);
            assert!(
                (exact - approx).abs() <= 1e-12 * exact.abs().max(1.0),
                "n={n} k={k}: {exact} vs {approx}"
            );
        }
        assert_eq!(ln_binomial(2, 3), f64::NEG_INFINITY);
    }

    #[test]
    fn stirling_branch_is_continuous() {
        let below = ln_factorial(4095) + (4096f64).ln();
        assert!((below - ln_factorial(4096)).abs() < 1e-9);
    }
}
