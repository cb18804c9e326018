use bidegree::asymptotics::estimate_log_g;
use bidegree::exact::{brute_force_count, count, exact_pmf};
use bidegree::models::{log_pmf, CountProvider};
use bidegree::{DegreeSequence, EdgeProb, Family, ModelSpec, Shape};
use proptest::prelude::*;

/// Random joint-valid margins on an m×n shape, built from a random matrix.
fn margins(max_side: usize) -> impl Strategy<Value = (usize, usize, Vec<bool>)> {
    (1..=max_side, 1..=max_side).prop_flat_map(|(m, n)| (Just(m), Just(n), proptest::collection::vec(any::<bool>(), m * n)))
}

fn degrees(m: usize, n: usize, bits: &[bool], loops_forbidden: bool) -> DegreeSequence {
    let shape = Shape::with_loops(m, n, loops_forbidden).unwrap();
    let mut s = vec![0u32; m];
    let mut t = vec![0u32; n];
    for i in 0..m {
        for j in 0..n {
            if bits[i * n + j] && shape.is_allowed(i, j) {
                s[i] += 1;
                t[j] += 1;
            }
        }
    }
    DegreeSequence::new(shape, s, t).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn transposed_counts_agree((m, n, bits) in margins(6)) {
        let ds = degrees(m, n, &bits, false);
        let tr = DegreeSequence::new(Shape::new(n, m).unwrap(), ds.t().to_vec(), ds.s().to_vec()).unwrap();
        prop_assert_eq!(count(&ds).unwrap().value, count(&tr).unwrap().value);
    }

    #[test]
    fn counts_ignore_row_and_column_order((m, n, bits) in margins(6), rot in 0usize..6) {
        let ds = degrees(m, n, &bits, false);
        let mut s = ds.s().to_vec();
        let mut t = ds.t().to_vec();
        s.rotate_left(rot % m);
        t.reverse();
        let moved = DegreeSequence::new(ds.shape(), s, t).unwrap();
        prop_assert_eq!(count(&ds).unwrap().value, count(&moved).unwrap().value);
    }

    #[test]
    fn digraph_counts_match_brute_force(n in 2usize..=5, bits in proptest::collection::vec(any::<bool>(), 25)) {
        let ds = degrees(n, n, &bits[..n * n], true);
        prop_assert_eq!(count(&ds).unwrap().value, brute_force_count(&ds).unwrap().value);
    }

    #[test]
    fn digraph_counts_ignore_simultaneous_relabelling(n in 2usize..=7, bits in proptest::collection::vec(any::<bool>(), 49), rot in 0usize..7) {
        let ds = degrees(n, n, &bits[..n * n], true);
        let mut s = ds.s().to_vec();
        let mut t = ds.t().to_vec();
        s.rotate_left(rot % n);
        t.rotate_left(rot % n);
        let moved = DegreeSequence::new(ds.shape(), s, t).unwrap();
        prop_assert_eq!(count(&ds).unwrap().value, count(&moved).unwrap().value);
    }

    #[test]
    fn estimate_is_complement_invariant((m, n, bits) in margins(7)) {
        let ds = degrees(m, n, &bits, false);
        let k = ds.row_sum() as usize;
        prop_assume!(k > 0 && k < m * n);
        let comp = DegreeSequence::new(
            ds.shape(),
            ds.s().iter().map(|&x| n as u32 - x).collect(),
            ds.t().iter().map(|&x| m as u32 - x).collect(),
        ).unwrap();
        let a = estimate_log_g(&ds).unwrap();
        let b = estimate_log_g(&comp).unwrap();
        prop_assert!((a.ln_estimate - b.ln_estimate).abs() < 1e-9);
        prop_assert!((a.a - b.a).abs() < 1e-12 && (a.b - b.b).abs() < 1e-12);
    }

    #[test]
    fn log_path_matches_rational_path((m, n, bits) in margins(3), num in 1i64..10) {
        let ds = degrees(m, n, &bits, false);
        let p = EdgeProb::ratio(num, 10).unwrap();
        let k = ds.row_sum();
        for model in [
            ModelSpec::with_p(Family::Gp, ds.shape(), p.clone()).unwrap(),
            ModelSpec::with_p(Family::Bp, ds.shape(), p.clone()).unwrap(),
            ModelSpec::with_k(Family::Bk, ds.shape(), k).unwrap(),
            ModelSpec::with_t(Family::Gt, ds.shape(), ds.t().to_vec()).unwrap(),
        ] {
            let exact = exact_pmf(&model, &ds).unwrap().value();
            let logp = log_pmf(&model, &ds, CountProvider::Exact).unwrap().ln();
            prop_assert!((logp - exact.ln()).abs() < 1e-11, "{} {}", model, ds);
        }
    }
}
