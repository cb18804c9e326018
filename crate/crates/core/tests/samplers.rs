use std::collections::HashMap;

use bidegree::exact::index_set;
use bidegree::harness::stats::chi_squared_gof;
use bidegree::models::{log_pmf, CountProvider};
use bidegree::sampling::{sample_degree_stream, sample_kernel, RngStream};
use bidegree::{EdgeProb, Family, ModelSpec, Shape};

fn fit(model: &ModelSpec, draws: usize, seed: u64) -> f64 {
    let mut idx = HashMap::new();
    let mut probs = Vec::new();
    for ds in index_set(model) {
        let p = log_pmf(model, &ds, CountProvider::Exact).unwrap().value();
        if p > 0.0 {
            idx.insert((ds.s().to_vec(), ds.t().to_vec()), probs.len());
            probs.push(p);
        }
    }
    let mut observed = vec![0u64; probs.len()];
    for ds in sample_degree_stream(model, draws, seed).unwrap() {
        let i = idx.get(&(ds.s().to_vec(), ds.t().to_vec())).expect("sample outside the support");
        observed[*i] += 1;
    }
    chi_squared_gof(&observed, &probs).p_value
}

#[test]
fn binomial_family_samplers_fit_their_pmfs() {
    let p = EdgeProb::parse_decimal("0.35").unwrap();
    for shape in [Shape::new(2, 3).unwrap(), Shape::digraph(3).unwrap()] {
        let models = [
            ModelSpec::with_p(Family::Ip, shape, p.clone()).unwrap(),
            ModelSpec::with_p(Family::Bp, shape, p.clone()).unwrap(),
            ModelSpec::with_p(Family::Vp, shape, p.clone()).unwrap(),
            ModelSpec::with_k(Family::Bk, shape, 3).unwrap(),
            ModelSpec::with_t(Family::Bt, shape, vec![1, 2, 0]).unwrap(),
        ];
        for model in models {
            let pv = fit(&model, 20_000, 21);
            assert!(pv >= 1e-3, "{model}: p-value {pv}");
        }
    }
}

#[test]
fn kernel_draws_have_the_kernel_spread() {
    let shape = Shape::new(5, 8).unwrap();
    let mut rng = RngStream::new(4, 0).rng();
    let xs: Vec<f64> = (0..50_000).map(|_| sample_kernel(shape, 0.5, &mut rng)).collect();
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / xs.len() as f64;
    let sigma2 = 0.25 / 80.0;
    assert!((mean - 0.5).abs() < 4.0 * (sigma2 / xs.len() as f64).sqrt());
    assert!((var / sigma2 - 1.0).abs() < 0.03);
}

#[test]
fn streams_do_not_depend_on_thread_count() {
    let model = ModelSpec::with_k(Family::Gk, Shape::new(6, 7).unwrap(), 20).unwrap();
    let parallel = sample_degree_stream(&model, 64, 99).unwrap();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let serial = pool.install(|| sample_degree_stream(&model, 64, 99).unwrap());
    assert_eq!(parallel, serial);
}
