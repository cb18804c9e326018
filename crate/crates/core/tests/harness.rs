use bidegree::harness::{
    expectation_target, log_ratio, read_samples_jsonl, run, run_concentration, run_enum_accuracy, run_normalization,
    run_ratio_experiment, run_tv_exact, validate_pair, write_samples_jsonl, Experiment, ExperimentConfig,
    OutputFormat, RStatistic,
};
use bidegree::models::CountProvider;
use bidegree::sampling::sample_degree_stream;
use bidegree::{DegreeSequence, EdgeProb, Error, Family, ModelSpec, Shape};

fn sq(n: usize) -> Shape {
    Shape::new(n, n).unwrap()
}

fn tv_of(d: ModelSpec, d_prime: ModelSpec) -> (f64, String) {
    let r = run_tv_exact(&ExperimentConfig::new(Experiment::TvExact).model(d).model_prime(d_prime)).unwrap();
    assert!(r.passed(), "summation orders disagree");
    let exact = r.summary_value("tv_rational").map(|v| v.as_str().unwrap().to_string()).unwrap_or_default();
    (r.summary_f64("tv").unwrap(), exact)
}

#[test]
fn tiny_log_ratios() {
    let ds = DegreeSequence::new(sq(2), vec![1, 1], vec![1, 1]).unwrap();
    let gk = ModelSpec::with_k(Family::Gk, sq(2), 2).unwrap();
    let bk = ModelSpec::with_k(Family::Bk, sq(2), 2).unwrap();
    let r = log_ratio(&gk, &bk, &ds, CountProvider::Exact).unwrap();
    assert!((r - 0.75f64.ln()).abs() < 1e-12);

    let gt = ModelSpec::with_t(Family::Gt, sq(2), vec![1, 1]).unwrap();
    let bt = ModelSpec::with_t(Family::Bt, sq(2), vec![1, 1]).unwrap();
    let r = log_ratio(&gt, &bt, &ds, CountProvider::Exact).unwrap();
    assert!((r - 0.75f64.ln()).abs() < 1e-12);
}

#[test]
fn only_matched_pairs_are_compared() {
    let gk = ModelSpec::with_k(Family::Gk, sq(3), 4).unwrap();
    let bp = ModelSpec::with_p(Family::Bp, sq(3), EdgeProb::ratio(1, 2).unwrap()).unwrap();
    assert!(matches!(validate_pair(&gk, &bp), Err(Error::Config(_))));
    let cfg = ExperimentConfig::new(Experiment::Ratio).model(gk).model_prime(bp).trials(5);
    assert!(matches!(run_ratio_experiment(&cfg), Err(Error::Config(_))));
    let ip = ModelSpec::with_p(Family::Ip, sq(3), EdgeProb::ratio(1, 2).unwrap()).unwrap();
    let cfg = ExperimentConfig::new(Experiment::Ratio).model(ip).trials(5);
    assert!(matches!(run_ratio_experiment(&cfg), Err(Error::Config(_))));
}

#[test]
fn ratio_rows_and_summary() {
    let gp = ModelSpec::with_p(Family::Gp, Shape::digraph(4).unwrap(), EdgeProb::ratio(1, 2).unwrap()).unwrap();
    let cfg = ExperimentConfig::new(Experiment::Ratio).model(gp).trials(40).seed(3);
    let r = run_ratio_experiment(&cfg).unwrap();
    assert_eq!(r.rows.len(), 40);
    assert!(r.summary_f64("n=4 median_abs_log_ratio").unwrap().is_finite());
    assert!(r.summary_f64("n=4 q99_abs_log_ratio").unwrap() >= r.summary_f64("n=4 median_abs_log_ratio").unwrap());
    assert!(r.verdicts.is_empty());
}

#[test]
fn tv_examples() {
    let gk = ModelSpec::with_k(Family::Gk, sq(2), 2).unwrap();
    let bk = ModelSpec::with_k(Family::Bk, sq(2), 2).unwrap();
    assert_eq!(tv_of(gk.clone(), gk.clone()).0, 0.0);

    // Gk puts 1/3 on (11,11) and 1/6 on each of (20,11),(02,11),(11,20),(11,02);
    // Bk puts 4/9 on (11,11), 1/9 on those four and 1/36 on the four corners.
    // TV = (1/9 + 4/18 + 4/36) / 2.
    let (tv, exact) = tv_of(gk.clone(), bk.clone());
    assert_eq!(exact, "2/9");
    assert!((tv - 2.0 / 9.0).abs() < 1e-15);
    assert_eq!(tv_of(bk, gk).1, "2/9");

    let gk0 = ModelSpec::with_k(Family::Gk, sq(2), 0).unwrap();
    let bk0 = ModelSpec::with_k(Family::Bk, sq(2), 0).unwrap();
    assert_eq!(tv_of(gk0, bk0).0, 0.0);
}

#[test]
fn tv_float_path_and_capacity() {
    let p = EdgeProb::ratio(1, 2).unwrap();
    let gp = ModelSpec::with_p(Family::Gp, Shape::new(2, 3).unwrap(), p.clone()).unwrap();
    let vp = ModelSpec::with_p(Family::Vp, Shape::new(2, 3).unwrap(), p.clone()).unwrap();
    let (ab, _) = tv_of(gp.clone(), vp.clone());
    let (ba, _) = tv_of(vp, gp);
    assert!(ab > 0.0 && (ab - ba).abs() < 1e-15);

    let big = ModelSpec::with_p(Family::Gp, sq(4), p).unwrap();
    let cfg = ExperimentConfig::new(Experiment::TvExact).model(big);
    assert!(matches!(run_tv_exact(&cfg), Err(Error::Capacity(_))));
}

#[test]
fn expectation_targets() {
    let p = EdgeProb::parse_decimal("0.3").unwrap();
    let gp = ModelSpec::with_p(Family::Gp, Shape::new(30, 40).unwrap(), p.clone()).unwrap();
    let (stat, target) = expectation_target(&gp).unwrap();
    assert_eq!(stat, RStatistic::RowSquares);
    assert!((target - 243.6).abs() < 1e-9);
    let dig = ModelSpec::with_p(Family::Gp, Shape::digraph(30).unwrap(), p).unwrap();
    assert!((expectation_target(&dig).unwrap().1 - 176.61).abs() < 1e-9);
    let gt = ModelSpec::with_t(Family::Gt, Shape::new(4, 2).unwrap(), vec![2, 2]).unwrap();
    assert_eq!(expectation_target(&gt).unwrap().1, 2.0);
    let bk = ModelSpec::with_k(Family::Bk, sq(3), 3).unwrap();
    assert!(matches!(expectation_target(&bk), Err(Error::Config(_))));
}

#[test]
fn gt_with_constant_t_has_no_column_spread() {
    let gt = ModelSpec::with_t(Family::Gt, Shape::new(6, 5).unwrap(), vec![3; 5]).unwrap();
    let cfg = ExperimentConfig::new(Experiment::Concentration).model(gt).trials(200).seed(1);
    let r = run_concentration(&cfg).unwrap();
    assert_eq!(r.summary_value("r_t_identically_zero"), Some(&serde_json::json!(true)));
}

#[test]
fn enumeration_rows() {
    let r = run_enum_accuracy(&ExperimentConfig::new(Experiment::EnumAccuracy).sizes(vec![4])).unwrap();
    assert_eq!(r.rows[0][r.column("exact_count").unwrap()], serde_json::json!("90"));
    let est = r.rows[0][r.column("estimate").unwrap()].as_f64().unwrap();
    assert!((est - 79.16).abs() < 0.01);

    let r = run_enum_accuracy(&ExperimentConfig::new(Experiment::EnumAccuracy).digraph(true).sizes(vec![3])).unwrap();
    assert_eq!(r.rows[0][r.column("exact_count").unwrap()], serde_json::json!("2"));
    let est = r.rows[0][r.column("estimate").unwrap()].as_f64().unwrap();
    assert!((est - 1.941).abs() < 1e-3);

    let cfg = ExperimentConfig::new(Experiment::EnumAccuracy).digraph(true).sizes(vec![40]);
    assert!(matches!(run_enum_accuracy(&cfg), Err(Error::Capacity(_))));
}

#[test]
fn normalization_examples() {
    let third = EdgeProb::ratio(1, 3).unwrap();
    for model in [
        ModelSpec::with_k(Family::Gk, sq(2), 2).unwrap(),
        ModelSpec::with_k(Family::Bk, sq(2), 2).unwrap(),
        ModelSpec::with_p(Family::Ip, sq(2), third).unwrap(),
    ] {
        let r = run_normalization(&ExperimentConfig::new(Experiment::Normalization).model(model)).unwrap();
        assert!(r.passed());
        assert_eq!(r.rows[0][2], serde_json::json!("1"));
    }
}

#[test]
fn csv_report_has_provenance_block() {
    let gk = ModelSpec::with_k(Family::Gk, sq(2), 2).unwrap();
    let mut cfg = ExperimentConfig::new(Experiment::TvExact).model(gk).seed(17);
    cfg.format = OutputFormat::Csv;
    let csv = run(&cfg).unwrap().render(OutputFormat::Csv).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("# experiment: tv_exact"));
    assert!(csv.contains("# seed: 17\n"));
    assert!(csv.contains("# verdict two summation orders agree: pass"));
    assert!(csv.lines().any(|l| l == "s,t,prob_d,prob_d_prime,abs_diff"));
}

#[test]
fn json_report_round_trips() {
    let gp = ModelSpec::with_p(Family::Gp, Shape::new(5, 6).unwrap(), EdgeProb::ratio(1, 4).unwrap()).unwrap();
    let cfg = ExperimentConfig::new(Experiment::ExpectationR).model(gp).trials(300).seed(2);
    let r = run(&cfg).unwrap();
    let text = r.to_json().unwrap();
    let back: bidegree::harness::ExperimentReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_json().unwrap(), text);
    assert_eq!(back.rows.len(), 300);
    assert_eq!(back.provenance.seed, 2);
    assert_eq!(back.provenance.config, cfg);
}

#[test]
fn samples_as_json_lines() {
    let gk = ModelSpec::with_k(Family::Gk, Shape::new(3, 4).unwrap(), 5).unwrap();
    let samples = sample_degree_stream(&gk, 4, 8).unwrap();
    let mut buf = Vec::new();
    write_samples_jsonl(&samples, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("{\"trial\":0,\"s\":["));
    let back = read_samples_jsonl(&text).unwrap();
    assert_eq!(back.len(), 4);
    for (r, (rec, ds)) in back.iter().zip(&samples).enumerate() {
        assert_eq!(rec.trial, r as u64);
        assert_eq!(rec.s, ds.s());
        assert_eq!(rec.t, ds.t());
        assert_eq!(rec.k, 5);
    }
}
