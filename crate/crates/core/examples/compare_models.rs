//! Log probability ratios between a graph model and its binomial
//! counterpart over a range of sizes.

use bidegree::harness::{run_ratio_experiment, Experiment, ExperimentConfig};
use bidegree::models::CountProvider;
use bidegree::{EdgeProb, Family, ModelSpec, Shape};

fn main() -> bidegree::Result<()> {
    let gk = ModelSpec::with_k(Family::Gk, Shape::new(8, 8)?, 32)?;
    let cfg = ExperimentConfig::new(Experiment::Ratio)
        .model(gk)
        .trials(200)
        .seed(7)
        // exact counts get expensive quickly; the estimate is accurate at these densities
        .count_mode(CountProvider::Asymptotic)
        .sizes(vec![8, 16, 32]);
    let report = run_ratio_experiment(&cfg)?;
    for n in [8, 16, 32] {
        println!(
            "n {n:>2}: median |log ratio| {:.4}, 99% quantile {:.4}",
            report.summary_f64(&format!("n={n} median_abs_log_ratio")).unwrap(),
            report.summary_f64(&format!("n={n} q99_abs_log_ratio")).unwrap(),
        );
    }
    for v in &report.verdicts {
        println!("{}: {} ({})", v.name, if v.pass { "pass" } else { "fail" }, v.detail);
    }

    let gp = ModelSpec::with_p(Family::Gp, Shape::digraph(10)?, EdgeProb::ratio(2, 5)?)?;
    let report = run_ratio_experiment(&ExperimentConfig::new(Experiment::Ratio).model(gp).trials(100).seed(7).count_mode(CountProvider::Asymptotic))?;
    println!("digraph Gp vs Vp at n 10: median {:.4}", report.summary_f64("n=10 median_abs_log_ratio").unwrap());
    Ok(())
}
