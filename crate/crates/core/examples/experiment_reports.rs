//! Running harness experiments and rendering their reports as JSON and CSV.

use bidegree::harness::{run, Experiment, ExperimentConfig, OutputFormat};
use bidegree::{Family, ModelSpec, Shape};

fn main() -> bidegree::Result<()> {
    let gk = ModelSpec::with_k(Family::Gk, Shape::new(2, 2)?, 2)?;
    let tv = run(&ExperimentConfig::new(Experiment::TvExact).model(gk.clone()))?;
    // the provenance block, then the rows where the two laws differ
    let csv = tv.render(OutputFormat::Csv)?;
    for line in csv.lines().filter(|l| l.starts_with('#') || !l.ends_with(",0")) {
        println!("{line}");
    }

    let norm = run(&ExperimentConfig::new(Experiment::Normalization).model(gk))?;
    println!("normalization passed: {}", norm.passed());

    let gt = ModelSpec::with_t(Family::Gt, Shape::new(12, 5)?, vec![3, 6, 9, 2, 6])?;
    let er = run(&ExperimentConfig::new(Experiment::ExpectationR).model(gt).trials(500).seed(3))?;
    let json: serde_json::Value = serde_json::from_str(&er.to_json()?).unwrap();
    println!("{}", serde_json::to_string_pretty(&json["summary"]).unwrap());

    let enumeration = run(&ExperimentConfig::new(Experiment::EnumAccuracy).sizes(vec![4, 6, 8]))?;
    print!("{}", enumeration.render(OutputFormat::Csv)?);
    Ok(())
}
