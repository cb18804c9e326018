//! Seeded degree-sequence sampling from each model family, written as JSON lines.

use bidegree::harness::write_samples_jsonl;
use bidegree::sampling::sample_degree_stream;
use bidegree::{EdgeProb, Family, ModelSpec, Shape};

fn main() -> bidegree::Result<()> {
    let shape = Shape::new(4, 6)?;
    let p = EdgeProb::parse_decimal("0.3")?;
    let models = [
        ModelSpec::with_p(Family::Gp, shape, p.clone())?,
        ModelSpec::with_k(Family::Gk, shape, 8)?,
        ModelSpec::with_t(Family::Gt, shape, vec![1, 2, 0, 4, 1, 3])?,
        ModelSpec::with_p(Family::Ip, shape, p.clone())?,
        ModelSpec::with_p(Family::Bp, shape, p.clone())?,
        ModelSpec::with_k(Family::Bk, shape, 8)?,
        ModelSpec::with_t(Family::Bt, shape, vec![1, 2, 0, 4, 1, 3])?,
        ModelSpec::with_p(Family::Vp, shape, p)?,
    ];
    let stdout = std::io::stdout();
    for model in &models {
        println!("# {model}");
        // the same seed always gives the same stream, whatever the thread count
        let samples = sample_degree_stream(model, 3, 42)?;
        write_samples_jsonl(&samples, stdout.lock())?;
    }
    Ok(())
}
