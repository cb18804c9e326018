//! Probability of one degree sequence under every model, exact where the
//! arithmetic allows it and in log space otherwise.

use bidegree::exact::exact_pmf;
use bidegree::models::{log_pmf_detailed, CountProvider};
use bidegree::{DegreeSequence, EdgeProb, Family, ModelSpec, Shape};

fn main() -> bidegree::Result<()> {
    let shape = Shape::new(3, 4)?;
    let ds = DegreeSequence::new(shape, vec![2, 1, 3], vec![1, 2, 2, 1])?;
    let p = EdgeProb::ratio(1, 2)?;
    let models = [
        ModelSpec::with_p(Family::Gp, shape, p.clone())?,
        ModelSpec::with_k(Family::Gk, shape, 6)?,
        ModelSpec::with_t(Family::Gt, shape, vec![1, 2, 2, 1])?,
        ModelSpec::with_p(Family::Ip, shape, p.clone())?,
        ModelSpec::with_p(Family::Bp, shape, p.clone())?,
        ModelSpec::with_k(Family::Bk, shape, 6)?,
        ModelSpec::with_t(Family::Bt, shape, vec![1, 2, 2, 1])?,
    ];
    println!("degree sequence {ds}");
    for model in &models {
        let exact = exact_pmf(model, &ds)?;
        let logp = log_pmf_detailed(model, &ds, CountProvider::Exact)?;
        let text = exact.exact().map(|r| r.to_string()).unwrap_or_default();
        println!("{:<24} {text:>14}  ln {:.12}", model.to_string(), logp.prob.ln());
    }

    // Vp has no closed form; it goes through quadrature
    let vp = ModelSpec::with_p(Family::Vp, shape, p)?;
    println!("{:<24} {:>14}  ln {:.12}", vp.to_string(), "", log_pmf_detailed(&vp, &ds, CountProvider::Exact)?.prob.ln());

    // the asymptotic count provider works past the exact-count caps
    let big = Shape::new(40, 40)?;
    let ds = DegreeSequence::new(big, vec![20; 40], vec![20; 40])?;
    let gk = ModelSpec::with_k(Family::Gk, big, 800)?;
    let r = log_pmf_detailed(&gk, &ds, CountProvider::Asymptotic)?;
    println!("{gk} at the regular sequence: ln {:.6}", r.prob.ln());
    Ok(())
}
