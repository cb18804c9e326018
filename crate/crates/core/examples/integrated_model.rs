//! The integrated binomial model: its kernel, the normalizer V(p), the
//! probability of a degree sequence, and transferring moments from the
//! binomial model.

use bidegree::models::{transfer_expectation, transfer_variance, vp_log_pmf, CountProvider, KernelParams};
use bidegree::{DegreeSequence, Shape};

fn main() -> bidegree::Result<()> {
    let shape = Shape::new(6, 8)?;
    for p in [0.05, 0.3, 0.5] {
        let kp = KernelParams::new(p, shape)?;
        println!("p {p}: sigma {:.5}, V(p) {:.10}", kp.sigma(), kp.normalizer());
    }

    let ds = DegreeSequence::new(shape, vec![4; 6], vec![3; 8])?;
    let prob = vp_log_pmf(0.5, &ds, CountProvider::Exact)?;
    println!("P[{ds}] = {:.6e}", prob.value());

    // Under Bp the first row degree is Binomial(n, p); carry its moments over
    let n = shape.n() as f64;
    let mean = transfer_expectation(0.3, shape, |x| n * x)?;
    let var = transfer_variance(0.3, shape, |x| n * x, |x| n * x * (1.0 - x))?;
    println!("first row degree under Vp(0.3): mean {mean:.6}, variance {var:.6}");
    Ok(())
}
