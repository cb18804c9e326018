//! Degree statistics, ε-regularity and the acceptability condition for
//! sampled degree sequences.

use bidegree::asymptotics::{acceptability, degree_stats, is_eps_regular, AcceptabilityParams};
use bidegree::sampling::sample_degree_stream;
use bidegree::{EdgeProb, Family, ModelSpec, Shape};

fn main() -> bidegree::Result<()> {
    let params = AcceptabilityParams::default();
    let shape = Shape::new(30, 40)?;
    let gp = ModelSpec::with_p(Family::Gp, shape, EdgeProb::parse_decimal("0.3")?)?;
    for ds in sample_degree_stream(&gp, 5, 1)? {
        let r = degree_stats(&ds, &params)?;
        println!(
            "lambda {:.4}  R_S/norm {:.3}  R_T/norm {:.3}  regular {} {}",
            r.lambda_f64(),
            r.normalised_r_s(shape).unwrap_or(f64::NAN),
            r.normalised_r_t(shape).unwrap_or(f64::NAN),
            r.eps_regular_s.regular,
            r.eps_regular_t.regular,
        );
    }

    let skewed = [0, 0, 0, 40, 40, 40];
    println!("{skewed:?} eps-regular: {:?}", is_eps_regular(&skewed, params.eps, params.c_reg));

    for x in [0.5, 0.3, 0.1, 0.02] {
        let acc = acceptability(30, 40, x, params.a)?;
        println!("density {x}: {:.3} < {:.3} ? {}", acc.lhs, acc.rhs, acc.ok);
    }
    Ok(())
}
