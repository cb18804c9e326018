//! Checks in exact arithmetic that Gp mixes Gk and Gt, and that Gk and Gt
//! arise by conditioning.

use bidegree::models::{mixture_residual, MixtureIdentity, MixtureParams};
use bidegree::{EdgeProb, Shape};

fn main() -> bidegree::Result<()> {
    let params = MixtureParams {
        p: EdgeProb::ratio(2, 7)?,
        k: 5,
        t: vec![2, 1, 2],
    };
    for shape in [Shape::new(3, 3)?, Shape::digraph(3)?, Shape::new(4, 3)?] {
        for id in [MixtureIdentity::Relp, MixtureIdentity::RelM, MixtureIdentity::Relt] {
            let r = mixture_residual(id, shape, &params)?;
            let kind = if shape.loops_forbidden() { "digraph" } else { "bipartite" };
            println!("{kind} {}x{} {id:?}: {} points, largest residual {}", shape.m(), shape.n(), r.points, r.max_abs);
        }
    }
    Ok(())
}
