//! Exact counts of 0-1 matrices and loop-free digraphs with given margins,
//! checked against brute force and compared with the asymptotic estimate.

use bidegree::asymptotics::estimate_log_count;
use bidegree::exact::{brute_force_count, count, gale_ryser};
use bidegree::{DegreeSequence, Shape};

fn show(ds: &DegreeSequence) -> bidegree::Result<()> {
    let exact = count(ds)?;
    let est = estimate_log_count(ds)?;
    let brute = if ds.shape().cell_count() <= 20 {
        brute_force_count(ds)?.value.to_string()
    } else {
        "-".into()
    };
    println!(
        "{ds}: exact {} (brute {brute}), estimate {:.3}",
        exact.value,
        est.ln_estimate.exp()
    );
    Ok(())
}

fn main() -> bidegree::Result<()> {
    let sq = |n| Shape::new(n, n);
    show(&DegreeSequence::new(sq(4)?, vec![2; 4], vec![2; 4])?)?;
    show(&DegreeSequence::new(Shape::new(3, 5)?, vec![3, 2, 4], vec![2, 2, 1, 2, 2])?)?;
    show(&DegreeSequence::new(sq(10)?, vec![5; 10], vec![5; 10])?)?;

    // loop-free digraphs: row i and column i cannot meet
    show(&DegreeSequence::new(Shape::digraph(3)?, vec![1; 3], vec![1; 3])?)?;
    show(&DegreeSequence::new(Shape::digraph(8)?, vec![4; 8], vec![4; 8])?)?;

    println!("gale-ryser [3,3,0] vs [2,2,2]: {}", gale_ryser(&[3, 3, 0], &[2, 2, 2]));
    println!("gale-ryser [3,3,0] vs [3,3,0]: {}", gale_ryser(&[3, 3, 0], &[3, 3, 0]));
    Ok(())
}
