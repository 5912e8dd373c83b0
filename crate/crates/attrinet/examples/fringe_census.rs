//! Count small descendant subtrees ("fringe classes") in a generated tree and
//! compare their frequencies to the limiting class probabilities.

use attrinet::generate::generate_p;
use attrinet::stats::{census, compare_fringe};
use attrinet::theory;
use attrinet::{Graph, ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.5, 0.5],
        vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        1.0,
    )?;
    let sol = theory::solve(&params, 0.85)?;

    let n = 200_000;
    let mut rng = RngStream::new(21, 0);
    let g = generate_p(&params, n, &Graph::singleton_seed(0, 2), &mut rng)?;

    let cen = census(&g, 3)?;
    let rows = compare_fringe(&cen, &sol, &params)?;
    println!(
        "{:<28} {:>6} {:>10} {:>10} {:>7}",
        "class", "size", "empirical", "theory", "z"
    );
    for r in &rows {
        println!(
            "{:<28} {:>6} {:>10.5} {:>10.5} {:>+7.2}",
            r.class, r.size, r.empirical, r.theory, r.z
        );
    }
    Ok(())
}
