//! Grow an attributed preferential-attachment network and summarize it.

use attrinet::generate::generate_p;
use attrinet::stats::census;
use attrinet::theory;
use attrinet::{Graph, ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.2, 0.8],
        vec![vec![1.0, 1.0], vec![0.2, 1.0]],
        1.0,
    )?;
    let n = 100_000;
    let mut rng = RngStream::new(7, 0);
    let g = generate_p(&params, n, &Graph::singleton_seed(1, 2), &mut rng)?;

    let cen = census(&g, 0)?;
    println!("n = {}, edges = {}", g.n(), g.num_edges());
    println!("attribute counts  = {:?}", cen.attr_counts);
    println!("degree shares     = {:?}", cen.y_tilde);
    println!("max degree        = {:?}", cen.max_deg);
    println!("homophily D       = {:?}", cen.homophily_d);

    // the degree shares should already sit near their closed-form limit
    let eta = theory::solve_eta(&params)?;
    println!("eta (limit)       = {eta:?}");
    Ok(())
}
