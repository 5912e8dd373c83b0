//! Ranking bias of subgraph sampling: how the minority share among
//! high-degree vertices shifts when only part of the network is observed.

use attrinet::generate::generate_p;
use attrinet::sample::{empirical_bias, SchemeSpec};
use attrinet::theory;
use attrinet::{Graph, ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.2, 0.8],
        vec![vec![1.0, 1.0], vec![0.2, 1.0]],
        1.0,
    )?;
    let (p, alpha) = (0.5, 0.01);
    let limit = theory::bias_limit(&params, p, alpha)?;
    println!("limiting bias at p={p}, alpha={alpha}: {limit:+.5}");

    let n = 100_000;
    let reps = 20;
    for scheme in [
        SchemeSpec::InducedNodes { p },
        SchemeSpec::IncidentEdges { p },
    ] {
        let mut vals = Vec::with_capacity(reps);
        for r in 0..reps {
            let mut rng = RngStream::new(31, r as u64);
            let g = generate_p(&params, n, &Graph::singleton_seed(1, 2), &mut rng)?;
            vals.push(empirical_bias(&g, &scheme, alpha, &mut rng)?);
        }
        let mean = vals.iter().sum::<f64>() / reps as f64;
        let var =
            vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
        println!(
            "{scheme:?}: mean empirical bias {mean:+.5} +- {:.5} over {reps} runs",
            (var / reps as f64).sqrt()
        );
    }
    Ok(())
}
