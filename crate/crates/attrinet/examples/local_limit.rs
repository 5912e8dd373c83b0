//! Simulate the local limit around a uniformly chosen vertex directly and
//! check its root-degree distribution against the closed-form degree law.

use attrinet::generate::simulate_local_limit;
use attrinet::theory;
use attrinet::{ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.5, 0.5],
        vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        1.0,
    )?;
    let sol = theory::solve(&params, 0.85)?;

    let reps = 200_000;
    let mut rng = RngStream::new(41, 0);
    let mut hist = vec![0usize; 12];
    // the size distribution is heavy tailed, so leave generous headroom
    let cap = 1_000_000;
    for _ in 0..reps {
        let t = simulate_local_limit(&params, &sol.phi_ab, &sol.phi_a, Some(0), &mut rng, cap)?;
        // root degree in the limit tree: offspring plus the edge to the parent
        let deg = (t.root_offspring() + 1).min(hist.len() - 1);
        hist[deg] += 1;
    }

    let law = theory::degree_law(0, &params)?;
    println!("{:>6} {:>10} {:>10}", "degree", "simulated", "law");
    for k in 1..hist.len() - 1 {
        println!(
            "{k:>6} {:>10.5} {:>10.5}",
            hist[k] as f64 / reps as f64,
            law.pmf(k as u64)
        );
    }
    Ok(())
}
