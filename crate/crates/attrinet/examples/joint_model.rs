//! The joint-draw model: newcomer type and parent are drawn together with
//! weight nu(b) kappa(a,b) deg(v). With the resolving choice of nu the
//! realized attribute frequencies match the target distribution pi.

use attrinet::generate::generate_u;
use attrinet::theory;
use attrinet::{Graph, ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.3, 0.7],
        vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        1.0,
    )?;
    let sol = theory::solve(&params, 0.85)?;
    println!("resolving nu = {:?}", sol.nu);

    let with_nu = params.clone().with_nu(sol.nu.clone())?;
    let n = 100_000;
    let mut rng = RngStream::new(13, 0);
    let g = generate_u(&with_nu, n, &Graph::singleton_seed(0, 2), &mut rng)?;

    let counts = g.attribute_counts();
    for a in 0..2 {
        let freq = counts[a] as f64 / g.n() as f64;
        let se = (params.pi[a] * (1.0 - params.pi[a]) / g.n() as f64).sqrt();
        println!(
            "type {a}: frequency {freq:.4}, target pi {:.4}, z {:+.2}",
            params.pi[a],
            (freq - params.pi[a]) / se
        );
    }
    Ok(())
}
