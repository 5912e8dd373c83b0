//! Attribute representation under seven sampling schemes, against the
//! closed-form limits each scheme converges to.

use attrinet::generate::generate_p;
use attrinet::sample::{attribute_representation, SchemeSpec};
use attrinet::theory;
use attrinet::{Graph, ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.2, 0.8],
        vec![vec![1.0, 1.0], vec![0.2, 1.0]],
        1.0,
    )?;
    let c = 0.15;
    let n = 200_000;
    let reps = 50_000;

    let sol = theory::solve(&params, c)?;
    let lim = theory::sampling_limits(&sol, &params, c, 1)?;

    let mut rng = RngStream::new(5, 0);
    let g = generate_p(&params, n, &Graph::singleton_seed(1, 2), &mut rng)?;

    let cases = [
        (SchemeSpec::Uniform, lim.uniform.clone()),
        (SchemeSpec::Degree, lim.degree.clone()),
        (SchemeSpec::InDegree, lim.in_degree.clone()),
        (SchemeSpec::PagerankWalk { c }, lim.pagerank.clone()),
        (SchemeSpec::FixedWalk { m: 1 }, lim.fixed_walk.clone()),
    ];
    println!("{:<22} {:>10} {:>10} {:>8}", "scheme", "empirical", "limit", "z");
    for (i, (scheme, theory_freq)) in cases.iter().enumerate() {
        let mut r = RngStream::new(5, 10 + i as u64);
        let rep = attribute_representation(&g, scheme, reps, &mut r)?;
        let z = (rep.attr_freq[0] - theory_freq[0]) / rep.stderr[0];
        println!(
            "{:<22} {:>10.4} {:>10.4} {:>+8.2}",
            format!("{scheme:?}"),
            rep.attr_freq[0],
            theory_freq[0],
            z
        );
    }
    println!("\nstationary walk limit (long walks, c -> 1): {:?}", lim.stationary);
    Ok(())
}
