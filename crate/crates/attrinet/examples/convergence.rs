//! Track functional statistics along one growth trajectory: attribute degree
//! shares approaching their limits and the persistence of the first vertex.

use attrinet::stats::{convergence_track, default_checkpoints};
use attrinet::theory;
use attrinet::{ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.2, 0.8],
        vec![vec![1.0, 1.0], vec![0.2, 1.0]],
        1.0,
    )?;
    let n = 500_000;
    let checkpoints = default_checkpoints(n);
    let mut rng = RngStream::new(17, 0);
    let track = convergence_track(&params, n, &checkpoints, &mut rng)?;

    let eta = theory::solve_eta(&params)?;
    println!("{:>9} {:>9} {:>9} {:>9}", "n", "share0", "share1", "first-deg");
    for (i, cp) in track.checkpoints.iter().enumerate() {
        println!(
            "{cp:>9} {:>9.4} {:>9.4} {:>9}",
            track.y_tilde[i][0],
            track.y_tilde[i][1],
            track.first_deg[i].iter().sum::<u64>()
        );
    }
    println!("limits: eta = {eta:?}");
    println!(
        "first-vertex degree growth exponents (log-log slope): {:?}",
        track.first_deg_slope
    );
    Ok(())
}
