//! Solve the closed-form large-network limits for a two-type homophilous
//! model and verify the structural identities they satisfy.

use attrinet::theory;
use attrinet::ModelParams;

fn main() -> attrinet::Result<()> {
    // two types, 30% / 70%, with like-with-like preference
    let params = ModelParams::tree(
        vec![0.3, 0.7],
        vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        1.0,
    )?;
    let c = 0.85;
    let sol = theory::solve(&params, c)?;

    println!("eta       = {:?}", sol.eta);
    println!("phi_a     = {:?}", sol.phi_a);
    println!("lambda_c  = {:.6}", sol.lambda_c);
    println!("E[R | a]  = {:?}", sol.expected_pr);
    println!("Psi       = {:?}", sol.psi);

    // pi M = pi (the mean matrix fixes the type distribution)
    for b in 0..2 {
        let lhs: f64 = (0..2).map(|a| params.pi[a] * sol.m_mat[a][b]).sum();
        println!("(pi M)[{b}] = {lhs:.12}  pi[{b}] = {:.12}", params.pi[b]);
    }
    // expected scores average to one
    let mean_r: f64 = (0..2).map(|a| params.pi[a] * sol.expected_pr[a]).sum();
    println!("sum_a pi_a E[R|a] = {mean_r:.12} (should be 1)");

    println!("\nfull solution as JSON:\n{}", sol.to_json()?);
    Ok(())
}
