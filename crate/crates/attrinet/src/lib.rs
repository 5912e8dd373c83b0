//! Attributed growing networks: simulation and exact limit theory.
//!
//! Vertices arrive one at a time carrying a type in [K] and attach to
//! existing vertices with propensity kappa(type of target, type of newcomer)
//! times degree^gamma. The crate grows such networks at scale, computes the
//! closed-form limits of their degree, Page-rank, fringe and sampling
//! statistics, and cross-checks simulation against theory.

pub mod centrality;
pub mod config;
pub mod error;
pub mod fringe;
pub mod generate;
pub mod graph;
pub mod params;
pub mod rng;
pub mod sample;
pub mod stats;
pub mod theory;

pub use error::{Error, Result};
pub use graph::Graph;
pub use params::ModelParams;
pub use rng::RngStream;
pub use theory::TheorySolution;
#[test]
fn dbg_rare() {
    use crate::params::ModelParams;
    use crate::theory::*;
    let p = ModelParams::rare_minority(1e-6, 0.5).unwrap();
    let eta = solve_eta(&p).unwrap();
    eprintln!("pi={:?} eta={:?}", p.pi, eta);
    let der = derived_quantities(&eta, &p);
    eprintln!("phi_a={:?}", der.phi_a);
    // gradient check
    let k = 2;
    let w: Vec<f64> = (0..k).map(|a| p.m[a] as f64 * p.pi[a]).collect();
    let s: Vec<f64> = (0..k).map(|j| (0..k).map(|l| eta[l]*p.kappa[l][j]).sum()).collect();
    for a in 0..k {
        let t: f64 = (0..k).map(|j| w[j]*p.kappa[a][j]/s[j]).sum();
        let g = eta[a] - 0.5*w[a] - 0.5*eta[a]*t;
        eprintln!("g[{a}]={:e} rel={:e}", g, g/eta[a]);
    }
    // left eigen check of M
    let m: Vec<Vec<f64>> = (0..k).map(|a| (0..k).map(|b| der.phi_ab[a][b]/(2.0-der.phi_a[a])).collect()).collect();
    for b in 0..k {
        let lhs: f64 = (0..k).map(|a| p.pi[a]*m[a][b]).sum();
        eprintln!("piM[{b}]-pi={:e}", lhs - p.pi[b]);
    }
    let spec = spectral_data(&der, &p, 0.85);
    match spec { Ok(s) => eprintln!("psi={:?}", s.psi), Err(e) => eprintln!("err {e}") }
}
