//! Serialize a generated network to the vertices/edges CSV format and read it
//! back unchanged.

use attrinet::generate::generate_p;
use attrinet::{Graph, ModelParams, RngStream};

fn main() -> attrinet::Result<()> {
    let params = ModelParams::tree(
        vec![0.5, 0.5],
        vec![vec![2.0, 1.0], vec![1.0, 2.0]],
        1.0,
    )?;
    let mut rng = RngStream::new(3, 0);
    let g = generate_p(&params, 1000, &Graph::singleton_seed(0, 2), &mut rng)?;

    let mut vertices = Vec::new();
    let mut edges = Vec::new();
    g.write_vertices_csv(&mut vertices)?;
    g.write_edges_csv(&mut edges)?;

    println!("vertices.csv head:");
    for line in String::from_utf8_lossy(&vertices).lines().take(5) {
        println!("  {line}");
    }
    println!("edges.csv head:");
    for line in String::from_utf8_lossy(&edges).lines().take(5) {
        println!("  {line}");
    }

    let back = Graph::read_csv(&vertices[..], &edges[..])?;
    println!("round-trip equal: {}", back == g);
    Ok(())
}
